#include "abuse/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "abuse/augmentation.hpp"
#include "abuse/corpus.hpp"
#include "abuse/embeddings.hpp"
#include "abuse/ensemble.hpp"
#include "abuse/error.hpp"
#include "abuse/harness.hpp"
#include "abuse/metrics.hpp"
#include "abuse/network.hpp"
#include "abuse/pipeline.hpp"
#include "abuse/preprocess.hpp"
#include "abuse/social_features.hpp"

namespace abuse {

namespace fs = std::filesystem;

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

RunConfig config_or_default(const std::string& path) {
  return path.empty() ? RunConfig{} : load_run_config(path);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

Dataset load_logged(const fs::path& path, std::ostream& err,
                    const ColumnSchema& schema = {}) {
  LoadResult r = load_dataset(path, schema);
  if (r.report.dropped() > 0) {
    err << path.string() << ": kept " << r.dataset.size() << " of " << r.report.total_rows
        << " rows (missing text " << r.report.missing_text << ", missing field "
        << r.report.missing_field << ", bad count " << r.report.malformed_count
        << ", bad label " << r.report.malformed_label << ", duplicate id "
        << r.report.duplicate_id << ")\n";
  }
  for (const auto& w : r.report.warnings) err << "warning: " << w << '\n';
  return std::move(r.dataset);
}

std::string member_name(const MemberSpec& m) {
  return m.method + "/" + std::to_string(m.seq_len);
}

// Label predictions of the single-member pre-classifier, used as the
// classifier half of the polarity max rule.
std::vector<int> pre_classifier_labels(const Dataset& dataset, const RunConfig& config,
                                       const ExtendedAbusiveSet& lexicon,
                                       const MemberSpec& spec, const ModelParams& params,
                                       const NormalizationStats& stats,
                                       const PreprocessConfig& pre) {
  const PolarityIndex polarity = build_polarity(dataset, config, {&lexicon, nullptr});
  const auto raw = raw_social_table(dataset, polarity, config.feature_set);
  FeatureTable table{text_features(dataset, spec.source, spec.seq_len, pre),
                     social_features(raw, stats, social_mask(config.mask)),
                     std::vector<int>(dataset.size(), 0)};
  std::vector<int> labels;
  for (const auto& p : predict_batch(params, table, config.train.threshold)) {
    labels.push_back(p.label);
  }
  return labels;
}

NetworkDims member_dims(const RunConfig& config, const MemberSpec& spec) {
  NetworkDims dims = config.dims;
  dims.text_in = spec.seq_len * spec.source.dim;
  return dims;
}

void check_source(const MemberSpec& spec) {
  if (!spec.source.mock && !fs::exists(spec.source.path)) {
    throw ConfigError("member " + member_name(spec) + ": embedding file " +
                      spec.source.path.string() + " not found");
  }
}

NormalizationStats load_stats(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return NormalizationStats::load(in);
}

void save_stats(const fs::path& path, const NormalizationStats& stats) {
  auto out = open_output(path);
  stats.save(out);
}

std::string format_double(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

// ---------------------------------------------------------------- commands

int cmd_preprocess(const std::string& input, const std::string& config_path,
                   const std::string& output, Streams io) {
  const RunConfig config = config_or_default(config_path);
  const PreprocessConfig pre = make_preprocess_config(config);
  const Dataset ds = preprocess_dataset(load_logged(input, io.err, config.columns), pre);
  save_dataset(ds, output);
  io.err << "preprocessed " << ds.size() << " comments\n";
  return kExitOk;
}

int cmd_split(const std::string& input, double fraction, std::uint64_t seed,
              const std::string& train_out, const std::string& test_out, Streams io) {
  const auto [train_set, test_set] = split(load_logged(input, io.err), fraction, seed);
  save_dataset(train_set, train_out);
  save_dataset(test_set, test_out);
  io.err << "train " << train_set.size() << ", test " << test_set.size() << '\n';
  return kExitOk;
}

int cmd_augment(const std::string& input, const std::string& lexicon,
                const std::string& rules_path, std::size_t max_variants,
                std::uint64_t seed, const std::string& output, Streams io) {
  const Dataset train_set = load_logged(input, io.err);
  const AbusiveSet base = load_abusive_words(lexicon);
  SubstitutionRules rules = rules_path.empty() ? SubstitutionRules::defaults()
                                               : SubstitutionRules::from_file(rules_path);
  rules.max_variants_per_word = max_variants;
  std::vector<std::string> warnings;
  const Dataset out = augment(train_set, extend_spellings(base, rules), seed, &warnings);
  for (const auto& w : warnings) io.err << "warning: " << w << '\n';
  save_dataset(out, output);
  io.err << "augmented " << train_set.size() << " -> " << out.size() << " comments\n";
  return kExitOk;
}

int cmd_train(const std::string& train_path, const std::vector<std::string>& embeddings,
              const std::vector<std::uint64_t>& mock_seeds,
              const std::vector<std::size_t>& seq_lens, const std::string& config_path,
              const std::string& manifest_path, Streams io) {
  const RunConfig config = config_or_default(config_path);
  if (embeddings.empty() == mock_seeds.empty()) {
    throw ConfigError("give either --embeddings (6 files) or --mock-seed (3 seeds)");
  }
  std::vector<EmbeddingSource> sources;
  for (const auto& e : embeddings) sources.push_back(EmbeddingSource::parse(e));
  for (auto seed : mock_seeds) {
    EmbeddingSource s;
    s.seed = seed;
    s.dim = config.token_dim;
    sources.push_back(s);
  }
  const auto specs = member_specs(config, seq_lens, sources);
  for (const auto& spec : specs) check_source(spec);

  const Dataset data = load_logged(train_path, io.err);
  const std::vector<int> labels = require_labels(data);
  const PreprocessConfig pre = make_preprocess_config(config);
  const ExtendedAbusiveSet lexicon = load_extended_lexicon(config);
  const SocialMask mask = social_mask(config.mask);

  const fs::path manifest_file(manifest_path);
  const fs::path dir = manifest_file.has_parent_path() ? manifest_file.parent_path() : ".";
  fs::create_directories(dir);

  Manifest manifest;
  manifest.meta["config"] = config_path.empty() ? "" : fs::absolute(config_path).string();
  manifest.meta["threshold"] = format_double(config.train.threshold);
  manifest.meta["stats"] = "stats.txt";

  const auto log_epoch = [&](const std::string& who) {
    return [&io, who](std::size_t epoch, double loss) {
      io.err << who << " epoch " << epoch << " loss " << std::setprecision(6) << loss << '\n';
    };
  };

  const std::vector<int>* cls_labels = nullptr;
  std::vector<int> pre_labels;
  if (config.pre_classifier) {
    const auto& best = *std::find_if(specs.begin(), specs.end(),
                                     [](const MemberSpec& s) { return s.is_best; });
    const PolarityIndex polarity = build_polarity(data, config, {&lexicon, nullptr});
    const auto raw = raw_social_table(data, polarity, config.feature_set);
    const NormalizationStats pre_stats = NormalizationStats::fit(raw);
    FeatureTable table{text_features(data, best.source, best.seq_len, pre),
                       social_features(raw, pre_stats, mask), labels};
    const TrainResult r =
        train(table, member_dims(config, best), config.train, log_epoch("pre-classifier"));
    save_checkpoint(dir / "pre_classifier.amdl", r.params);
    save_stats(dir / "pre_classifier_stats.txt", pre_stats);
    manifest.meta["pre_classifier"] = "pre_classifier.amdl";
    manifest.meta["pre_classifier_stats"] = "pre_classifier_stats.txt";
    pre_labels =
        pre_classifier_labels(data, config, lexicon, best, r.params, pre_stats, pre);
    cls_labels = &pre_labels;
  }

  const PolarityIndex polarity = build_polarity(data, config, {&lexicon, cls_labels});
  const auto raw = raw_social_table(data, polarity, config.feature_set);
  const NormalizationStats stats = NormalizationStats::fit(raw);
  save_stats(dir / "stats.txt", stats);
  const Matrix social = social_features(raw, stats, mask);

  for (std::size_t k = 0; k < specs.size(); ++k) {
    const MemberSpec& spec = specs[k];
    FeatureTable table{text_features(data, spec.source, spec.seq_len, pre), social, labels};
    TrainConfig tc = config.train;
    tc.init_offset = k + 1;
    const TrainResult r =
        train(table, member_dims(config, spec), tc, log_epoch("member " + member_name(spec)));
    const std::string stem = "member_" + std::to_string(k);
    save_checkpoint(dir / (stem + ".amdl"), r.params);
    write_loss_history(dir / (stem + "_loss.csv"), r.epoch_losses);
    manifest.entries.push_back(
        {spec.method, spec.seq_len, stem + ".amdl", spec.source.to_string(), spec.is_best});
  }
  write_manifest(manifest_file, manifest);
  io.err << "wrote " << manifest_file.string() << '\n';
  return kExitOk;
}

int cmd_predict(const std::string& manifest_path, const std::string& input,
                const std::string& output, const std::string& trace_path, Streams io) {
  const Manifest manifest = read_manifest(manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();
  const auto meta = [&](const std::string& key) -> std::string {
    auto it = manifest.meta.find(key);
    return it == manifest.meta.end() ? std::string() : it->second;
  };
  const RunConfig config = config_or_default(meta("config"));
  const PreprocessConfig pre = make_preprocess_config(config);
  const ExtendedAbusiveSet lexicon = load_extended_lexicon(config);
  const SocialMask mask = social_mask(config.mask);
  const double threshold = config.train.threshold;

  std::vector<MemberSpec> specs;
  std::vector<EnsembleMember> members;
  for (const auto& e : manifest.entries) {
    MemberSpec spec{e.method, e.seq_len, EmbeddingSource::parse(e.embedding), e.is_best};
    if (!spec.source.mock) {
      spec.source.dim = config.token_dim;
      if (spec.source.path.is_relative()) spec.source.path = dir / spec.source.path;
    }
    check_source(spec);
    members.push_back({e.method, e.seq_len, load_checkpoint(e.checkpoint), e.is_best});
    specs.push_back(std::move(spec));
  }

  const Dataset data = load_logged(input, io.err);
  std::vector<int> pre_labels;
  const std::vector<int>* cls_labels = nullptr;
  if (!meta("pre_classifier").empty()) {
    const auto best = best_member_index(members);
    const ModelParams params = load_checkpoint(dir / meta("pre_classifier"));
    pre_labels = pre_classifier_labels(data, config, lexicon, specs[best], params,
                                       load_stats(dir / meta("pre_classifier_stats")), pre);
    cls_labels = &pre_labels;
  }
  const PolarityIndex polarity = build_polarity(data, config, {&lexicon, cls_labels});
  const auto raw = raw_social_table(data, polarity, config.feature_set);
  const Matrix social = social_features(raw, load_stats(dir / meta("stats")), mask);

  std::vector<Matrix> text;
  std::vector<char> skip(data.size(), 0);
  for (const auto& spec : specs) {
    std::vector<std::size_t> missing;
    text.push_back(text_features(data, spec.source, spec.seq_len, pre, &missing));
    for (auto i : missing) skip[i] = 1;
  }

  auto out = open_output(output);
  std::optional<std::ofstream> trace;
  if (!trace_path.empty()) {
    trace = open_output(trace_path);
    *trace << "comment_id,member,method,seq_len,probability,label,is_best\n";
  }
  out << "comment_id,label,probability,decision\n";
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string id = quote_field(data[i].comment_id, ',');
    if (skip[i]) {
      io.err << "skipped " << data[i].comment_id << ": missing embedding\n";
      ++skipped;
      continue;
    }
    std::vector<std::span<const double>> rows;
    for (const auto& m : text) rows.push_back(m.row(i));
    const EnsembleTrace t = run_ensemble(members, rows, social.row(i), threshold);
    double mean = 0.0;
    for (const auto& m : t.members) mean += m.probability;
    mean /= static_cast<double>(t.members.size());
    out << id << ',' << t.vote.label << ',' << format_double(mean) << ','
        << to_string(t.vote.path) << '\n';
    if (trace) {
      for (std::size_t k = 0; k < t.members.size(); ++k) {
        *trace << id << ',' << k << ',' << members[k].method << ',' << members[k].seq_len
               << ',' << format_double(t.members[k].probability) << ','
               << t.members[k].label << ',' << (members[k].is_best ? 1 : 0) << '\n';
      }
    }
  }
  if (skipped > 0) io.err << "skipped " << skipped << " comments without embeddings\n";
  io.err << "predicted " << data.size() - skipped << " comments\n";
  return kExitOk;
}

// comment_id -> (label, probability) from a predictions file.
std::map<std::string, std::pair<int, double>> read_predictions(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto rows = parse_delimited(buf.str(), ',');
  if (rows.empty()) throw DataError(path.string() + ": empty predictions file");
  const auto& header = rows.front();
  const auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto id_col = column("comment_id");
  const auto label_col = column("label");
  const auto prob_col = column("probability");
  if (!id_col || !label_col) {
    throw DataError(path.string() + ": needs comment_id and label columns");
  }
  std::map<std::string, std::pair<int, double>> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw DataError(path.string() + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " fields");
    }
    const std::string& l = row[*label_col];
    if (l != "0" && l != "1") {
      throw DataError(path.string() + ": bad label '" + l + "' on row " +
                      std::to_string(r + 1));
    }
    double p = l == "1" ? 1.0 : 0.0;
    if (prob_col) {
      try {
        p = std::stod(row[*prob_col]);
      } catch (const std::exception&) {
        throw DataError(path.string() + ": bad probability on row " + std::to_string(r + 1));
      }
    }
    out[row[*id_col]] = {l == "1" ? 1 : 0, p};
  }
  return out;
}

int cmd_evaluate(const std::string& predictions_path, const std::string& labels_path,
                 bool by_language, const std::string& output, Streams io) {
  const auto predictions = read_predictions(predictions_path);
  const Dataset data = load_logged(labels_path, io.err);
  std::vector<int> preds;
  std::vector<int> labels;
  std::vector<std::string> languages;
  std::size_t unmatched = 0;
  for (const auto& c : data.comments()) {
    if (!c.label) continue;
    auto it = predictions.find(c.comment_id);
    if (it == predictions.end()) {
      ++unmatched;
      continue;
    }
    preds.push_back(it->second.first);
    labels.push_back(*c.label);
    languages.push_back(by_language ? c.language : std::string("ALL"));
  }
  if (unmatched > 0) io.err << unmatched << " labeled comments have no prediction\n";
  auto rows = evaluation_report(preds, labels, languages);
  if (!by_language) rows.erase(rows.begin(), rows.end() - 1);
  if (output.empty()) {
    write_report(io.out, rows);
  } else {
    auto out = open_output(output);
    write_report(out, rows);
  }
  return kExitOk;
}

int cmd_correlate(const std::string& input, const std::string& config_path,
                  const std::string& features, const std::string& predictions_path,
                  const std::string& output, Streams io) {
  const RunConfig config = config_or_default(config_path);
  const ExtendedAbusiveSet lexicon = load_extended_lexicon(config);
  const Dataset data = load_logged(input, io.err);
  const PolarityIndex polarity = build_polarity(data, config, {&lexicon, nullptr});
  std::vector<std::string> names = default_correlation_features();
  if (!features.empty()) {
    names.clear();
    std::stringstream ss(features);
    for (std::string f; std::getline(ss, f, ',');) {
      if (!f.empty()) names.push_back(f);
    }
  }
  std::vector<double> probabilities;
  const std::vector<double>* preds = nullptr;
  if (!predictions_path.empty()) {
    const auto p = read_predictions(predictions_path);
    for (const auto& c : data.comments()) {
      auto it = p.find(c.comment_id);
      if (it == p.end()) throw DataError("no prediction for comment '" + c.comment_id + "'");
      probabilities.push_back(it->second.second);
    }
    preds = &probabilities;
  }
  std::vector<CorrelationRow> rows;
  try {
    rows = correlation_report(data, polarity, names, preds);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (output.empty()) {
    write_correlation_report(io.out, rows);
  } else {
    auto out = open_output(output);
    write_correlation_report(out, rows);
  }
  return kExitOk;
}

void write_lexicon(const fs::path& path, const AbusiveSet& set) {
  auto out = open_output(path);
  for (const auto& [lang, words] : set.words) {
    out << "#lang:" << lang << '\n';
    for (const auto& w : words) out << w << '\n';
  }
}

int cmd_synth(const std::string& spec_path, std::optional<std::uint64_t> seed,
              const std::string& output, const std::string& lexicon_output, Streams io) {
  CorpusSpec spec = spec_path.empty() ? CorpusSpec{} : load_corpus_spec(spec_path);
  if (seed) spec.seed = *seed;
  const AbusiveSet lexicon = synthetic_lexicon(spec);
  const Dataset data = generate_corpus(spec, lexicon);
  save_dataset(data, output);
  if (!lexicon_output.empty()) write_lexicon(lexicon_output, lexicon);
  io.err << "generated " << data.size() << " comments\n";
  return kExitOk;
}

int cmd_ablate(const std::string& spec_path, std::optional<std::uint64_t> seed,
               std::size_t epochs, const std::string& output, Streams io) {
  ExperimentConfig config;
  if (!spec_path.empty()) config.corpus = load_corpus_spec(spec_path);
  if (seed) config.corpus.seed = *seed;
  config.train.epochs = epochs;
  const auto rows = run_experiment(config);
  if (output.empty()) {
    write_ablation_table(io.out, rows);
  } else {
    auto out = open_output(output);
    write_ablation_table(out, rows);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"User-aware abusive comment classification"};
  app.name("abuse");
  app.require_subcommand(1);
  Streams io{out, err};

  std::string input, output, config, manifest, trace, predictions, labels, spec;
  std::string lexicon, rules, features, lexicon_out, train_out, test_out;
  std::vector<std::string> embeddings;
  std::vector<std::uint64_t> mock_seeds;
  std::vector<std::size_t> seq_lens{64, 128};
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> synth_seed;
  std::size_t max_variants = 32;
  std::size_t epochs = 10;
  double fraction = 0.2;
  bool by_language = false;

  auto* pre = app.add_subcommand("preprocess", "Clean, transliterate and normalise text");
  pre->add_option("--input", input, "Dataset file")->required();
  pre->add_option("--config", config, "Run configuration (INI)");
  pre->add_option("--output", output, "Output dataset")->required();

  auto* sp = app.add_subcommand("split", "Stratified train/test split");
  sp->add_option("--input", input, "Dataset file")->required();
  sp->add_option("--test-fraction", fraction, "Test share in (0,1)")->capture_default_str();
  sp->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  sp->add_option("--train-output", train_out, "Train dataset")->required();
  sp->add_option("--test-output", test_out, "Test dataset")->required();

  auto* aug = app.add_subcommand("augment", "Add lexicon-prefixed abusive samples");
  aug->add_option("--input", input, "Preprocessed train dataset")->required();
  aug->add_option("--lexicon", lexicon, "Abusive word list")->required();
  aug->add_option("--rules", rules, "Spelling substitution rules (default built-in)");
  aug->add_option("--max-variants", max_variants, "Variants per word, base included")
      ->capture_default_str();
  aug->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  aug->add_option("--output", output, "Augmented dataset")->required();

  auto* tr = app.add_subcommand("train", "Train the six ensemble members");
  tr->add_option("--train", input, "Preprocessed (augmented) train dataset")->required();
  tr->add_option("--embeddings", embeddings,
                 "Embedding file per member, method-major (6 files)");
  tr->add_option("--mock-seed", mock_seeds, "Mock encoder seed per method (3 seeds)");
  tr->add_option("--seq-len", seq_lens, "The two sequence lengths")
      ->expected(2)
      ->capture_default_str();
  tr->add_option("--config", config, "Run configuration (INI)");
  tr->add_option("--out-manifest", manifest, "Manifest path; checkpoints go beside it")
      ->required();

  auto* pr = app.add_subcommand("predict", "Ensemble prediction");
  pr->add_option("--manifest", manifest, "Manifest written by train")->required();
  pr->add_option("--input", input, "Preprocessed dataset")->required();
  pr->add_option("--output", output, "Predictions file")->required();
  pr->add_option("--trace", trace, "Per-member output file");

  auto* ev = app.add_subcommand("evaluate", "Accuracy, precision, recall, F1");
  ev->add_option("--predictions", predictions, "Predictions file")->required();
  ev->add_option("--labels", labels, "Labeled dataset")->required();
  ev->add_flag("--by-language", by_language, "One row per language plus ALL");
  ev->add_option("--output", output, "Report file (default stdout)");

  auto* co = app.add_subcommand("correlate", "Point-biserial feature correlations");
  co->add_option("--input", input, "Preprocessed labeled dataset")->required();
  co->add_option("--config", config, "Run configuration naming the lexicon");
  co->add_option("--features", features, "Comma-separated feature names (default all)");
  co->add_option("--predictions", predictions, "Predictions for contextual_embeddings");
  co->add_option("--output", output, "Report file (default stdout)");

  auto* sy = app.add_subcommand("synth", "Generate a synthetic corpus");
  sy->add_option("--spec", spec, "Corpus spec (INI, [corpus] section)");
  sy->add_option("--seed", synth_seed, "Overrides the spec seed");
  sy->add_option("--output", output, "Corpus file")->required();
  sy->add_option("--lexicon-output", lexicon_out, "Write the planted lexicon here");

  auto* ab = app.add_subcommand("ablate", "Feature-mask ablation on a synthetic corpus");
  ab->add_option("--spec", spec, "Corpus spec (INI, [corpus] section)");
  ab->add_option("--seed", synth_seed, "Overrides the spec seed");
  ab->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
  ab->add_option("--output", output, "Table file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (pre->parsed()) return cmd_preprocess(input, config, output, io);
    if (sp->parsed()) return cmd_split(input, fraction, seed, train_out, test_out, io);
    if (aug->parsed()) {
      return cmd_augment(input, lexicon, rules, max_variants, seed, output, io);
    }
    if (tr->parsed()) {
      return cmd_train(input, embeddings, mock_seeds, seq_lens, config, manifest, io);
    }
    if (pr->parsed()) return cmd_predict(manifest, input, output, trace, io);
    if (ev->parsed()) return cmd_evaluate(predictions, labels, by_language, output, io);
    if (co->parsed()) {
      return cmd_correlate(input, config, features, predictions, output, io);
    }
    if (sy->parsed()) return cmd_synth(spec, synth_seed, output, lexicon_out, io);
    if (ab->parsed()) return cmd_ablate(spec, synth_seed, epochs, output, io);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace abuse
