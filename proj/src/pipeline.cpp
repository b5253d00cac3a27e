#include "abuse/pipeline.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <stdexcept>

#include "abuse/embeddings.hpp"
#include "abuse/error.hpp"
#include "text_util.hpp"

namespace abuse {

namespace pt = boost::property_tree;

SocialMask social_mask(std::string_view name) {
  SocialMask m;
  m.name = std::string(name);
  if (name == "text_only") return m;
  if (name == "post_features") {
    m.keep = {true, true, true, false, false};
  } else if (name == "rrt") {
    m.keep = {false, false, false, true, false};
  } else if (name == "user_post_polarity") {
    m.keep = {false, false, false, false, true};
  } else if (name == "all") {
    m.keep.fill(true);
  } else {
    throw std::invalid_argument("unknown feature mask '" + std::string(name) + "'");
  }
  return m;
}

std::vector<std::string> mask_feature_names(const SocialMask& mask) {
  std::vector<std::string> names{"text_embedding"};
  for (std::size_t k = 0; k < kSocialDim; ++k) {
    if (mask.keep[k]) names.emplace_back(kSocialSlotNames[k]);
  }
  return names;
}

bool RunConfig::uses_transliteration(std::string_view method) const {
  return std::find(raw_script_methods.begin(), raw_script_methods.end(), method) ==
         raw_script_methods.end();
}

namespace {

std::vector<std::string> list_value(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& part : detail::split(text, ',')) {
    const auto t = detail::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

class Section {
 public:
  Section(const pt::ptree& root, const char* name, std::filesystem::path base)
      : name_(name), base_(std::move(base)) {
    if (auto child = root.get_child_optional(name)) tree_ = *child;
  }

  template <typename T>
  void get(const char* key, T& out) const {
    auto value = tree_.get_optional<std::string>(key);
    if (!value) return;
    try {
      out = tree_.get<T>(key);
    } catch (const pt::ptree_error&) {
      throw ConfigError(where(key) + ": cannot parse '" + *value + "'");
    }
  }

  void get_bool(const char* key, bool& out) const {
    auto value = tree_.get_optional<std::string>(key);
    if (!value) return;
    const auto v = detail::trim(*value);
    if (v == "true" || v == "1" || v == "yes") {
      out = true;
    } else if (v == "false" || v == "0" || v == "no") {
      out = false;
    } else {
      throw ConfigError(where(key) + ": expected a boolean, got '" + *value + "'");
    }
  }

  void get_path(const char* key, std::filesystem::path& out) const {
    auto value = tree_.get_optional<std::string>(key);
    if (!value) return;
    const std::filesystem::path p(std::string(detail::trim(*value)));
    out = p.empty() || p.is_absolute() ? p : base_ / p;
  }

  void get_list(const char* key, std::vector<std::string>& out) const {
    if (auto value = tree_.get_optional<std::string>(key)) out = list_value(*value);
  }

  std::string where(const char* key) const { return "[" + name_ + "] " + key; }

 private:
  pt::ptree tree_;
  std::string name_;
  std::filesystem::path base_;
};

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  pt::ptree root;
  try {
    pt::read_ini(path.string(), root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(path.string() + ": " + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  const auto base = path.parent_path();
  RunConfig c;

  const Section cols(root, "columns", base);
  std::string format = "delimited";
  cols.get("format", format);
  if (format == "delimited") {
    c.columns.format = InputFormat::delimited;
  } else if (format == "json_lines") {
    c.columns.format = InputFormat::json_lines;
  } else {
    throw ConfigError(cols.where("format") + ": expected delimited or json_lines");
  }
  std::string delimiter = ",";
  cols.get("delimiter", delimiter);
  if (delimiter == "tab" || delimiter == "\\t") delimiter = "\t";
  if (delimiter.size() != 1) {
    throw ConfigError(cols.where("delimiter") + ": expected one character or 'tab'");
  }
  c.columns.delimiter = delimiter[0];
  for (auto [key, field] : std::initializer_list<std::pair<const char*, std::string*>>{
           {"comment_id", &c.columns.comment_id},
           {"raw_text", &c.columns.raw_text},
           {"text", &c.columns.text},
           {"user_id", &c.columns.user_id},
           {"post_id", &c.columns.post_id},
           {"like_count_comment", &c.columns.like_count_comment},
           {"report_count_comment", &c.columns.report_count_comment},
           {"like_count_post", &c.columns.like_count_post},
           {"report_count_post", &c.columns.report_count_post},
           {"language", &c.columns.language},
           {"label", &c.columns.label},
           {"synthetic", &c.columns.synthetic},
           {"default_language", &c.columns.default_language}}) {
    cols.get(key, *field);
  }

  const Section pre(root, "preprocess", base);
  pre.get_path("insignificant_words", c.insignificant_words);
  pre.get_path("emoji_map", c.emoji_map);
  pre.get_path("transliteration", c.transliteration);
  pre.get_bool("strip_digits", c.strip_digits);
  pre.get_bool("strip_punctuation", c.strip_punctuation);

  const Section feat(root, "features", base);
  feat.get_path("lexicon", c.lexicon);
  feat.get_path("rules", c.rules);
  feat.get("max_variants", c.max_variants);
  std::string feature_set = "scidn";
  feat.get("feature_set", feature_set);
  if (feature_set == "scidn") {
    c.feature_set = FeatureSet::scidn;
  } else if (feature_set == "maci") {
    c.feature_set = FeatureSet::maci;
  } else {
    throw ConfigError(feat.where("feature_set") + ": expected scidn or maci");
  }
  std::string match = "token";
  feat.get("match_mode", match);
  if (match == "token") {
    c.match_mode = MatchMode::token;
  } else if (match == "substring") {
    c.match_mode = MatchMode::substring;
  } else {
    throw ConfigError(feat.where("match_mode") + ": expected token or substring");
  }
  feat.get("mask", c.mask);
  feat.get("alpha", c.train.alpha);
  feat.get_bool("pre_classifier", c.pre_classifier);

  const Section tr(root, "train", base);
  tr.get("learning_rate", c.train.learning_rate);
  tr.get("adam_beta1", c.train.adam_beta1);
  tr.get("adam_beta2", c.train.adam_beta2);
  tr.get("adam_epsilon", c.train.adam_epsilon);
  tr.get("batch_size", c.train.batch_size);
  tr.get("epochs", c.train.epochs);
  tr.get("threshold", c.train.threshold);
  tr.get("seed", c.train.seed);
  tr.get("token_dim", c.token_dim);
  tr.get("social_hidden", c.dims.social_hidden);
  tr.get("text_hidden", c.dims.text_hidden);
  tr.get("joint_hidden", c.dims.joint_hidden);
  tr.get("dropout", c.dims.dropout_rate);

  const Section ens(root, "ensemble", base);
  ens.get_list("methods", c.methods);
  ens.get_list("raw_script_methods", c.raw_script_methods);
  ens.get("best_method", c.best_method);
  std::size_t best_len = 0;
  ens.get("best_seq_len", best_len);
  if (best_len > 0) c.best_seq_len = best_len;

  try {
    c.train.validate();
    NetworkDims probe = c.dims;
    probe.text_in = 1;
    probe.validate();
    social_mask(c.mask);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (c.token_dim == 0) throw ConfigError(path.string() + ": token_dim must be positive");
  if (c.methods.size() != 3) {
    throw ConfigError(path.string() + ": [ensemble] methods must name 3 methods");
  }
  if (std::find(c.methods.begin(), c.methods.end(), c.best_method) == c.methods.end()) {
    throw ConfigError(path.string() + ": best_method is not one of the methods");
  }
  return c;
}

PreprocessConfig make_preprocess_config(const RunConfig& config) {
  PreprocessConfig p;
  if (!config.insignificant_words.empty()) {
    p.insignificant_words = load_insignificant_words(config.insignificant_words);
  }
  if (!config.emoji_map.empty()) p.emoji_map = load_emoji_map(config.emoji_map);
  if (!config.transliteration.empty()) {
    p.transliteration = Transliterator::from_file(config.transliteration);
  }
  p.strip_digits = config.strip_digits;
  p.strip_punctuation = config.strip_punctuation;
  return p;
}

ExtendedAbusiveSet load_extended_lexicon(const RunConfig& config) {
  if (config.lexicon.empty()) throw ConfigError("no lexicon configured ([features] lexicon)");
  const AbusiveSet base = load_abusive_words(config.lexicon);
  SubstitutionRules rules = config.rules.empty()
                                ? SubstitutionRules::defaults()
                                : SubstitutionRules::from_file(config.rules);
  rules.max_variants_per_word = config.max_variants;
  return extend_spellings(base, rules);
}

std::string EmbeddingSource::to_string() const {
  if (!mock) return path.generic_string();
  return "mock:" + std::to_string(seed) + ":" + std::to_string(dim) + ":" +
         (transliterated ? "1" : "0");
}

EmbeddingSource EmbeddingSource::parse(const std::string& text) {
  EmbeddingSource s;
  if (!text.starts_with("mock:")) {
    s.mock = false;
    s.path = text;
    return s;
  }
  const auto parts = detail::split(text, ':');
  const auto number = [&](std::string_view field, auto& out) {
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError("bad mock embedding source '" + text + "'");
    }
  };
  if (parts.size() != 4 || (parts[3] != "0" && parts[3] != "1")) {
    throw ConfigError("bad mock embedding source '" + text + "'");
  }
  number(parts[1], s.seed);
  number(parts[2], s.dim);
  if (s.dim == 0) throw ConfigError("mock embedding dim must be positive");
  s.transliterated = parts[3] == "1";
  return s;
}

Matrix text_features(const Dataset& dataset, const EmbeddingSource& source,
                     std::size_t seq_len, const PreprocessConfig& preprocess,
                     std::vector<std::size_t>* missing) {
  if (source.mock) {
    Matrix out(dataset.size(), seq_len * source.dim);
    PreprocessConfig native = preprocess;
    native.transliteration = Transliterator::identity();
    const auto n = static_cast<std::ptrdiff_t>(dataset.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const Comment& c = dataset[i];
      const std::string text = source.transliterated
                                   ? c.text
                                   : preprocess_text(c.raw_text, native, c.language);
      const auto e = mock_encode(tokenize_fixed(text, seq_len), source.dim, source.seed);
      std::copy(e.hidden.begin(), e.hidden.end(), out.row(i).begin());
    }
    return out;
  }

  const EmbeddingMap records = load_embeddings(source.path, seq_len, source.dim);
  Matrix out(dataset.size(), seq_len * source.dim);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto it = records.find(dataset[i].comment_id);
    if (it == records.end()) {
      if (!missing) {
        throw DataError(source.path.string() + ": no embedding for comment '" +
                        dataset[i].comment_id + "'");
      }
      missing->push_back(i);
      continue;
    }
    std::copy(it->second.hidden.begin(), it->second.hidden.end(), out.row(i).begin());
  }
  return out;
}

std::vector<SocialFeatureVector> raw_social_table(const Dataset& dataset,
                                                  const PolarityIndex& polarity,
                                                  FeatureSet feature_set) {
  std::vector<SocialFeatureVector> out;
  out.reserve(dataset.size());
  for (const auto& c : dataset.comments()) {
    out.push_back(raw_social_vector(c, polarity.record_for(c), feature_set));
  }
  return out;
}

Matrix social_features(std::span<const SocialFeatureVector> raw,
                       const NormalizationStats& stats, const SocialMask& mask) {
  if (!stats.fitted) throw StateError("normalization stats are not fitted");
  Matrix out(raw.size(), kSocialDim);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto v = stats.apply(raw[i]);
    for (std::size_t k = 0; k < kSocialDim; ++k) out(i, k) = mask.keep[k] ? v.values[k] : 0.0;
  }
  return out;
}

std::vector<int> require_labels(const Dataset& dataset) {
  std::vector<int> labels;
  labels.reserve(dataset.size());
  for (const auto& c : dataset.comments()) {
    if (!c.label) throw DataError("comment '" + c.comment_id + "' has no label");
    labels.push_back(*c.label);
  }
  return labels;
}

std::vector<MemberSpec> member_specs(const RunConfig& config,
                                     std::span<const std::size_t> seq_lens,
                                     std::span<const EmbeddingSource> sources) {
  const std::size_t n_methods = config.methods.size();
  if (seq_lens.size() * n_methods != kEnsembleSize) {
    throw ConfigError("the ensemble needs 3 methods at 2 sequence lengths");
  }
  if (seq_lens[0] == seq_lens[1]) throw ConfigError("sequence lengths must differ");
  const bool per_method = sources.size() == n_methods;
  if (!per_method && sources.size() != kEnsembleSize) {
    throw ConfigError("expected 3 mock seeds or 6 embedding files, got " +
                      std::to_string(sources.size()));
  }
  const std::size_t best_len =
      config.best_seq_len.value_or(std::max(seq_lens[0], seq_lens[1]));
  if (best_len != seq_lens[0] && best_len != seq_lens[1]) {
    throw ConfigError("best_seq_len is not one of the sequence lengths");
  }
  std::vector<MemberSpec> specs;
  for (std::size_t m = 0; m < n_methods; ++m) {
    for (std::size_t s = 0; s < seq_lens.size(); ++s) {
      MemberSpec spec;
      spec.method = config.methods[m];
      spec.seq_len = seq_lens[s];
      spec.source = sources[per_method ? m : m * seq_lens.size() + s];
      if (per_method && !spec.source.mock) {
        throw ConfigError("an embedding file serves one sequence length; give 6 files");
      }
      if (!spec.source.mock) spec.source.dim = config.token_dim;
      if (spec.source.mock) {
        spec.source.transliterated = config.uses_transliteration(spec.method);
      }
      spec.is_best = spec.method == config.best_method && spec.seq_len == best_len;
      specs.push_back(std::move(spec));
    }
  }
  return specs;
}

PolarityIndex build_polarity(const Dataset& dataset, const RunConfig& config,
                             const PolarityInputs& inputs) {
  if (!inputs.lexicon) throw std::invalid_argument("build_polarity: no lexicon");
  const PolaritySource lex =
      PolaritySource::from_lexicon(dataset, *inputs.lexicon, config.match_mode);
  if (!inputs.classifier_labels) {
    return PolarityIndex::build(dataset, lex, nullptr, config.train.alpha);
  }
  if (inputs.classifier_labels->size() != dataset.size()) {
    throw std::invalid_argument("build_polarity: classifier labels misaligned");
  }
  std::map<std::size_t, int> labels;
  for (std::size_t i = 0; i < dataset.size(); ++i) labels[i] = (*inputs.classifier_labels)[i];
  const PolaritySource cls =
      PolaritySource::from_labels(PolaritySource::Kind::pre_classifier, std::move(labels));
  return PolarityIndex::build(dataset, lex, &cls, config.train.alpha);
}

}  // namespace abuse
