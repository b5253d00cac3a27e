#include "abuse/harness.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "abuse/augmentation.hpp"
#include "abuse/error.hpp"
#include "abuse/pipeline.hpp"
#include "abuse/preprocess.hpp"
#include "text_util.hpp"

namespace abuse {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
}

std::uint64_t poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

std::string numbered(char prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

// Exactly round(rate * n) of the n flags set, at random positions.
std::vector<int> exact_share(std::size_t n, double rate, std::mt19937_64& rng) {
  std::vector<int> flags(n, 0);
  const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  std::fill(flags.begin(), flags.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)), 1);
  std::shuffle(flags.begin(), flags.end(), rng);
  return flags;
}

// Each of n_groups used floor or ceil(n / n_groups) times, in random order.
std::vector<std::size_t> balanced_assignment(std::size_t n, std::size_t n_groups,
                                             std::mt19937_64& rng) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i % n_groups;
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

constexpr const char* kPlainOnsets[] = {"b", "d", "g", "k", "l", "m", "n", "r", "s", "t"};
constexpr const char* kPlainNuclei[] = {"a", "e", "i", "o", "u"};
constexpr const char* kLexOnsets[] = {"ph", "v", "z", "w", "ch", "kh", "g", "bh"};
constexpr const char* kLexNuclei[] = {"aa", "ee", "oo", "u", "i", "a"};

template <std::size_t A, std::size_t B>
std::string pseudo_word(std::mt19937_64& rng, const char* const (&onsets)[A],
                        const char* const (&nuclei)[B], std::size_t syllables) {
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    w += onsets[below(rng, A)];
    w += nuclei[below(rng, B)];
  }
  return w;
}

}  // namespace

void CorpusSpec::validate() const {
  const auto unit_range = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (n_users == 0 || n_posts == 0 || n_comments == 0) {
    throw ConfigError("corpus spec: users, posts and comments must be positive");
  }
  if (languages.empty()) throw ConfigError("corpus spec: no languages");
  if (!unit_range(abuse_rate) || !unit_range(user_consistency) ||
      !unit_range(post_consistency) || !unit_range(report_signal) ||
      !unit_range(plant_rate) || !unit_range(variant_rate)) {
    throw ConfigError("corpus spec: rates and consistencies must lie in [0,1]");
  }
  if (comment_like_mean < 0.0 || post_like_mean < 0.0) {
    throw ConfigError("corpus spec: like means must be non-negative");
  }
  if (min_words == 0 || max_words < min_words) {
    throw ConfigError("corpus spec: need 0 < min_words <= max_words");
  }
  if (vocabulary_size == 0) throw ConfigError("corpus spec: empty vocabulary");
}

CorpusSpec load_corpus_spec(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    pt::read_ini(path.string(), root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(path.string() + ": " + e.message());
  }
  CorpusSpec s;
  const pt::ptree section = root.get_child("corpus", pt::ptree());
  try {
    s.n_users = section.get("n_users", s.n_users);
    s.n_posts = section.get("n_posts", s.n_posts);
    s.n_comments = section.get("n_comments", s.n_comments);
    s.abuse_rate = section.get("abuse_rate", s.abuse_rate);
    s.user_consistency = section.get("user_consistency", s.user_consistency);
    s.post_consistency = section.get("post_consistency", s.post_consistency);
    s.report_signal = section.get("report_signal", s.report_signal);
    s.plant_rate = section.get("plant_rate", s.plant_rate);
    s.variant_rate = section.get("variant_rate", s.variant_rate);
    s.plant_at_start = section.get("plant_at_start", s.plant_at_start);
    s.comment_like_mean = section.get("comment_like_mean", s.comment_like_mean);
    s.post_like_mean = section.get("post_like_mean", s.post_like_mean);
    s.min_words = section.get("min_words", s.min_words);
    s.max_words = section.get("max_words", s.max_words);
    s.vocabulary_size = section.get("vocabulary_size", s.vocabulary_size);
    s.lexicon_words = section.get("lexicon_words", s.lexicon_words);
    s.seed = section.get("seed", s.seed);
    if (auto langs = section.get_optional<std::string>("languages")) {
      s.languages.clear();
      for (auto part : detail::split(*langs, ',')) {
        if (!detail::trim(part).empty()) s.languages.emplace_back(detail::trim(part));
      }
    }
  } catch (const pt::ptree_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  s.validate();
  return s;
}

AbusiveSet synthetic_lexicon(const CorpusSpec& spec) {
  std::mt19937_64 rng(spec.seed ^ 0x6C65786963ull);
  AbusiveSet set;
  std::set<std::string> used;
  for (const auto& lang : spec.languages) {
    auto& words = set.words[lang];
    while (words.size() < spec.lexicon_words) {
      std::string w = pseudo_word(rng, kLexOnsets, kLexNuclei, 2 + below(rng, 2));
      if (used.insert(w).second) words.insert(std::move(w));
    }
  }
  return set;
}

Dataset generate_corpus(const CorpusSpec& spec, const AbusiveSet& lexicon,
                        const SubstitutionRules& rules) {
  spec.validate();
  if (spec.abuse_rate > 0.0 && lexicon.size() == 0) {
    throw ConfigError("corpus spec: abuse_rate > 0 needs a non-empty lexicon");
  }
  std::mt19937_64 rng(spec.seed);
  const ExtendedAbusiveSet ext = extend_spellings(lexicon, rules);

  // Planting pools per language; untagged words serve every language.
  std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>> plant;
  for (const auto& lang : spec.languages) {
    for (const auto& tag : {std::string(), lang}) {
      auto it = lexicon.words.find(tag);
      if (it == lexicon.words.end()) continue;
      for (const auto& w : it->second) {
        auto variants = spelling_variants(w, rules);
        variants.erase(variants.begin());
        plant[lang].emplace_back(w, std::move(variants));
      }
    }
    if (spec.abuse_rate > 0.0 && plant[lang].empty()) {
      throw ConfigError("corpus spec: no lexicon words for language '" + lang + "'");
    }
  }

  std::map<std::string, std::vector<std::string>> vocab;
  for (const auto& lang : spec.languages) {
    std::set<std::string> seen;
    auto& words = vocab[lang];
    std::size_t attempts = 0;
    while (words.size() < spec.vocabulary_size) {
      if (++attempts > spec.vocabulary_size * 1000) {
        throw ConfigError("corpus spec: vocabulary_size too large");
      }
      std::string w = pseudo_word(rng, kPlainOnsets, kPlainNuclei, 2 + below(rng, 2));
      if (contains_abuse(w, ext, lang).has_value() || !seen.insert(w).second) continue;
      words.push_back(std::move(w));
    }
  }

  const auto user_abusive = exact_share(spec.n_users, spec.abuse_rate, rng);
  const auto post_abusive = exact_share(spec.n_posts, spec.abuse_rate, rng);
  const auto users = balanced_assignment(spec.n_comments, spec.n_users, rng);
  const auto posts = balanced_assignment(spec.n_comments, spec.n_posts, rng);
  std::vector<std::uint64_t> post_likes(spec.n_posts);
  for (auto& l : post_likes) l = poisson(rng, spec.post_like_mean);

  std::vector<Comment> comments(spec.n_comments);
  std::vector<std::uint64_t> post_reports(spec.n_posts, 0);
  for (std::size_t i = 0; i < spec.n_comments; ++i) {
    Comment& c = comments[i];
    const std::size_t u = users[i];
    const std::size_t p = posts[i];
    c.comment_id = numbered('c', i, 6);
    c.user_id = numbered('u', u, 4);
    c.post_id = numbered('p', p, 4);
    c.language = spec.languages[u % spec.languages.size()];

    int label = 0;
    if (unit(rng) < spec.user_consistency) {
      label = user_abusive[u];
    } else if (unit(rng) < spec.post_consistency) {
      label = post_abusive[p];
    } else {
      label = unit(rng) < spec.abuse_rate ? 1 : 0;
    }
    c.label = label;

    const auto& words = vocab[c.language];
    const std::size_t n_words =
        spec.min_words + below(rng, spec.max_words - spec.min_words + 1);
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k < n_words; ++k) tokens.push_back(words[below(rng, words.size())]);
    if (label == 1 && unit(rng) < spec.plant_rate) {
      const auto& pool = plant[c.language];
      const auto& [base, variants] = pool[below(rng, pool.size())];
      std::string word = base;
      if (!variants.empty() && unit(rng) < spec.variant_rate) {
        word = variants[below(rng, variants.size())];
      }
      const std::size_t at = spec.plant_at_start ? 0 : below(rng, n_words + 1);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), word);
    }
    std::string raw = detail::join(tokens, " ");
    if (!raw.empty() && unit(rng) < 0.5) raw[0] = static_cast<char>(raw[0] - 'a' + 'A');
    const double mark = unit(rng);
    if (mark < 0.2) {
      raw += "!";
    } else if (mark < 0.3) {
      raw += "?";
    }
    c.raw_text = std::move(raw);

    c.report_count_comment = poisson(rng, 0.5 + 2.0 * spec.report_signal * label);
    c.like_count_comment = poisson(rng, spec.comment_like_mean);
    c.like_count_post = post_likes[p];
    post_reports[p] += c.report_count_comment;
  }
  for (std::size_t i = 0; i < spec.n_comments; ++i) {
    comments[i].report_count_post = post_reports[posts[i]];
  }
  return Dataset(std::move(comments));
}

std::vector<AblationRow> run_experiment(const ExperimentConfig& config) {
  const AbusiveSet lexicon = synthetic_lexicon(config.corpus);
  return run_experiment(config, generate_corpus(config.corpus, lexicon), lexicon);
}

std::vector<AblationRow> run_experiment(const ExperimentConfig& config,
                                        const Dataset& corpus,
                                        const AbusiveSet& lexicon) {
  const Dataset cleaned = preprocess_dataset(corpus, PreprocessConfig{});
  const auto [train_set, test_set] =
      split(cleaned, config.test_fraction, config.corpus.seed + 1);
  const ExtendedAbusiveSet ext = extend_spellings(lexicon, SubstitutionRules::defaults());
  const Dataset train_aug =
      config.augment ? augment(train_set, ext, config.corpus.seed + 2) : train_set;

  RunConfig run;
  run.feature_set = config.feature_set;
  run.train = config.train;
  const PolarityIndex train_polarity = build_polarity(train_aug, run, {&ext, nullptr});
  const PolarityIndex test_polarity = build_polarity(test_set, run, {&ext, nullptr});
  const auto train_raw = raw_social_table(train_aug, train_polarity, config.feature_set);
  const auto test_raw = raw_social_table(test_set, test_polarity, config.feature_set);
  const NormalizationStats stats = NormalizationStats::fit(train_raw);

  EmbeddingSource source;
  source.seed = config.embedding_seed;
  source.dim = config.token_dim;
  const PreprocessConfig pre;
  FeatureTable train_table{text_features(train_aug, source, config.seq_len, pre), {},
                           require_labels(train_aug)};
  FeatureTable test_table{text_features(test_set, source, config.seq_len, pre), {},
                          require_labels(test_set)};
  std::vector<std::string> languages;
  for (const auto& c : test_set.comments()) languages.push_back(c.language);

  NetworkDims dims = config.dims;
  dims.text_in = config.seq_len * config.token_dim;

  std::vector<AblationRow> rows;
  for (const auto& name : config.masks) {
    const SocialMask mask = social_mask(name);
    train_table.social = social_features(train_raw, stats, mask);
    test_table.social = social_features(test_raw, stats, mask);
    const TrainResult trained = train(train_table, dims, config.train);
    const auto predictions =
        predict_batch(trained.params, test_table, config.train.threshold);
    std::vector<int> labels;
    for (const auto& p : predictions) labels.push_back(p.label);
    const auto report = evaluation_report(labels, test_table.labels, languages);
    rows.push_back({name, mask_feature_names(mask), report.back(), 0.0});
  }
  const auto base = std::find_if(rows.begin(), rows.end(),
                                 [](const AblationRow& r) { return r.mask == "text_only"; });
  if (base != rows.end()) {
    const double base_f1 = base->metrics.f.value;
    for (auto& r : rows) r.f1_gain = r.metrics.f.value - base_f1;
  }
  return rows;
}

void write_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows) {
  out << "mask,features,n,acc,p,r,f1,f1_gain\n";
  const auto flags = out.flags();
  out << std::fixed;
  out.precision(6);
  for (const auto& r : rows) {
    out << r.mask << ',' << detail::join(r.features, "+") << ',' << r.metrics.counts.total()
        << ',' << r.metrics.acc.value << ',' << r.metrics.p.value << ','
        << r.metrics.r.value << ',' << r.metrics.f.value << ',' << r.f1_gain << '\n';
  }
  out.flags(flags);
}

}  // namespace abuse
