#pragma once

// Synthetic corpora with tunable social signal and planted abusive words,
// and the feature-ablation experiment run on them.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "abuse/corpus.hpp"
#include "abuse/lexicon.hpp"
#include "abuse/metrics.hpp"
#include "abuse/network.hpp"
#include "abuse/social_features.hpp"

namespace abuse {

struct CorpusSpec {
  std::size_t n_users = 500;
  std::size_t n_posts = 200;
  std::size_t n_comments = 10000;
  std::vector<std::string> languages = {"hi", "bn", "ta"};
  double abuse_rate = 0.5;
  double user_consistency = 0.5;  // kappa_u
  double post_consistency = 0.5;  // kappa_p
  double report_signal = 0.5;     // rho
  double plant_rate = 0.9;
  double variant_rate = 0.3;
  bool plant_at_start = true;  // else a uniformly random token position
  double comment_like_mean = 3.0;
  double post_like_mean = 20.0;
  std::size_t min_words = 4;
  std::size_t max_words = 12;
  std::size_t vocabulary_size = 300;  // neutral words per language
  std::size_t lexicon_words = 8;      // base abusive words per language
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// [corpus] section of an INI file; unspecified keys keep their defaults.
CorpusSpec load_corpus_spec(const std::filesystem::path& path);

/// Pronounceable pseudo-words per language, shaped so the built-in
/// substitution rules produce variants.
AbusiveSet synthetic_lexicon(const CorpusSpec& spec);

/// Each user and post gets a latent 0/1 propensity (an abuse_rate share of
/// them are abusive). A comment takes its user's propensity with
/// probability kappa_u, else its post's with probability kappa_p, else a
/// Bernoulli(abuse_rate) draw. Abusive comments carry a lexicon word with
/// probability plant_rate, a spelling variant in variant_rate of those.
/// Comment reports are Poisson(0.5 + 2 rho label). Throws ConfigError on an
/// empty lexicon with a positive abuse rate.
Dataset generate_corpus(const CorpusSpec& spec, const AbusiveSet& lexicon,
                        const SubstitutionRules& rules = SubstitutionRules::defaults());

struct ExperimentConfig {
  CorpusSpec corpus;
  std::size_t seq_len = 16;
  std::size_t token_dim = 32;
  NetworkDims dims{5, 16, 16 * 32, 64, 32, 0.2};
  TrainConfig train;
  double test_fraction = 0.2;
  std::uint64_t embedding_seed = 1;
  bool augment = true;
  FeatureSet feature_set = FeatureSet::scidn;
  std::vector<std::string> masks = {"text_only", "post_features", "rrt",
                                    "user_post_polarity", "all"};
};

struct AblationRow {
  std::string mask;
  std::vector<std::string> features;
  ReportRow metrics;
  double f1_gain = 0.0;  // over the text_only row, 0 when absent
};

/// Generates (or uses) a corpus, preprocesses, splits, augments, and trains
/// one classifier per mask from the same initial weights.
std::vector<AblationRow> run_experiment(const ExperimentConfig& config);
std::vector<AblationRow> run_experiment(const ExperimentConfig& config,
                                        const Dataset& corpus,
                                        const AbusiveSet& lexicon);

/// Columns mask,features,n,acc,p,r,f1,f1_gain; features joined by '+'.
void write_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows);

}  // namespace abuse
