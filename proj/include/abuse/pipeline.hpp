#pragma once

// Glue shared by the CLI and the experiment harness: run configuration,
// embedding sources, feature-table assembly, and ensemble training.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abuse/corpus.hpp"
#include "abuse/embeddings.hpp"
#include "abuse/ensemble.hpp"
#include "abuse/lexicon.hpp"
#include "abuse/network.hpp"
#include "abuse/preprocess.hpp"
#include "abuse/social_features.hpp"

namespace abuse {

/// Which social slots reach the network; dropped slots are zeroed after
/// scaling.
struct SocialMask {
  std::string name;
  std::array<bool, kSocialDim> keep{};
};

/// text_only, post_features, rrt, user_post_polarity, all.
/// Throws std::invalid_argument for other names.
SocialMask social_mask(std::string_view name);
std::vector<std::string> mask_feature_names(const SocialMask& mask);

struct RunConfig {
  // [columns] input mapping for raw datasets
  ColumnSchema columns;
  // [preprocess]
  std::filesystem::path insignificant_words;
  std::filesystem::path emoji_map;
  std::filesystem::path transliteration;  // empty = identity
  bool strip_digits = true;
  bool strip_punctuation = true;
  // [features]
  std::filesystem::path lexicon;
  std::filesystem::path rules;  // empty = built-in rules
  std::size_t max_variants = 32;
  FeatureSet feature_set = FeatureSet::scidn;
  MatchMode match_mode = MatchMode::token;
  std::string mask = "all";
  bool pre_classifier = false;
  // [train]
  TrainConfig train;
  std::size_t token_dim = kDefaultTokenDim;
  NetworkDims dims;  // text_in is derived per member
  // [ensemble]
  std::vector<std::string> methods = {"muril", "mbert", "xlmr"};
  std::vector<std::string> raw_script_methods = {"xlmr"};
  std::string best_method = "muril";
  std::optional<std::size_t> best_seq_len;  // default: the longest

  bool uses_transliteration(std::string_view method) const;
};

/// INI file with [columns], [preprocess], [features], [train], [ensemble]
/// sections.
/// Relative paths resolve against the file's directory. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

PreprocessConfig make_preprocess_config(const RunConfig& config);
/// Extended lexicon from the configured word list and rules (ConfigError).
ExtendedAbusiveSet load_extended_lexicon(const RunConfig& config);

/// "mock:<seed>:<dim>:<0|1>" (1 = embed transliterated text) or a file
/// path; a file source takes its width from the configured token_dim.
struct EmbeddingSource {
  bool mock = true;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  bool transliterated = true;
  std::filesystem::path path;

  std::string to_string() const;
  static EmbeddingSource parse(const std::string& text);  // ConfigError
};

/// Rows of flattened seq_len x dim embeddings aligned with the dataset.
/// Mock sources encode the comment text; untransliterated sources
/// re-preprocess raw_text with identity transliteration. File sources list
/// comments without a record in `missing` (rows left zero); when `missing`
/// is null a missing record is a DataError.
Matrix text_features(const Dataset& dataset, const EmbeddingSource& source,
                     std::size_t seq_len, const PreprocessConfig& preprocess,
                     std::vector<std::size_t>* missing = nullptr);

std::vector<SocialFeatureVector> raw_social_table(const Dataset& dataset,
                                                  const PolarityIndex& polarity,
                                                  FeatureSet feature_set);
Matrix social_features(std::span<const SocialFeatureVector> raw,
                       const NormalizationStats& stats, const SocialMask& mask);

/// Labels of every comment; DataError if one is missing.
std::vector<int> require_labels(const Dataset& dataset);

struct MemberSpec {
  std::string method;
  std::size_t seq_len = 0;
  EmbeddingSource source;
  bool is_best = false;
};

/// Methods in order, each at every sequence length. Three sources serve one
/// method each (mock only); six are taken method-major.
std::vector<MemberSpec> member_specs(const RunConfig& config,
                                     std::span<const std::size_t> seq_lens,
                                     std::span<const EmbeddingSource> sources);

struct PolarityInputs {
  const ExtendedAbusiveSet* lexicon = nullptr;
  const std::vector<int>* classifier_labels = nullptr;  // aligned with dataset
};

PolarityIndex build_polarity(const Dataset& dataset, const RunConfig& config,
                             const PolarityInputs& inputs);

}  // namespace abuse
