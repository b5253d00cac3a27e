#pragma once

// Social-context features: user/post polarity, combined user-post polarity,
// relative reporting tendency, min-max scaling, the five-slot social feature
// vector, and point-biserial correlation analysis.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abuse/corpus.hpp"
#include "abuse/lexicon.hpp"

namespace abuse {

inline constexpr double kDefaultAlpha = 0.47;
inline constexpr std::size_t kSocialDim = 5;

struct LabelCounts {
  std::int64_t non_abusive = 0;
  std::int64_t abusive = 0;
};

/// (non - abuse) / (non + abuse); 0 when both counts are zero.
/// Throws std::invalid_argument on negative counts.
double polarity_from_labels(LabelCounts counts);

/// Per-comment binary labels used to count abusive comments in a group.
struct PolaritySource {
  enum class Kind { lexicon, pre_classifier };

  Kind kind = Kind::lexicon;
  std::map<std::size_t, int> labels;  // comment index -> {0,1}

  static PolaritySource from_lexicon(const Dataset& dataset,
                                     const ExtendedAbusiveSet& set,
                                     MatchMode mode = MatchMode::token);
  /// Throws std::invalid_argument if a label is not 0 or 1.
  static PolaritySource from_labels(Kind kind, std::map<std::size_t, int> labels);
};

using CommentRefs = std::span<const Comment* const>;

/// Lexicon polarity of the comments, combined with classifier polarity by
/// taking the maximum when classifier labels (aligned with `comments`) are
/// given. Throws UndefinedError for an empty group.
double user_polarity(CommentRefs comments, const ExtendedAbusiveSet& set,
                     std::optional<std::span<const int>> cls_labels = {},
                     MatchMode mode = MatchMode::token);
double post_polarity(CommentRefs comments, const ExtendedAbusiveSet& set,
                     std::optional<std::span<const int>> cls_labels = {},
                     MatchMode mode = MatchMode::token);

/// alpha * user + (1 - alpha) * post.
double combined_user_post_polarity(double user, double post,
                                   double alpha = kDefaultAlpha);

/// r_c / r_p, or 0 when the post has no reports.
double relative_reporting_tendency(std::uint64_t comment_reports,
                                   std::uint64_t post_reports);

/// (x - min) / (max - min); a constant column maps to zeros.
std::vector<double> min_max_normalize(std::span<const double> values);

struct PolarityRecord {
  double user = 0.0;
  double post = 0.0;
  double combined = 0.0;
  double alpha = kDefaultAlpha;
};

/// User and post polarities for every group of a dataset. Synthetic
/// comments are ignored; groups with no real comments are neutral (0).
class PolarityIndex {
 public:
  static PolarityIndex build(const Dataset& dataset, const PolaritySource& lexicon,
                             const PolaritySource* classifier = nullptr,
                             double alpha = kDefaultAlpha);

  double user(std::string_view user_id) const;
  double post(std::string_view post_id) const;
  PolarityRecord record_for(const Comment& comment) const;
  double alpha() const { return alpha_; }

 private:
  std::map<std::string, double, std::less<>> users_;
  std::map<std::string, double, std::less<>> posts_;
  double alpha_ = kDefaultAlpha;
};

enum class FeatureSet { scidn, maci };

inline constexpr std::array<std::string_view, kSocialDim> kSocialSlotNames = {
    "report_count", "like_count_comment", "like_count_post",
    "relative_reporting_tendency", "user_post_polarity"};

struct SocialFeatureVector {
  std::array<double, kSocialDim> values{};
  bool normalized = false;
};

/// Unscaled slots: (r_p | r_c, l_c, l_p, rrt, phi_up | phi_p). The maci set
/// uses the comment report count and post polarity alone.
SocialFeatureVector raw_social_vector(const Comment& comment,
                                      const PolarityRecord& polarity,
                                      FeatureSet feature_set);

/// Per-slot min/max frozen from training data; later values are clipped.
struct NormalizationStats {
  std::array<double, kSocialDim> mins{};
  std::array<double, kSocialDim> maxs{};
  bool fitted = false;

  static NormalizationStats fit(std::span<const SocialFeatureVector> raw);
  SocialFeatureVector apply(const SocialFeatureVector& raw) const;

  void save(std::ostream& out) const;
  static NormalizationStats load(std::istream& in);  // FormatError
};

/// Throws StateError when the stats are not fitted.
SocialFeatureVector build_social_vector(const Comment& comment,
                                        const PolarityRecord& polarity,
                                        const NormalizationStats& stats,
                                        FeatureSet feature_set);

/// Point-biserial correlation with population standard deviation.
/// Throws std::invalid_argument on length mismatch and UndefinedError when
/// one group is empty or the continuous column has zero variance.
double point_biserial(std::span<const double> continuous,
                      std::span<const int> dichotomous);

struct CorrelationRow {
  std::string feature;
  std::optional<double> r_pb;  // empty = undefined
  std::string note;
};

std::vector<std::string> default_correlation_features();

/// One row per requested feature over the labeled real comments.
/// `predictions`, aligned with the dataset, feeds the contextual_embeddings
/// row. Unknown feature names throw std::invalid_argument.
std::vector<CorrelationRow> correlation_report(
    const Dataset& dataset, const PolarityIndex& polarity,
    const std::vector<std::string>& features,
    const std::vector<double>* predictions = nullptr);

void write_correlation_report(std::ostream& out,
                              const std::vector<CorrelationRow>& rows);

}  // namespace abuse
