#include "abuse/social_features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "abuse/error.hpp"
#include "text_util.hpp"

namespace abuse {

double polarity_from_labels(LabelCounts counts) {
  if (counts.non_abusive < 0 || counts.abusive < 0) {
    throw std::invalid_argument("polarity: negative count");
  }
  const auto total = counts.non_abusive + counts.abusive;
  if (total == 0) return 0.0;
  return static_cast<double>(counts.non_abusive - counts.abusive) /
         static_cast<double>(total);
}

PolaritySource PolaritySource::from_lexicon(const Dataset& dataset,
                                            const ExtendedAbusiveSet& set,
                                            MatchMode mode) {
  PolaritySource source;
  source.kind = Kind::lexicon;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& c = dataset[i];
    source.labels[i] = contains_abuse(c.text, set, c.language, mode) ? 1 : 0;
  }
  return source;
}

PolaritySource PolaritySource::from_labels(Kind kind,
                                           std::map<std::size_t, int> labels) {
  for (const auto& [index, label] : labels) {
    if (label != 0 && label != 1) {
      throw std::invalid_argument("polarity source labels must be 0 or 1");
    }
  }
  PolaritySource source;
  source.kind = kind;
  source.labels = std::move(labels);
  return source;
}

namespace {

double group_polarity(CommentRefs comments, const ExtendedAbusiveSet& set,
                      std::optional<std::span<const int>> cls_labels,
                      MatchMode mode) {
  if (comments.empty()) throw UndefinedError("polarity of an empty comment set");
  LabelCounts lexicon;
  for (const Comment* c : comments) {
    if (contains_abuse(c->text, set, c->language, mode)) ++lexicon.abusive;
    else ++lexicon.non_abusive;
  }
  const double from_lexicon = polarity_from_labels(lexicon);
  if (!cls_labels) return from_lexicon;
  if (cls_labels->size() != comments.size()) {
    throw std::invalid_argument("classifier labels must align with comments");
  }
  LabelCounts classifier;
  for (int label : *cls_labels) {
    if (label != 0 && label != 1) {
      throw std::invalid_argument("classifier labels must be 0 or 1");
    }
    if (label == 1) ++classifier.abusive;
    else ++classifier.non_abusive;
  }
  return std::max(from_lexicon, polarity_from_labels(classifier));
}

// Polarity of one group from index-keyed label sources; neutral when the
// group has no real comment.
double index_polarity(const std::vector<std::size_t>& members, const Dataset& dataset,
                      const PolaritySource& lexicon,
                      const PolaritySource* classifier) {
  LabelCounts ext;
  LabelCounts cls;
  for (std::size_t i : members) {
    if (dataset[i].synthetic) continue;
    if (auto it = lexicon.labels.find(i); it != lexicon.labels.end()) {
      (it->second ? ext.abusive : ext.non_abusive) += 1;
    }
    if (classifier) {
      if (auto it = classifier->labels.find(i); it != classifier->labels.end()) {
        (it->second ? cls.abusive : cls.non_abusive) += 1;
      }
    }
  }
  const double from_lexicon = polarity_from_labels(ext);
  if (cls.abusive + cls.non_abusive == 0) return from_lexicon;
  if (ext.abusive + ext.non_abusive == 0) return polarity_from_labels(cls);
  return std::max(from_lexicon, polarity_from_labels(cls));
}

void check_polarity_range(double value) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw std::invalid_argument("polarity outside [-1,1]");
  }
}

}  // namespace

double user_polarity(CommentRefs comments, const ExtendedAbusiveSet& set,
                     std::optional<std::span<const int>> cls_labels,
                     MatchMode mode) {
  return group_polarity(comments, set, cls_labels, mode);
}

double post_polarity(CommentRefs comments, const ExtendedAbusiveSet& set,
                     std::optional<std::span<const int>> cls_labels,
                     MatchMode mode) {
  return group_polarity(comments, set, cls_labels, mode);
}

double combined_user_post_polarity(double user, double post, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0,1]");
  }
  check_polarity_range(user);
  check_polarity_range(post);
  return alpha * user + (1.0 - alpha) * post;
}

double relative_reporting_tendency(std::uint64_t comment_reports,
                                   std::uint64_t post_reports) {
  if (post_reports == 0) return 0.0;
  return static_cast<double>(comment_reports) / static_cast<double>(post_reports);
}

std::vector<double> min_max_normalize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("min_max_normalize: empty column");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.0);
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / range;
  return out;
}

PolarityIndex PolarityIndex::build(const Dataset& dataset,
                                   const PolaritySource& lexicon,
                                   const PolaritySource* classifier, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0,1]");
  }
  PolarityIndex index;
  index.alpha_ = alpha;
  for (const auto& [user, members] : dataset.by_user()) {
    index.users_[user] = index_polarity(members, dataset, lexicon, classifier);
  }
  for (const auto& [post, members] : dataset.by_post()) {
    index.posts_[post] = index_polarity(members, dataset, lexicon, classifier);
  }
  return index;
}

double PolarityIndex::user(std::string_view user_id) const {
  auto it = users_.find(user_id);
  return it == users_.end() ? 0.0 : it->second;
}

double PolarityIndex::post(std::string_view post_id) const {
  auto it = posts_.find(post_id);
  return it == posts_.end() ? 0.0 : it->second;
}

PolarityRecord PolarityIndex::record_for(const Comment& comment) const {
  PolarityRecord r;
  r.alpha = alpha_;
  r.user = comment.user_id ? user(*comment.user_id) : 0.0;
  r.post = post(comment.post_id);
  r.combined = combined_user_post_polarity(r.user, r.post, alpha_);
  return r;
}

SocialFeatureVector raw_social_vector(const Comment& comment,
                                      const PolarityRecord& polarity,
                                      FeatureSet feature_set) {
  const bool maci = feature_set == FeatureSet::maci;
  SocialFeatureVector v;
  v.values = {
      static_cast<double>(maci ? comment.report_count_comment
                               : comment.report_count_post),
      static_cast<double>(comment.like_count_comment),
      static_cast<double>(comment.like_count_post),
      relative_reporting_tendency(comment.report_count_comment,
                                  comment.report_count_post),
      maci ? polarity.post : polarity.combined};
  return v;
}

NormalizationStats NormalizationStats::fit(std::span<const SocialFeatureVector> raw) {
  if (raw.empty()) throw std::invalid_argument("normalization: no training rows");
  NormalizationStats stats;
  stats.mins = raw.front().values;
  stats.maxs = raw.front().values;
  for (const auto& v : raw) {
    for (std::size_t k = 0; k < kSocialDim; ++k) {
      stats.mins[k] = std::min(stats.mins[k], v.values[k]);
      stats.maxs[k] = std::max(stats.maxs[k], v.values[k]);
    }
  }
  stats.fitted = true;
  return stats;
}

SocialFeatureVector NormalizationStats::apply(const SocialFeatureVector& raw) const {
  if (!fitted) throw StateError("normalization statistics not fitted");
  SocialFeatureVector out;
  out.normalized = true;
  for (std::size_t k = 0; k < kSocialDim; ++k) {
    const double range = maxs[k] - mins[k];
    const double x = range == 0.0 ? 0.0 : (raw.values[k] - mins[k]) / range;
    out.values[k] = std::clamp(x, 0.0, 1.0);
  }
  return out;
}

void NormalizationStats::save(std::ostream& out) const {
  if (!fitted) throw StateError("normalization statistics not fitted");
  out << "slot,min,max\n" << std::setprecision(17);
  for (std::size_t k = 0; k < kSocialDim; ++k) {
    out << kSocialSlotNames[k] << ',' << mins[k] << ',' << maxs[k] << '\n';
  }
}

NormalizationStats NormalizationStats::load(std::istream& in) {
  NormalizationStats stats;
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "slot,min,max") {
    throw FormatError("normalization stats: bad header");
  }
  for (std::size_t k = 0; k < kSocialDim; ++k) {
    if (!std::getline(in, line)) throw FormatError("normalization stats: truncated");
    const auto parts = detail::split(detail::trim(line), ',');
    if (parts.size() != 3 || parts[0] != kSocialSlotNames[k]) {
      throw FormatError("normalization stats: bad row " + std::to_string(k + 1));
    }
    try {
      stats.mins[k] = std::stod(std::string(parts[1]));
      stats.maxs[k] = std::stod(std::string(parts[2]));
    } catch (const std::exception&) {
      throw FormatError("normalization stats: bad number in row " +
                        std::to_string(k + 1));
    }
  }
  stats.fitted = true;
  return stats;
}

SocialFeatureVector build_social_vector(const Comment& comment,
                                        const PolarityRecord& polarity,
                                        const NormalizationStats& stats,
                                        FeatureSet feature_set) {
  if (!stats.fitted) throw StateError("normalization statistics not fitted");
  return stats.apply(raw_social_vector(comment, polarity, feature_set));
}

double point_biserial(std::span<const double> continuous,
                      std::span<const int> dichotomous) {
  if (continuous.size() != dichotomous.size()) {
    throw std::invalid_argument("point_biserial: column lengths differ");
  }
  const std::size_t n = continuous.size();
  double sum1 = 0.0, sum0 = 0.0, sum = 0.0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dichotomous[i] != 0 && dichotomous[i] != 1) {
      throw std::invalid_argument("point_biserial: labels must be 0 or 1");
    }
    sum += continuous[i];
    if (dichotomous[i] == 1) {
      sum1 += continuous[i];
      ++n1;
    } else {
      sum0 += continuous[i];
    }
  }
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw UndefinedError("point_biserial: single group");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : continuous) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (sd == 0.0) throw UndefinedError("point_biserial: zero variance");
  const double p = static_cast<double>(n1) / static_cast<double>(n);
  const double q = 1.0 - p;
  const double m1 = sum1 / static_cast<double>(n1);
  const double m0 = sum0 / static_cast<double>(n0);
  return (m1 - m0) / sd * std::sqrt(p * q);
}

std::vector<std::string> default_correlation_features() {
  return {"like_count_comment",  "like_count_post",
          "report_count_comment", "report_count_post",
          "relative_reporting_tendency", "post_polarity",
          "user_polarity",        "user_post_polarity",
          "contextual_embeddings"};
}

namespace {

std::optional<double> numeric_id(const std::string& id) {
  double value = 0.0;
  const auto* end = id.data() + id.size();
  auto [ptr, ec] = std::from_chars(id.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

std::vector<CorrelationRow> correlation_report(
    const Dataset& dataset, const PolarityIndex& polarity,
    const std::vector<std::string>& features,
    const std::vector<double>* predictions) {
  if (predictions && predictions->size() != dataset.size()) {
    throw std::invalid_argument("predictions must align with the dataset");
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].label && !dataset[i].synthetic) rows.push_back(i);
  }

  std::vector<CorrelationRow> report;
  for (const auto& name : features) {
    CorrelationRow row{name, std::nullopt, {}};
    std::vector<double> x;
    std::vector<int> y;
    bool ok = true;
    for (std::size_t i : rows) {
      const Comment& c = dataset[i];
      std::optional<double> value;
      if (name == "like_count_comment") value = static_cast<double>(c.like_count_comment);
      else if (name == "like_count_post") value = static_cast<double>(c.like_count_post);
      else if (name == "report_count_comment") value = static_cast<double>(c.report_count_comment);
      else if (name == "report_count_post") value = static_cast<double>(c.report_count_post);
      else if (name == "relative_reporting_tendency")
        value = relative_reporting_tendency(c.report_count_comment, c.report_count_post);
      else if (name == "post_polarity") value = polarity.post(c.post_id);
      else if (name == "user_polarity") {
        if (c.user_id) value = polarity.user(*c.user_id);
      } else if (name == "user_post_polarity") value = polarity.record_for(c).combined;
      else if (name == "contextual_embeddings") {
        if (!predictions) {
          row.note = "no classifier predictions supplied";
          ok = false;
          break;
        }
        value = (*predictions)[i];
      } else if (name == "post_id" || name == "user_id") {
        row.note = "diagnostic";
        const auto id = name == "post_id" ? std::optional<std::string>(c.post_id)
                                          : c.user_id;
        if (!id) continue;
        value = numeric_id(*id);
        if (!value) {
          row.note = "non-numeric identifier";
          ok = false;
          break;
        }
      } else {
        throw std::invalid_argument("unknown correlation feature '" + name + "'");
      }
      if (!value) continue;
      x.push_back(*value);
      y.push_back(*c.label);
    }
    if (ok) {
      try {
        row.r_pb = point_biserial(x, y);
      } catch (const UndefinedError& e) {
        row.note = e.what();
      }
    }
    report.push_back(std::move(row));
  }
  return report;
}

void write_correlation_report(std::ostream& out,
                              const std::vector<CorrelationRow>& rows) {
  out << "feature,r_pb\n";
  for (const auto& row : rows) {
    out << row.feature << ',';
    if (row.r_pb) {
      std::ostringstream value;
      value << std::fixed << std::setprecision(6) << *row.r_pb;
      out << value.str();
    } else {
      out << "undefined";
    }
    out << '\n';
  }
}

}  // namespace abuse
