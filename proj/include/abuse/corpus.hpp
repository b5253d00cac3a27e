#pragma once

// Comment datasets: loading, validation, per-post/per-user grouping, and
// stratified train/test splitting.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace abuse {

struct Comment {
  std::string comment_id;
  std::string raw_text;
  std::string text;  // filled by preprocessing
  std::optional<std::string> user_id;
  std::string post_id;
  std::uint64_t like_count_comment = 0;
  std::uint64_t report_count_comment = 0;
  std::uint64_t like_count_post = 0;
  std::uint64_t report_count_post = 0;
  std::string language;
  std::optional<int> label;  // 1 = abusive
  bool synthetic = false;    // produced by augmentation

  bool operator==(const Comment&) const = default;
};

/// Immutable collection of comments with post and user groupings.
/// Every comment index appears in exactly one post group, and every comment
/// with a user id in exactly one user group.
class Dataset {
 public:
  using Index = std::map<std::string, std::vector<std::size_t>>;

  Dataset() = default;
  explicit Dataset(std::vector<Comment> comments);

  const std::vector<Comment>& comments() const { return comments_; }
  const Comment& operator[](std::size_t i) const { return comments_[i]; }
  std::size_t size() const { return comments_.size(); }
  bool empty() const { return comments_.empty(); }

  const Index& by_post() const { return by_post_; }
  const Index& by_user() const { return by_user_; }

  bool has_labels() const;
  bool operator==(const Dataset& other) const {
    return comments_ == other.comments_;
  }

 private:
  std::vector<Comment> comments_;
  Index by_post_;
  Index by_user_;
};

enum class InputFormat { delimited, json_lines };

/// Maps dataset fields to input columns. An empty column name means the
/// field is absent from the input.
struct ColumnSchema {
  InputFormat format = InputFormat::delimited;
  char delimiter = ',';
  std::string comment_id = "comment_id";
  std::string raw_text = "raw_text";
  std::string text = "text";
  std::string user_id = "user_id";
  std::string post_id = "post_id";
  std::string like_count_comment = "like_count_comment";
  std::string report_count_comment = "report_count_comment";
  std::string like_count_post = "like_count_post";
  std::string report_count_post = "report_count_post";
  std::string language = "language";
  std::string label = "label";
  std::string synthetic = "synthetic";
  std::string default_language = "und";
};

struct DropReport {
  std::size_t total_rows = 0;
  std::size_t missing_text = 0;
  std::size_t missing_field = 0;
  std::size_t malformed_count = 0;
  std::size_t malformed_label = 0;
  std::size_t duplicate_id = 0;
  std::vector<std::string> warnings;

  std::size_t dropped() const {
    return missing_text + missing_field + malformed_count + malformed_label +
           duplicate_id;
  }
};

struct LoadResult {
  Dataset dataset;
  DropReport report;
};

/// Reads a delimited file with a header row, or JSON lines. Rows with
/// missing text, missing mapped values, non-numeric counts, or labels
/// outside {0,1} are dropped and counted. Duplicate ids keep the first row.
/// Throws IoError when unreadable and DataError when no valid row remains.
LoadResult load_dataset(const std::filesystem::path& path,
                        const ColumnSchema& schema = {});

/// Writes the dataset as comma-separated text using the default column
/// names, so load_dataset with a default schema reads it back.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Stratified (by label, when present) deterministic split.
/// Throws std::invalid_argument when test_fraction is outside (0,1) or the
/// dataset is empty.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double test_fraction,
                                  std::uint64_t seed);

// RFC 4180 style record parsing; exposed for the CLI and tests.
std::vector<std::vector<std::string>> parse_delimited(const std::string& content,
                                                      char delimiter);
std::string quote_field(const std::string& field, char delimiter);

}  // namespace abuse
