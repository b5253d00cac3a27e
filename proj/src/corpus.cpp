#include "abuse/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "abuse/error.hpp"
#include "text_util.hpp"

namespace abuse {

Dataset::Dataset(std::vector<Comment> comments) : comments_(std::move(comments)) {
  for (std::size_t i = 0; i < comments_.size(); ++i) {
    by_post_[comments_[i].post_id].push_back(i);
    if (comments_[i].user_id) by_user_[*comments_[i].user_id].push_back(i);
  }
}

bool Dataset::has_labels() const {
  return std::any_of(comments_.begin(), comments_.end(),
                     [](const Comment& c) { return c.label.has_value(); });
}

std::vector<std::vector<std::string>> parse_delimited(const std::string& content,
                                                      char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record.front().empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      // tolerated before \n
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

std::string quote_field(const std::string& field, char delimiter) {
  const bool needs = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                     std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

// One input row as column name -> optional value.
using Row = std::unordered_map<std::string, std::optional<std::string>>;

std::vector<Row> read_delimited_rows(const std::string& content, char delimiter,
                                     std::vector<std::string>& header) {
  auto records = parse_delimited(content, delimiter);
  std::vector<Row> rows;
  if (records.empty()) return rows;
  header = records.front();
  for (auto& h : header) h = std::string(detail::trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    Row row;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c < records[r].size()) row[header[c]] = records[r][c];
      else row[header[c]] = std::nullopt;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> read_json_rows(const std::string& content,
                                std::vector<std::string>& header,
                                DropReport& report) {
  std::vector<Row> rows;
  std::set<std::string> keys;
  std::size_t lineno = 0;
  for (auto line : detail::split(content, '\n')) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty()) continue;
    auto parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      ++report.total_rows;
      ++report.missing_field;
      report.warnings.push_back("line " + std::to_string(lineno) +
                                ": not a JSON object");
      continue;
    }
    Row row;
    for (const auto& [key, value] : parsed.items()) {
      keys.insert(key);
      if (value.is_null()) row[key] = std::nullopt;
      else if (value.is_string()) row[key] = value.get<std::string>();
      else if (value.is_boolean()) row[key] = value.get<bool>() ? "1" : "0";
      else row[key] = value.dump();
    }
    rows.push_back(std::move(row));
  }
  header.assign(keys.begin(), keys.end());
  return rows;
}

std::optional<std::string> cell(const Row& row, const std::string& column) {
  if (column.empty()) return std::nullopt;
  auto it = row.find(column);
  if (it == row.end() || !it->second) return std::nullopt;
  return it->second;
}

enum class CountStatus { ok, missing, malformed };

CountStatus parse_count(const Row& row, const std::string& column,
                        std::uint64_t& out) {
  if (column.empty()) {
    out = 0;
    return CountStatus::ok;
  }
  auto value = cell(row, column);
  if (!value) return CountStatus::missing;
  auto body = detail::trim(*value);
  if (body.empty()) return CountStatus::missing;
  const auto* end = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(body.data(), end, out);
  if (ec != std::errc() || ptr != end) return CountStatus::malformed;
  return CountStatus::ok;
}

}  // namespace

LoadResult load_dataset(const std::filesystem::path& path,
                        const ColumnSchema& schema) {
  const std::string content = detail::read_file(path);
  LoadResult result;
  DropReport& report = result.report;

  std::vector<std::string> header;
  std::vector<Row> rows =
      schema.format == InputFormat::json_lines
          ? read_json_rows(content, header, report)
          : read_delimited_rows(content, schema.delimiter, header);

  if (schema.format == InputFormat::delimited) {
    const std::set<std::string> present(header.begin(), header.end());
    for (const auto* required :
         {&schema.raw_text, &schema.post_id, &schema.like_count_comment,
          &schema.report_count_comment, &schema.like_count_post,
          &schema.report_count_post}) {
      if (!required->empty() && !present.contains(*required)) {
        throw DataError(path.string() + ": missing column '" + *required + "'");
      }
    }
  }

  std::vector<Comment> comments;
  std::set<std::string> seen_ids;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    ++report.total_rows;

    Comment c;
    auto raw = cell(row, schema.raw_text);
    if (!raw || detail::trim(*raw).empty()) {
      ++report.missing_text;
      continue;
    }
    c.raw_text = *raw;

    auto post = cell(row, schema.post_id);
    if (!post || detail::trim(*post).empty()) {
      ++report.missing_field;
      continue;
    }
    c.post_id = std::string(detail::trim(*post));

    bool drop = false;
    const std::pair<const std::string*, std::uint64_t*> counts[] = {
        {&schema.like_count_comment, &c.like_count_comment},
        {&schema.report_count_comment, &c.report_count_comment},
        {&schema.like_count_post, &c.like_count_post},
        {&schema.report_count_post, &c.report_count_post}};
    for (const auto& [column, target] : counts) {
      const auto status = parse_count(row, *column, *target);
      if (status == CountStatus::missing) {
        ++report.missing_field;
        drop = true;
        break;
      }
      if (status == CountStatus::malformed) {
        ++report.malformed_count;
        drop = true;
        break;
      }
    }
    if (drop) continue;

    if (auto label = cell(row, schema.label)) {
      const auto body = detail::trim(*label);
      if (body == "1") c.label = 1;
      else if (body == "0") c.label = 0;
      else if (!body.empty()) {
        ++report.malformed_label;
        continue;
      }
    }

    auto id = cell(row, schema.comment_id);
    c.comment_id = (id && !detail::trim(*id).empty())
                       ? std::string(detail::trim(*id))
                       : "row-" + std::to_string(r + 1);
    if (!seen_ids.insert(c.comment_id).second) {
      ++report.duplicate_id;
      report.warnings.push_back("duplicate comment_id '" + c.comment_id +
                                "' ignored; first occurrence kept");
      continue;
    }

    if (auto text = cell(row, schema.text)) c.text = *text;
    if (auto user = cell(row, schema.user_id)) {
      auto body = detail::trim(*user);
      if (!body.empty()) c.user_id = std::string(body);
    }
    auto lang = cell(row, schema.language);
    c.language = (lang && !detail::trim(*lang).empty())
                     ? std::string(detail::trim(*lang))
                     : schema.default_language;
    if (auto synth = cell(row, schema.synthetic)) {
      const auto body = detail::trim(*synth);
      c.synthetic = body == "1" || body == "true";
    }
    comments.push_back(std::move(c));
  }

  if (comments.empty()) {
    throw DataError(path.string() + ": no valid rows");
  }
  result.dataset = Dataset(std::move(comments));
  return result;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const ColumnSchema s;
  const char d = s.delimiter;
  out << s.comment_id << d << s.user_id << d << s.post_id << d << s.language
      << d << s.like_count_comment << d << s.report_count_comment << d
      << s.like_count_post << d << s.report_count_post << d << s.label << d
      << s.synthetic << d << s.raw_text << d << s.text << '\n';
  for (const auto& c : dataset.comments()) {
    out << quote_field(c.comment_id, d) << d
        << quote_field(c.user_id.value_or(""), d) << d
        << quote_field(c.post_id, d) << d << quote_field(c.language, d) << d
        << c.like_count_comment << d << c.report_count_comment << d
        << c.like_count_post << d << c.report_count_post << d
        << (c.label ? std::to_string(*c.label) : std::string()) << d
        << (c.synthetic ? "1" : "0") << d << quote_field(c.raw_text, d) << d
        << quote_field(c.text, d) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double test_fraction,
                                  std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("split: test_fraction must lie in (0,1)");
  }
  if (dataset.empty()) throw std::invalid_argument("split: empty dataset");

  // Strata: label 0, label 1, unlabeled.
  std::vector<std::vector<std::size_t>> strata(3);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& label = dataset[i].label;
    strata[label ? static_cast<std::size_t>(*label) : 2].push_back(i);
  }

  // Largest-remainder allocation keeps the total at round(f * n).
  const auto target = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(dataset.size())));
  std::vector<std::size_t> quota(3);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    const double exact = test_fraction * static_cast<double>(strata[s].size());
    quota[s] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[s];
    remainders.emplace_back(exact - std::floor(exact), s);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [rem, s] : remainders) {
    if (assigned >= target) break;
    if (quota[s] < strata[s].size() && rem > 0.0) {
      ++quota[s];
      ++assigned;
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(dataset.size(), false);
  for (std::size_t s = 0; s < 3; ++s) {
    auto members = strata[s];
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t k = 0; k < quota[s]; ++k) in_test[members[k]] = true;
  }

  std::vector<Comment> train;
  std::vector<Comment> test;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (in_test[i] ? test : train).push_back(dataset[i]);
  }
  return {Dataset(std::move(train)), Dataset(std::move(test))};
}

}  // namespace abuse
