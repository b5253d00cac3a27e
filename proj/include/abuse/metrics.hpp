#pragma once

// Binary classification metrics and per-language evaluation reports.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace abuse {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

/// Throws std::invalid_argument on length mismatch or non-binary values.
Confusion confusion(std::span<const int> predictions, std::span<const int> labels);

/// A zero denominator yields value 0 with degenerate set.
struct MetricValue {
  double value = 0.0;
  bool degenerate = false;
};

MetricValue precision(const Confusion& c);
MetricValue recall(const Confusion& c);
MetricValue f1(const Confusion& c);
MetricValue accuracy(const Confusion& c);

struct ReportRow {
  std::string language;
  Confusion counts;
  MetricValue acc, p, r, f;
};

ReportRow report_row(std::string language, const Confusion& c);

/// One row per language (sorted) followed by an "ALL" row over every item.
std::vector<ReportRow> evaluation_report(std::span<const int> predictions,
                                         std::span<const int> labels,
                                         std::span<const std::string> languages);

/// Columns language,n,acc,p,r,f1,flags; flags lists degenerate metrics.
void write_report(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace abuse
