#include "abuse/metrics.hpp"

#include <iomanip>
#include <map>
#include <stdexcept>

namespace abuse {

Confusion confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("confusion: length mismatch");
  }
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    const int l = labels[i];
    if ((p != 0 && p != 1) || (l != 0 && l != 1)) {
      throw std::invalid_argument("confusion: values must be 0 or 1");
    }
    if (p == 1) {
      ++(l == 1 ? c.tp : c.fp);
    } else {
      ++(l == 1 ? c.fn : c.tn);
    }
  }
  return c;
}

namespace {

MetricValue ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

}  // namespace

MetricValue precision(const Confusion& c) { return ratio(c.tp, c.tp + c.fp); }
MetricValue recall(const Confusion& c) { return ratio(c.tp, c.tp + c.fn); }
MetricValue accuracy(const Confusion& c) { return ratio(c.tp + c.tn, c.total()); }

// 2PR / (P + R) reduced to counts.
MetricValue f1(const Confusion& c) { return ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn); }

ReportRow report_row(std::string language, const Confusion& c) {
  return {std::move(language), c, accuracy(c), precision(c), recall(c), f1(c)};
}

std::vector<ReportRow> evaluation_report(std::span<const int> predictions,
                                         std::span<const int> labels,
                                         std::span<const std::string> languages) {
  if (languages.size() != labels.size()) {
    throw std::invalid_argument("evaluation_report: language column length mismatch");
  }
  const Confusion all = confusion(predictions, labels);
  std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> by_language;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& [preds, labs] = by_language[languages[i]];
    preds.push_back(predictions[i]);
    labs.push_back(labels[i]);
  }
  std::vector<ReportRow> rows;
  for (const auto& [lang, cols] : by_language) {
    rows.push_back(report_row(lang, confusion(cols.first, cols.second)));
  }
  rows.push_back(report_row("ALL", all));
  return rows;
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "language,n,acc,p,r,f1,flags\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& row : rows) {
    std::string flags;
    const auto flag = [&](const MetricValue& m, const char* name) {
      if (!m.degenerate) return;
      if (!flags.empty()) flags += ';';
      flags += name;
    };
    if (row.counts.total() == 0) flags = "empty";
    flag(row.acc, "acc");
    flag(row.p, "p");
    flag(row.r, "r");
    flag(row.f, "f1");
    out << row.language << ',' << row.counts.total() << ',' << row.acc.value << ','
        << row.p.value << ',' << row.r.value << ',' << row.f.value << ',' << flags
        << '\n';
  }
}

}  // namespace abuse
