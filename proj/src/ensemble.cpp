#include "abuse/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "abuse/corpus.hpp"
#include "abuse/error.hpp"
#include "text_util.hpp"

namespace abuse {

std::string_view to_string(DecisionPath path) {
  switch (path) {
    case DecisionPath::majority: return "majority";
    case DecisionPath::confidence: return "confidence";
    case DecisionPath::best_fallback: return "best_fallback";
  }
  return "majority";
}

namespace {

void check_outputs(std::span<const MemberOutput> outputs, std::size_t best_index) {
  if (outputs.size() != kEnsembleSize) {
    throw std::invalid_argument("ensemble needs exactly 6 member outputs, got " +
                                std::to_string(outputs.size()));
  }
  if (best_index >= outputs.size()) throw std::invalid_argument("best member out of range");
  for (const auto& o : outputs) {
    if (o.label != 0 && o.label != 1) throw std::invalid_argument("member label must be 0 or 1");
  }
}

std::size_t count_ones(std::span<const MemberOutput> outputs) {
  std::size_t ones = 0;
  for (const auto& o : outputs) ones += o.label == 1 ? 1 : 0;
  return ones;
}

}  // namespace

VoteResult confidence_decision(std::span<const MemberOutput> outputs,
                               double threshold, std::size_t best_index) {
  check_outputs(outputs, best_index);
  if (count_ones(outputs) != 3) {
    throw std::invalid_argument("confidence decision needs a 3-3 split");
  }
  VoteResult r;
  for (const auto& o : outputs) {
    (o.label == 1 ? r.confidence_ones : r.confidence_zeros) +=
        std::abs(o.probability - threshold);
  }
  if (r.confidence_ones > r.confidence_zeros) {
    r.label = 1;
    r.path = DecisionPath::confidence;
  } else if (r.confidence_zeros > r.confidence_ones) {
    r.label = 0;
    r.path = DecisionPath::confidence;
  } else {
    r.label = outputs[best_index].label;
    r.path = DecisionPath::best_fallback;
  }
  return r;
}

VoteResult majority_voting(std::span<const MemberOutput> outputs, double threshold,
                           std::size_t best_index) {
  check_outputs(outputs, best_index);
  const std::size_t ones = count_ones(outputs);
  if (ones > 3) return {1, DecisionPath::majority, 0.0, 0.0};
  if (ones <= 2) return {0, DecisionPath::majority, 0.0, 0.0};
  return confidence_decision(outputs, threshold, best_index);
}

std::size_t best_member_index(std::span<const EnsembleMember> members) {
  std::size_t found = members.size();
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (!members[k].is_best) continue;
    if (found != members.size()) throw std::invalid_argument("more than one best member");
    found = k;
  }
  if (found == members.size()) throw std::invalid_argument("no best member");
  return found;
}

EnsembleTrace run_ensemble(std::span<const EnsembleMember> members,
                           std::span<const std::span<const double>> text,
                           std::span<const double> social, double threshold) {
  if (members.size() != kEnsembleSize || text.size() != kEnsembleSize) {
    throw std::invalid_argument("ensemble needs exactly 6 members and inputs");
  }
  EnsembleTrace trace;
  trace.members.reserve(kEnsembleSize);
  for (std::size_t k = 0; k < kEnsembleSize; ++k) {
    const Prediction p = predict(members[k].params, text[k], social, threshold);
    trace.members.push_back({p.probability, p.label});
  }
  trace.vote = majority_voting(trace.members, threshold, best_member_index(members));
  return trace;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [key, value] : manifest.meta) out << "# " << key << '=' << value << '\n';
  out << "method,seq_len,checkpoint_path,embedding_path,is_best\n";
  for (const auto& e : manifest.entries) {
    out << quote_field(e.method, ',') << ',' << e.seq_len << ','
        << quote_field(e.checkpoint.generic_string(), ',') << ','
        << quote_field(e.embedding, ',') << ',' << (e.is_best ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  const std::string content = detail::read_file(path);
  Manifest manifest;
  std::string body;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    const std::string_view line(content.data() + pos, end - pos);
    if (line.starts_with("#")) {
      const std::string_view kv = detail::trim(line.substr(1));
      const auto eq = kv.find('=');
      if (eq != std::string_view::npos) {
        manifest.meta[std::string(detail::trim(kv.substr(0, eq)))] =
            std::string(detail::trim(kv.substr(eq + 1)));
      }
    } else {
      body.append(line).push_back('\n');
    }
    pos = end + 1;
  }

  const auto records = parse_delimited(body, ',');
  const auto base = path.parent_path();
  bool header = true;
  for (const auto& rec : records) {
    if (rec.size() == 1 && detail::trim(rec[0]).empty()) continue;
    if (header) {
      header = false;
      if (!rec.empty() && rec[0] == "method") continue;
    }
    if (rec.size() != 5) {
      throw FormatError(path.string() + ": manifest rows need 5 fields");
    }
    ManifestEntry e;
    e.method = rec[0];
    try {
      e.seq_len = std::stoul(rec[1]);
    } catch (const std::exception&) {
      throw FormatError(path.string() + ": bad seq_len '" + rec[1] + "'");
    }
    e.checkpoint = rec[2];
    if (e.checkpoint.is_relative()) e.checkpoint = base / e.checkpoint;
    e.embedding = rec[3];
    if (rec[4] != "0" && rec[4] != "1") {
      throw FormatError(path.string() + ": is_best must be 0 or 1");
    }
    e.is_best = rec[4] == "1";
    manifest.entries.push_back(std::move(e));
  }
  if (manifest.entries.size() != kEnsembleSize) {
    throw FormatError(path.string() + ": manifest lists " +
                      std::to_string(manifest.entries.size()) + " members, expected 6");
  }
  std::size_t best = 0;
  for (const auto& e : manifest.entries) best += e.is_best ? 1 : 0;
  if (best != 1) throw FormatError(path.string() + ": exactly one member must be best");
  return manifest;
}

}  // namespace abuse
