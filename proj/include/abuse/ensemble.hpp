#pragma once

// Six-member ensemble (three embedding methods x two sequence lengths) with
// majority voting and confidence tie-breaking.

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abuse/network.hpp"

namespace abuse {

inline constexpr std::size_t kEnsembleSize = 6;

struct MemberOutput {
  double probability = 0.0;
  int label = 0;
};

struct EnsembleMember {
  std::string method;
  std::size_t seq_len = 0;
  ModelParams params;
  bool is_best = false;
};

enum class DecisionPath { majority, confidence, best_fallback };

std::string_view to_string(DecisionPath path);

struct VoteResult {
  int label = 0;
  DecisionPath path = DecisionPath::majority;
  double confidence_ones = 0.0;   // sum of |p - threshold| over 1-voters
  double confidence_zeros = 0.0;  // same over 0-voters
};

/// Exactly six outputs: more than three 1-votes give 1, at most two give 0,
/// a 3-3 split goes to the confidence decision. `best_index` names the
/// member whose label settles an exact confidence tie.
/// Throws std::invalid_argument on a wrong count or best_index.
VoteResult majority_voting(std::span<const MemberOutput> outputs, double threshold,
                           std::size_t best_index);

/// 3-3 split only; the side with the larger sum of |p - threshold| wins.
VoteResult confidence_decision(std::span<const MemberOutput> outputs,
                               double threshold, std::size_t best_index);

/// Index of the single is_best member; std::invalid_argument otherwise.
std::size_t best_member_index(std::span<const EnsembleMember> members);

struct EnsembleTrace {
  std::vector<MemberOutput> members;
  VoteResult vote;
};

/// Per-member inputs: `text[k]` is the flattened embedding for member k; the
/// social vector is shared.
EnsembleTrace run_ensemble(std::span<const EnsembleMember> members,
                           std::span<const std::span<const double>> text,
                           std::span<const double> social, double threshold);

struct ManifestEntry {
  std::string method;
  std::size_t seq_len = 0;
  std::filesystem::path checkpoint;
  std::string embedding;  // file path or "mock:<seed>:<dim>:<transliterated>"
  bool is_best = false;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::map<std::string, std::string> meta;  // "# key=value" lines
};

/// Lines `method,seq_len,checkpoint_path,embedding_path,is_best`; relative
/// checkpoint paths resolve against the manifest's directory.
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);  // FormatError

}  // namespace abuse
