#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abuse/corpus.hpp"
#include "abuse/lexicon.hpp"

namespace abuse {

/// Builds train ∪ synthetic: each extended-lexicon word of a language is
/// prepended to a distinct sampled non-abusive training comment of that
/// language, producing a label-1 synthetic copy. Untagged lexicon words pair
/// with comments of any language. When a language has fewer non-abusive
/// comments than words, comments are sampled with replacement. Originals
/// are kept unchanged and come first. Deterministic for a fixed seed.
/// Skipped languages and sampling fallbacks are appended to `warnings`.
Dataset augment(const Dataset& train, const ExtendedAbusiveSet& ext_set,
                std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

}  // namespace abuse
