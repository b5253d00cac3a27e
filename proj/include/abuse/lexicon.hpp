#pragma once

// Abusive-word lexicon, spelling-variant extension, and abuse matching.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abuse {

// Language tag -> lowercase tokens. The "" tag holds untagged words, which
// match comments of any language.
using LanguageWordSets =
    std::map<std::string, std::set<std::string, std::less<>>, std::less<>>;

struct AbusiveSet {
  LanguageWordSets words;
  std::size_t size() const;
};

struct ExtendedAbusiveSet {
  LanguageWordSets words;
  std::map<std::string, std::string> provenance;  // variant -> base word
  std::size_t size() const;
};

struct SubstitutionRules {
  std::vector<std::pair<std::string, std::string>> rules;
  std::size_t max_variants_per_word = 32;

  /// Common Roman-script phonetic confusions for Indic languages.
  static SubstitutionRules defaults();
  /// `pattern<TAB>replacement` lines. Throws ConfigError on empty patterns.
  static SubstitutionRules from_file(const std::filesystem::path& path,
                                     std::size_t max_variants_per_word = 32);
};

enum class MatchMode { token, substring };

/// Throws ConfigError when unreadable, empty, or a token contains whitespace.
AbusiveSet load_abusive_words(const std::filesystem::path& path);

/// The base word followed by its variants in lexicographic order, at most
/// max_variants_per_word entries in total. Variants apply one rule at one
/// match position, or two rules at two non-overlapping positions.
std::vector<std::string> spelling_variants(std::string_view word,
                                           const SubstitutionRules& rules);

ExtendedAbusiveSet extend_spellings(const AbusiveSet& base,
                                    const SubstitutionRules& rules);

/// First lexicon word found scanning the text left to right. Token mode
/// compares whole whitespace-delimited tokens; substring mode accepts any
/// occurrence. Words of `language` plus untagged words are used; a language
/// not in the set falls back to every language.
std::optional<std::string> contains_abuse(std::string_view text,
                                          const ExtendedAbusiveSet& set,
                                          std::string_view language,
                                          MatchMode mode = MatchMode::token);

}  // namespace abuse
