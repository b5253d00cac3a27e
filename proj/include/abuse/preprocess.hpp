#pragma once

// Comment text normalisation: transliteration, cleaning, emoji expansion,
// lowercasing, and insignificant-word removal.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "abuse/corpus.hpp"

namespace abuse {

/// Native-script to Roman-script token replacement. The identity provider
/// passes text through unchanged.
class Transliterator {
 public:
  enum class Kind { identity, lookup };

  Transliterator() = default;
  static Transliterator identity() { return {}; }
  static Transliterator lookup(std::unordered_map<std::string, std::string> table);
  /// Reads `native<TAB>roman` lines. Throws ConfigError when unreadable.
  static Transliterator from_file(const std::filesystem::path& path);

  Kind kind() const { return kind_; }
  std::string apply(std::string_view text) const;

 private:
  Kind kind_ = Kind::identity;
  std::unordered_map<std::string, std::string> table_;
};

using EmojiMap = std::map<std::string, std::string>;
using WordSets = std::map<std::string, std::set<std::string>>;

struct PreprocessConfig {
  // Keyed by language tag; the "" entry applies to every language.
  WordSets insignificant_words;
  EmojiMap emoji_map;
  Transliterator transliteration;
  bool strip_digits = true;
  bool strip_punctuation = true;
};

/// `#lang:` sectioned word list, entries lowercased on load.
WordSets load_insignificant_words(const std::filesystem::path& path);
/// `emoji<TAB>text` lines. Throws ConfigError if a value contains an emoji.
EmojiMap load_emoji_map(const std::filesystem::path& path);

bool is_emoji_codepoint(char32_t cp);

/// Punctuation and digits become spaces; whitespace runs collapse; trimmed.
std::string clean_text(std::string_view text, const PreprocessConfig& config);
/// Mapped emoji sequences (longest match) become space-padded text tokens;
/// unmapped emoji are removed.
std::string map_emojis(std::string_view text, const EmojiMap& emoji_map);
/// Per-codepoint Unicode simple lowercase mapping.
std::string lowercase(std::string_view text);
/// Drops whole tokens found in the language's set or the shared set. An
/// empty language uses every set.
std::string remove_insignificant_words(std::string_view text,
                                       const PreprocessConfig& config,
                                       std::string_view language = {});
std::string transliterate(std::string_view text, const Transliterator& provider);

/// transliterate -> clean -> emoji -> lowercase -> insignificant words.
std::string preprocess_text(std::string_view raw, const PreprocessConfig& config,
                            std::string_view language = {});
Comment preprocess_comment(const Comment& comment, const PreprocessConfig& config);
Dataset preprocess_dataset(const Dataset& dataset, const PreprocessConfig& config);

}  // namespace abuse
