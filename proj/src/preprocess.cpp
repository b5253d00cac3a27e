#include "abuse/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "abuse/error.hpp"
#include "text_util.hpp"

namespace abuse {

namespace {

constexpr char32_t kZwj = 0x200D;

// Decodes one code point starting at `i`; invalid bytes yield U+FFFD and
// advance by one.
char32_t next_codepoint(std::string_view s, std::size_t& i) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto length = static_cast<std::int32_t>(s.size());
  auto pos = static_cast<std::int32_t>(i);
  UChar32 cp = 0;
  U8_NEXT(bytes, pos, length, cp);
  i = static_cast<std::size_t>(pos);
  return cp < 0 ? 0xFFFD : static_cast<char32_t>(cp);
}

void append_utf8(std::string& out, char32_t cp) {
  std::uint8_t buf[4];
  std::int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, 4, static_cast<UChar32>(cp), error);
  if (!error) out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

// Modifiers, variation selectors, keycap and tag characters that only
// decorate a preceding emoji.
bool is_emoji_component(char32_t cp) {
  return cp == 0xFE0E || cp == 0xFE0F || cp == 0x20E3 ||
         (cp >= 0x1F3FB && cp <= 0x1F3FF) || (cp >= 0xE0020 && cp <= 0xE007F);
}

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) return std::ispunct(static_cast<unsigned char>(cp)) != 0;
  return u_ispunct(static_cast<UChar32>(cp));
}

bool is_space(char32_t cp) {
  return cp < 0x80 ? detail::is_ascii_space(static_cast<char>(cp))
                   : u_isUWhiteSpace(static_cast<UChar32>(cp));
}

// Length in bytes of the emoji sequence starting at `i` (base emoji plus
// trailing components and ZWJ-joined emoji), or 0 if none starts there.
std::size_t emoji_sequence_length(std::string_view s, std::size_t i) {
  std::size_t pos = i;
  const char32_t first = next_codepoint(s, pos);
  if (!is_emoji_codepoint(first) && !is_emoji_component(first)) return 0;
  while (pos < s.size()) {
    std::size_t probe = pos;
    const char32_t cp = next_codepoint(s, probe);
    if (is_emoji_component(cp)) {
      pos = probe;
      continue;
    }
    if (cp == kZwj && probe < s.size()) {
      std::size_t after = probe;
      if (is_emoji_codepoint(next_codepoint(s, after))) {
        pos = after;
        continue;
      }
    }
    break;
  }
  return pos - i;
}

}  // namespace

bool is_emoji_codepoint(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // pictographs, emoticons, flags
         (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
         (cp >= 0x2300 && cp <= 0x23FF) ||    // misc technical
         (cp >= 0x2B00 && cp <= 0x2BFF) ||    // arrows and shapes
         (cp >= 0x2190 && cp <= 0x21FF) ||    // arrows
         cp == 0x00A9 || cp == 0x00AE || cp == 0x203C || cp == 0x2049 ||
         cp == 0x2122 || cp == 0x2139 || cp == 0x3030 || cp == 0x303D ||
         cp == 0x3297 || cp == 0x3299;
}

Transliterator Transliterator::lookup(
    std::unordered_map<std::string, std::string> table) {
  Transliterator t;
  t.kind_ = Kind::lookup;
  t.table_ = std::move(table);
  return t;
}

Transliterator Transliterator::from_file(const std::filesystem::path& path) {
  std::unordered_map<std::string, std::string> table;
  for (auto& [native, roman] : detail::read_two_column(path)) {
    table.emplace(std::move(native), std::move(roman));
  }
  return lookup(std::move(table));
}

std::string Transliterator::apply(std::string_view text) const {
  if (kind_ == Kind::identity) return std::string(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (detail::is_ascii_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && !detail::is_ascii_space(text[i])) ++i;
    const std::string token(text.substr(start, i - start));
    auto it = table_.find(token);
    out += it == table_.end() ? token : it->second;
  }
  return out;
}

WordSets load_insignificant_words(const std::filesystem::path& path) {
  WordSets sets;
  for (const auto& [tag, words] : detail::read_sectioned_list(path)) {
    auto& target = sets[tag];
    for (const auto& w : words) target.insert(lowercase(w));
  }
  return sets;
}

EmojiMap load_emoji_map(const std::filesystem::path& path) {
  EmojiMap map;
  for (auto& [emoji, text] : detail::read_two_column(path)) {
    std::size_t i = 0;
    while (i < text.size()) {
      const char32_t cp = next_codepoint(text, i);
      if (is_emoji_codepoint(cp) || is_emoji_component(cp)) {
        throw ConfigError(path.string() + ": replacement for '" + emoji +
                          "' contains an emoji");
      }
    }
    if (emoji.empty()) throw ConfigError(path.string() + ": empty emoji key");
    // Replacements are inserted after the cleaning step, so they must
    // already be clean for the pipeline to be idempotent.
    map.emplace(std::move(emoji), clean_text(text, PreprocessConfig{}));
  }
  return map;
}

std::string clean_text(std::string_view text, const PreprocessConfig& config) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = next_codepoint(text, i);
    const bool drop =
        (config.strip_punctuation && is_punctuation(cp)) ||
        (config.strip_digits && u_isdigit(static_cast<UChar32>(cp))) ||
        is_space(cp);
    if (drop) out.push_back(' ');
    else append_utf8(out, cp);
  }
  return detail::collapse_whitespace(out);
}

std::string map_emojis(std::string_view text, const EmojiMap& emoji_map) {
  std::size_t max_key = 0;
  for (const auto& [key, value] : emoji_map) max_key = std::max(max_key, key.size());

  std::string out;
  out.reserve(text.size());
  bool changed = false;
  std::size_t i = 0;
  while (i < text.size()) {
    // Longest mapped sequence first.
    bool matched = false;
    for (std::size_t len = std::min(max_key, text.size() - i); len > 0; --len) {
      auto it = emoji_map.find(std::string(text.substr(i, len)));
      if (it == emoji_map.end()) continue;
      out.push_back(' ');
      out += it->second;
      out.push_back(' ');
      i += len;
      matched = changed = true;
      break;
    }
    if (matched) continue;
    if (const auto len = emoji_sequence_length(text, i); len > 0) {
      out.push_back(' ');
      i += len;
      changed = true;
      continue;
    }
    std::size_t next = i;
    next_codepoint(text, next);
    out.append(text.substr(i, next - i));
    i = next;
  }
  return changed ? detail::collapse_whitespace(out) : out;
}

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = next_codepoint(text, i);
    append_utf8(out, static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
  }
  return out;
}

std::string remove_insignificant_words(std::string_view text,
                                       const PreprocessConfig& config,
                                       std::string_view language) {
  const auto& sets = config.insignificant_words;
  auto is_insignificant = [&](std::string_view token) {
    const std::string key(token);
    if (language.empty()) {
      return std::any_of(sets.begin(), sets.end(),
                         [&](const auto& kv) { return kv.second.contains(key); });
    }
    for (const std::string& tag : {std::string(), std::string(language)}) {
      auto it = sets.find(tag);
      if (it != sets.end() && it->second.contains(key)) return true;
    }
    return false;
  };
  std::vector<std::string> kept;
  for (auto token : detail::split_whitespace(text)) {
    if (!is_insignificant(token)) kept.emplace_back(token);
  }
  return detail::join(kept, " ");
}

std::string transliterate(std::string_view text, const Transliterator& provider) {
  return provider.apply(text);
}

std::string preprocess_text(std::string_view raw, const PreprocessConfig& config,
                            std::string_view language) {
  const auto transliterated = transliterate(raw, config.transliteration);
  const auto cleaned = clean_text(transliterated, config);
  const auto expanded = map_emojis(cleaned, config.emoji_map);
  const auto lowered = lowercase(expanded);
  return remove_insignificant_words(lowered, config, language);
}

Comment preprocess_comment(const Comment& comment, const PreprocessConfig& config) {
  Comment out = comment;
  out.text = preprocess_text(comment.raw_text, config, comment.language);
  return out;
}

Dataset preprocess_dataset(const Dataset& dataset, const PreprocessConfig& config) {
  std::vector<Comment> out(dataset.size());
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = preprocess_comment(dataset[i], config);
  }
  return Dataset(std::move(out));
}

}  // namespace abuse
