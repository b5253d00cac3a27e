#include "abuse/lexicon.hpp"

#include <algorithm>
#include <stdexcept>

#include "abuse/error.hpp"
#include "abuse/preprocess.hpp"
#include "text_util.hpp"

namespace abuse {

namespace {

std::size_t total_size(const LanguageWordSets& words) {
  std::size_t n = 0;
  for (const auto& [lang, set] : words) n += set.size();
  return n;
}

struct Substitution {
  std::size_t pos;
  std::size_t length;
  const std::string* replacement;
};

std::string apply(std::string_view word, std::initializer_list<Substitution> subs) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& s : subs) {
    out.append(word.substr(cursor, s.pos - cursor));
    out += *s.replacement;
    cursor = s.pos + s.length;
  }
  out.append(word.substr(cursor));
  return out;
}

bool valid_token(std::string_view token) {
  return !token.empty() &&
         std::none_of(token.begin(), token.end(), detail::is_ascii_space);
}

}  // namespace

std::size_t AbusiveSet::size() const { return total_size(words); }
std::size_t ExtendedAbusiveSet::size() const { return total_size(words); }

SubstitutionRules SubstitutionRules::defaults() {
  SubstitutionRules r;
  r.rules = {{"aa", "a"}, {"a", "aa"}, {"ee", "i"}, {"i", "ee"}, {"oo", "u"},
             {"u", "oo"}, {"w", "v"},  {"v", "w"},  {"ph", "f"}, {"z", "j"}};
  return r;
}

SubstitutionRules SubstitutionRules::from_file(const std::filesystem::path& path,
                                               std::size_t max_variants_per_word) {
  SubstitutionRules r;
  r.max_variants_per_word = max_variants_per_word;
  for (auto& [pattern, replacement] : detail::read_two_column(path)) {
    if (pattern.empty()) throw ConfigError(path.string() + ": empty rule pattern");
    r.rules.emplace_back(std::move(pattern), std::move(replacement));
  }
  return r;
}

AbusiveSet load_abusive_words(const std::filesystem::path& path) {
  AbusiveSet set;
  for (const auto& [tag, words] : detail::read_sectioned_list(path)) {
    auto& target = set.words[tag];
    for (const auto& w : words) {
      if (!valid_token(w)) {
        throw ConfigError(path.string() + ": lexicon entry '" + w +
                          "' contains whitespace");
      }
      target.insert(lowercase(w));
    }
  }
  if (set.size() == 0) throw ConfigError(path.string() + ": empty lexicon");
  return set;
}

std::vector<std::string> spelling_variants(std::string_view word,
                                           const SubstitutionRules& rules) {
  if (rules.max_variants_per_word == 0) {
    throw std::invalid_argument("max_variants_per_word must be positive");
  }
  std::vector<Substitution> singles;
  for (const auto& [pattern, replacement] : rules.rules) {
    if (pattern.empty()) throw std::invalid_argument("empty substitution pattern");
    for (auto pos = word.find(pattern); pos != std::string_view::npos;
         pos = word.find(pattern, pos + 1)) {
      singles.push_back({pos, pattern.size(), &replacement});
    }
  }

  std::set<std::string> variants;
  for (const auto& s : singles) variants.insert(apply(word, {s}));
  for (std::size_t i = 0; i < singles.size(); ++i) {
    for (std::size_t j = 0; j < singles.size(); ++j) {
      const auto& a = singles[i];
      const auto& b = singles[j];
      if (a.pos + a.length <= b.pos) variants.insert(apply(word, {a, b}));
    }
  }
  variants.erase(std::string(word));

  std::vector<std::string> out{std::string(word)};
  for (const auto& v : variants) {
    if (out.size() >= rules.max_variants_per_word) break;
    if (valid_token(v)) out.push_back(v);
  }
  return out;
}

ExtendedAbusiveSet extend_spellings(const AbusiveSet& base,
                                    const SubstitutionRules& rules) {
  ExtendedAbusiveSet ext;
  for (const auto& [lang, words] : base.words) {
    auto& target = ext.words[lang];
    for (const auto& w : words) {
      for (auto& v : spelling_variants(w, rules)) {
        ext.provenance.emplace(v, w);
        target.insert(std::move(v));
      }
    }
  }
  // A base word always maps to itself even if another base generated it.
  for (const auto& [lang, words] : base.words) {
    for (const auto& w : words) ext.provenance[w] = w;
  }
  return ext;
}

std::optional<std::string> contains_abuse(std::string_view text,
                                          const ExtendedAbusiveSet& set,
                                          std::string_view language,
                                          MatchMode mode) {
  std::vector<const std::set<std::string, std::less<>>*> active;
  const auto lang_it = set.words.find(language);
  if (lang_it == set.words.end()) {
    for (const auto& [lang, words] : set.words) active.push_back(&words);
  } else {
    active.push_back(&lang_it->second);
    if (!language.empty()) {
      if (auto shared = set.words.find(std::string_view{}); shared != set.words.end()) {
        active.push_back(&shared->second);
      }
    }
  }
  auto member = [&](std::string_view candidate) {
    return std::any_of(active.begin(), active.end(),
                       [&](const auto* words) { return words->contains(candidate); });
  };

  if (mode == MatchMode::token) {
    for (auto token : detail::split_whitespace(text)) {
      if (member(token)) return std::string(token);
    }
    return std::nullopt;
  }

  std::size_t max_len = 0;
  for (const auto* words : active) {
    for (const auto& w : *words) max_len = std::max(max_len, w.size());
  }
  for (std::size_t start = 0; start < text.size(); ++start) {
    const std::size_t limit = std::min(max_len, text.size() - start);
    for (std::size_t len = 1; len <= limit; ++len) {
      const auto candidate = text.substr(start, len);
      if (member(candidate)) return std::string(candidate);
    }
  }
  return std::nullopt;
}

}  // namespace abuse
