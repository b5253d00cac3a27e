#include "abuse/augmentation.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

namespace abuse {

namespace {

void warn(std::vector<std::string>* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

std::string prefixed(const std::string& word, const std::string& text) {
  return text.empty() ? word : word + " " + text;
}

}  // namespace

Dataset augment(const Dataset& train, const ExtendedAbusiveSet& ext_set,
                std::uint64_t seed, std::vector<std::string>* warnings) {
  std::vector<Comment> out = train.comments();
  std::unordered_set<std::string> ids;
  for (const auto& c : out) ids.insert(c.comment_id);

  std::set<std::string> train_languages;
  for (const auto& c : train.comments()) train_languages.insert(c.language);
  for (const auto& lang : train_languages) {
    auto it = ext_set.words.find(lang);
    const bool shared = ext_set.words.contains("") && !ext_set.words.at("").empty();
    if ((it == ext_set.words.end() || it->second.empty()) && !shared) {
      warn(warnings, "no abusive words for language '" + lang + "'; skipped");
    }
  }

  std::mt19937_64 rng(seed);
  std::size_t serial = 0;
  for (const auto& [lang, words] : ext_set.words) {
    if (words.empty()) continue;
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const Comment& c = train[i];
      if (c.synthetic || c.label != 0) continue;
      if (!lang.empty() && c.language != lang) continue;
      pool.push_back(i);
    }
    if (pool.empty()) {
      if (train_languages.contains(lang) || lang.empty()) {
        warn(warnings, "no non-abusive comments for language '" + lang +
                           "'; skipped");
      }
      continue;
    }
    std::shuffle(pool.begin(), pool.end(), rng);

    std::vector<std::size_t> chosen;
    if (pool.size() >= words.size()) {
      chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(words.size()));
    } else {
      warn(warnings, "language '" + lang + "': " + std::to_string(pool.size()) +
                         " non-abusive comments for " + std::to_string(words.size()) +
                         " words; sampling with replacement");
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (std::size_t k = 0; k < words.size(); ++k) chosen.push_back(pool[pick(rng)]);
    }

    std::size_t k = 0;
    for (const auto& word : words) {
      const Comment& source = train[chosen[k++]];
      Comment synthetic = source;
      synthetic.raw_text = prefixed(word, source.raw_text);
      synthetic.text = prefixed(word, source.text);
      synthetic.label = 1;
      synthetic.synthetic = true;
      std::string id;
      do {
        id = source.comment_id + "~aug" + std::to_string(++serial);
      } while (ids.contains(id));
      ids.insert(id);
      synthetic.comment_id = std::move(id);
      out.push_back(std::move(synthetic));
    }
  }
  return Dataset(std::move(out));
}

}  // namespace abuse
