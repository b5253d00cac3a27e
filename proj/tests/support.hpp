#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "abuse/corpus.hpp"

namespace testing {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("abuse-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_text(const std::filesystem::path& path,
                                        const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline abuse::Comment comment(std::string id, std::string text, std::string post,
                              std::optional<std::string> user = std::nullopt,
                              std::optional<int> label = std::nullopt,
                              std::string language = "hi") {
  abuse::Comment c;
  c.comment_id = std::move(id);
  c.raw_text = text;
  c.text = std::move(text);
  c.post_id = std::move(post);
  c.user_id = std::move(user);
  c.label = label;
  c.language = std::move(language);
  return c;
}

}  // namespace testing
