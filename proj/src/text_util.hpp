#pragma once

// Internal string and text-file helpers shared by the modules.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abuse::detail {

bool is_ascii_space(char c);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delim);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
// Runs of ASCII whitespace become one space; leading/trailing removed.
std::string collapse_whitespace(std::string_view s);

// Word list with optional `#lang:<tag>` section headers. Words before the
// first header are filed under the empty tag. Other `#` lines are comments.
// Throws ConfigError when the file cannot be read.
std::map<std::string, std::vector<std::string>> read_sectioned_list(
    const std::filesystem::path& path);

// UTF-8 lines `key<TAB>value`; blank and `#` lines skipped.
// Throws ConfigError when unreadable or a line lacks the tab.
std::vector<std::pair<std::string, std::string>> read_two_column(
    const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);  // IoError

std::uint64_t fnv1a64(std::string_view s);

}  // namespace abuse::detail
