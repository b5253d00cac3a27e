#pragma once

// Little-endian binary encoding helpers for the embedding and checkpoint
// formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "abuse/error.hpp"

namespace abuse::detail {

template <typename UInt>
void write_le(std::ostream& out, UInt value) {
  char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes, sizeof(UInt));
}

inline void write_f32(std::ostream& out, float v) {
  write_le(out, std::bit_cast<std::uint32_t>(v));
}
inline void write_f64(std::ostream& out, double v) {
  write_le(out, std::bit_cast<std::uint64_t>(v));
}

/// Sequential reader that reports the byte offset of a truncation.
class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string what) : in_(in), what_(std::move(what)) {}

  void read_bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got != n) {
      throw FormatError(what_ + ": truncated at byte offset " +
                        std::to_string(offset_ + got));
    }
    offset_ += n;
  }

  template <typename UInt>
  UInt read_le() {
    unsigned char bytes[sizeof(UInt)];
    read_bytes(reinterpret_cast<char*>(bytes), sizeof(UInt));
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      value |= static_cast<UInt>(bytes[i]) << (8 * i);
    }
    return value;
  }

  float read_f32() { return std::bit_cast<float>(read_le<std::uint32_t>()); }
  double read_f64() { return std::bit_cast<double>(read_le<std::uint64_t>()); }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }
  std::uint64_t offset() const { return offset_; }
  const std::string& what() const { return what_; }

 private:
  std::istream& in_;
  std::string what_;
  std::uint64_t offset_ = 0;
};

}  // namespace abuse::detail
