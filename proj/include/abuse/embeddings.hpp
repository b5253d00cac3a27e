#pragma once

// Text embeddings as last-hidden-state matrices: fixed-length tokenisation,
// a deterministic mock encoder, the binary embedding file format, and
// row-major flattening into the text feature vector.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abuse/corpus.hpp"

namespace abuse {

inline constexpr std::uint32_t kPadTokenId = 0;
inline constexpr std::uint32_t kClsTokenId = 1;
inline constexpr std::uint32_t kSepTokenId = 2;
inline constexpr std::size_t kDefaultTokenDim = 768;

struct TokenizedText {
  std::vector<std::uint32_t> ids;
  std::vector<std::uint8_t> mask;  // 1 = real token (markers included)
};

/// Whitespace tokens hashed to ids, wrapped in [CLS] ... [SEP], truncated
/// (keeping [SEP]) or padded to seq_len. Throws std::invalid_argument when
/// seq_len < 2.
TokenizedText tokenize_fixed(std::string_view text, std::size_t seq_len);

struct TextEmbedding {
  std::size_t seq_len = 0;
  std::size_t dim = 0;
  std::string method;
  std::vector<double> hidden;  // seq_len x dim, row-major

  double at(std::size_t row, std::size_t col) const { return hidden[row * dim + col]; }
  bool operator==(const TextEmbedding&) const = default;
};

/// Each real-token row is a unit vector drawn from (token id, position,
/// seed); padding rows are zero.
TextEmbedding mock_encode(const TokenizedText& tokens, std::size_t dim,
                          std::uint64_t seed);

struct FlatEmbedding {
  std::vector<double> values;
};

/// Row-major flattening: H(i, j) -> values[i * dim + j].
FlatEmbedding reshape_hidden(const TextEmbedding& embedding);
TextEmbedding unflatten(const FlatEmbedding& flat, std::size_t seq_len,
                        std::size_t dim);

using EmbeddingMap = std::map<std::string, TextEmbedding>;

/// Layout: "AEMB", u16 version, u32 l, u32 D, u64 count, then per record a
/// u32-length-prefixed UTF-8 comment id and l*D float32 values, all
/// little-endian. Values are stored as float32.
void save_embeddings(const std::filesystem::path& path, std::size_t seq_len,
                     std::size_t dim, const EmbeddingMap& records);

/// Throws FormatError on bad magic/version, a shape that differs from
/// (seq_len, dim), or truncation (with byte offset); IoError if unreadable.
EmbeddingMap load_embeddings(const std::filesystem::path& path,
                             std::size_t seq_len, std::size_t dim);

/// Ids of dataset comments without a record.
std::vector<std::string> missing_embeddings(const EmbeddingMap& records,
                                            const Dataset& dataset);

}  // namespace abuse
