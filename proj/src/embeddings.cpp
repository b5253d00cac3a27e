#include "abuse/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "abuse/error.hpp"
#include "binary_io.hpp"
#include "text_util.hpp"

namespace abuse {

namespace {

constexpr char kMagic[4] = {'A', 'E', 'M', 'B'};
constexpr std::uint16_t kVersion = 1;
// Share of the positional component in a mock token row.
constexpr double kPositionWeight = 0.1;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<double> gaussian_vector(std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<double> v(dim);
  for (std::size_t k = 0; k < dim; k += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    v[k] = r * std::cos(theta);
    if (k + 1 < dim) v[k + 1] = r * std::sin(theta);
  }
  return v;
}

}  // namespace

TokenizedText tokenize_fixed(std::string_view text, std::size_t seq_len) {
  if (seq_len < 2) throw std::invalid_argument("seq_len must be at least 2");
  TokenizedText out;
  out.ids.reserve(seq_len);
  out.ids.push_back(kClsTokenId);
  for (auto token : detail::split_whitespace(text)) {
    if (out.ids.size() + 1 >= seq_len) break;
    const auto h = detail::fnv1a64(token);
    out.ids.push_back(3 + static_cast<std::uint32_t>(h % 0xFFFFFFF0ull));
  }
  out.ids.push_back(kSepTokenId);
  out.mask.assign(out.ids.size(), 1);
  out.ids.resize(seq_len, kPadTokenId);
  out.mask.resize(seq_len, 0);
  return out;
}

TextEmbedding mock_encode(const TokenizedText& tokens, std::size_t dim,
                          std::uint64_t seed) {
  if (tokens.ids.size() != tokens.mask.size()) {
    throw std::invalid_argument("mock_encode: ids and mask lengths differ");
  }
  if (dim == 0) throw std::invalid_argument("mock_encode: dim must be positive");
  TextEmbedding e;
  e.seq_len = tokens.ids.size();
  e.dim = dim;
  e.method = "mock";
  e.hidden.assign(e.seq_len * dim, 0.0);
  for (std::size_t pos = 0; pos < e.seq_len; ++pos) {
    if (!tokens.mask[pos]) continue;
    const auto token = gaussian_vector(mix(seed, tokens.ids[pos]), dim);
    const auto where = gaussian_vector(mix(~seed, 0xA5A5000000000000ull + pos), dim);
    double norm = 0.0;
    std::vector<double> row(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      row[k] = token[k] + kPositionWeight * where[k];
      norm += row[k] * row[k];
    }
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < dim; ++k) e.hidden[pos * dim + k] = row[k] / norm;
  }
  return e;
}

FlatEmbedding reshape_hidden(const TextEmbedding& embedding) {
  if (embedding.hidden.size() != embedding.seq_len * embedding.dim) {
    throw std::invalid_argument("reshape_hidden: inconsistent embedding shape");
  }
  return FlatEmbedding{embedding.hidden};
}

TextEmbedding unflatten(const FlatEmbedding& flat, std::size_t seq_len,
                        std::size_t dim) {
  if (flat.values.size() != seq_len * dim) {
    throw std::invalid_argument("unflatten: length is not seq_len * dim");
  }
  TextEmbedding e;
  e.seq_len = seq_len;
  e.dim = dim;
  e.hidden = flat.values;
  return e;
}

void save_embeddings(const std::filesystem::path& path, std::size_t seq_len,
                     std::size_t dim, const EmbeddingMap& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 4);
  detail::write_le<std::uint16_t>(out, kVersion);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(seq_len));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  detail::write_le<std::uint64_t>(out, records.size());
  for (const auto& [id, e] : records) {
    if (e.seq_len != seq_len || e.dim != dim || e.hidden.size() != seq_len * dim) {
      throw std::invalid_argument("save_embeddings: record '" + id +
                                  "' does not match the file shape");
    }
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    for (double v : e.hidden) detail::write_f32(out, static_cast<float>(v));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

EmbeddingMap load_embeddings(const std::filesystem::path& path,
                             std::size_t seq_len, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  detail::BinaryReader reader(in, path.string());

  char magic[4];
  reader.read_bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) {
    throw FormatError(path.string() + ": not an embedding file");
  }
  const auto version = reader.read_le<std::uint16_t>();
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
  }
  const auto l = reader.read_le<std::uint32_t>();
  const auto d = reader.read_le<std::uint32_t>();
  const auto count = reader.read_le<std::uint64_t>();
  if (l != seq_len || d != dim) {
    std::string first = "<none>";
    if (count > 0) {
      first.assign(reader.read_le<std::uint32_t>(), '\0');
      reader.read_bytes(first.data(), first.size());
    }
    throw FormatError(path.string() + ": record '" + first + "' has shape " +
                      std::to_string(l) + "x" +
                      std::to_string(d) + " does not match expected " +
                      std::to_string(seq_len) + "x" + std::to_string(dim));
  }

  EmbeddingMap records;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto id_len = reader.read_le<std::uint32_t>();
    std::string id(id_len, '\0');
    reader.read_bytes(id.data(), id_len);
    TextEmbedding e;
    e.seq_len = l;
    e.dim = d;
    e.method = path.stem().string();
    e.hidden.resize(static_cast<std::size_t>(l) * d);
    for (auto& v : e.hidden) {
      const float f = reader.read_f32();
      if (!std::isfinite(f)) {
        throw FormatError(path.string() + ": non-finite value in record '" + id + "'");
      }
      v = f;
    }
    records.emplace(std::move(id), std::move(e));
  }
  return records;
}

std::vector<std::string> missing_embeddings(const EmbeddingMap& records,
                                            const Dataset& dataset) {
  std::vector<std::string> missing;
  for (const auto& c : dataset.comments()) {
    if (!records.contains(c.comment_id)) missing.push_back(c.comment_id);
  }
  return missing;
}

}  // namespace abuse
