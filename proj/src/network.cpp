#include "abuse/network.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>

#include "abuse/error.hpp"
#include "abuse/kernels.hpp"
#include "binary_io.hpp"

namespace abuse {

namespace {

constexpr char kMagic[4] = {'A', 'M', 'D', 'L'};
constexpr std::uint16_t kVersion = 1;
constexpr double kProbabilityClip = 1e-7;

std::uint64_t next_generation() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// relu followed by (inverted) dropout; mask entries are 0 or 1/(1-rate).
void activate(std::span<const double> z, double rate, bool train_mode,
              std::mt19937_64* rng, std::vector<double>& mask,
              std::vector<double>& out) {
  mask.assign(z.size(), 1.0);
  out.resize(z.size());
  if (train_mode && rate > 0.0) {
    const double keep_scale = 1.0 / (1.0 - rate);
    for (auto& m : mask) m = unit_uniform(*rng) < rate ? 0.0 : keep_scale;
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    // NaN passes through so a corrupted input surfaces as a non-finite loss.
    out[i] = (z[i] > 0.0 || std::isnan(z[i]) ? z[i] : 0.0) * mask[i];
  }
}

// delta = upstream * mask * relu'(z)
void relu_backward(std::span<const double> upstream, std::span<const double> z,
                   std::span<const double> mask, std::vector<double>& delta) {
  delta.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    delta[i] = z[i] > 0.0 ? upstream[i] * mask[i] : 0.0;
  }
}

void add_scaled(std::span<double> dst, std::span<const double> src, double scale) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

void fill_uniform(Matrix& w, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
  for (auto& x : w.data) x = (2.0 * unit_uniform(rng) - 1.0) * bound;
}

}  // namespace

void NetworkDims::validate() const {
  if (social_in == 0 || social_hidden == 0 || text_in == 0 || text_hidden == 0 ||
      joint_hidden == 0) {
    throw std::invalid_argument("network dims must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("dropout rate must lie in [0,1)");
  }
}

NetworkDims NetworkDims::full_size(std::size_t seq_len, std::size_t token_dim) {
  NetworkDims d;
  d.text_in = seq_len * token_dim;
  return d;
}

ModelParams ModelParams::zeros(const NetworkDims& dims) {
  dims.validate();
  ModelParams p;
  p.dims = dims;
  p.w1 = Matrix(dims.social_hidden, dims.social_in);
  p.b1.assign(dims.social_hidden, 0.0);
  p.w2 = Matrix(dims.text_hidden, dims.text_in);
  p.b2.assign(dims.text_hidden, 0.0);
  p.w3 = Matrix(dims.joint_hidden, dims.joint_dim());
  p.b3.assign(dims.joint_hidden, 0.0);
  p.w4 = Matrix(dims.joint_hidden, dims.joint_hidden);
  p.b4.assign(dims.joint_hidden, 0.0);
  p.w5 = Matrix(1, dims.joint_hidden);
  p.b5.assign(1, 0.0);
  p.generation = next_generation();
  return p;
}

std::array<std::span<double>, 10> ModelParams::blocks() {
  return {w1.data, b1, w2.data, b2, w3.data, b3, w4.data, b4, w5.data, b5};
}

std::array<std::span<const double>, 10> ModelParams::blocks() const {
  return {w1.data, b1, w2.data, b2, w3.data, b3, w4.data, b4, w5.data, b5};
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks()) n += b.size();
  return n;
}

bool ModelParams::same_values(const ModelParams& other) const {
  if (!(dims == other.dims)) return false;
  const auto a = blocks();
  const auto b = other.blocks();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::equal(a[k].begin(), a[k].end(), b[k].begin(), b[k].end())) return false;
  }
  return true;
}

ModelParams init_params(const NetworkDims& dims, std::uint64_t seed) {
  ModelParams p = ModelParams::zeros(dims);
  std::mt19937_64 rng(seed);
  for (Matrix* w : {&p.w1, &p.w2, &p.w3, &p.w4, &p.w5}) fill_uniform(*w, rng);
  return p;
}

double forward(const ModelParams& params, std::span<const double> text,
               std::span<const double> social, bool train_mode,
               std::mt19937_64* dropout_rng, ForwardCache& cache) {
  const NetworkDims& d = params.dims;
  if (text.size() != d.text_in || social.size() != d.social_in) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  const bool dropout = train_mode && d.dropout_rate > 0.0;
  if (dropout && dropout_rng == nullptr) {
    throw std::invalid_argument("forward: train mode needs a dropout generator");
  }

  cache.valid = false;
  cache.train_mode = train_mode;
  cache.generation = params.generation;
  cache.text = text;
  cache.social.assign(social.begin(), social.end());

  // SFL, then TFL; masks are drawn in this order.
  cache.z1.resize(d.social_hidden);
  kernels::matvec(params.w1, social, params.b1, cache.z1);
  activate(cache.z1, d.dropout_rate, train_mode, dropout_rng, cache.mask1, cache.a1);

  cache.z2.resize(d.text_hidden);
  kernels::matvec(params.w2, text, params.b2, cache.z2);
  activate(cache.z2, d.dropout_rate, train_mode, dropout_rng, cache.mask2, cache.a2);

  // Joint vector: text block [0, D2), social block [D2, D3).
  cache.joint.resize(d.joint_dim());
  std::copy(cache.a2.begin(), cache.a2.end(), cache.joint.begin());
  std::copy(cache.a1.begin(), cache.a1.end(),
            cache.joint.begin() + static_cast<std::ptrdiff_t>(d.text_hidden));

  cache.z3.resize(d.joint_hidden);
  kernels::matvec(params.w3, cache.joint, params.b3, cache.z3);
  activate(cache.z3, d.dropout_rate, train_mode, dropout_rng, cache.mask3, cache.a3);

  cache.z4.resize(d.joint_hidden);
  kernels::matvec(params.w4, cache.a3, params.b4, cache.z4);
  activate(cache.z4, d.dropout_rate, train_mode, dropout_rng, cache.mask4, cache.a4);

  double z5 = params.b5[0];
  for (std::size_t k = 0; k < d.joint_hidden; ++k) z5 += params.w5(0, k) * cache.a4[k];
  cache.z5 = z5;
  cache.probability = sigmoid(z5);
  cache.valid = true;
  return cache.probability;
}

double bce_loss(std::span<const double> probabilities, std::span<const int> labels) {
  if (probabilities.empty()) throw std::invalid_argument("bce_loss: empty batch");
  if (probabilities.size() != labels.size()) {
    throw std::invalid_argument("bce_loss: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = std::clamp(probabilities[i], kProbabilityClip, 1.0 - kProbabilityClip);
    const double l = labels[i];
    total += (l - 1.0) * std::log(1.0 - p) - l * std::log(p);
  }
  return total / static_cast<double>(probabilities.size());
}

void accumulate_gradients(const ModelParams& params, const ForwardCache& cache,
                          int label, double scale, ModelParams& grads) {
  if (!cache.valid) throw StateError("backward: no forward pass cached");
  if (!cache.train_mode) throw StateError("backward: cache is from an eval pass");
  if (cache.generation != params.generation) {
    throw StateError("backward: cache is stale (parameters changed)");
  }
  if (!(grads.dims == params.dims)) {
    throw std::invalid_argument("backward: gradient shape mismatch");
  }
  const NetworkDims& d = params.dims;

  // dLoss/dz5 for sigmoid + cross entropy.
  const double delta5 = cache.probability - static_cast<double>(label);
  kernels::add_outer(grads.w5, std::span<const double>(&delta5, 1), cache.a4, scale);
  grads.b5[0] += scale * delta5;

  std::vector<double> upstream(d.joint_hidden);
  for (std::size_t k = 0; k < d.joint_hidden; ++k) upstream[k] = params.w5(0, k) * delta5;
  std::vector<double> delta4;
  relu_backward(upstream, cache.z4, cache.mask4, delta4);
  kernels::add_outer(grads.w4, delta4, cache.a3, scale);
  add_scaled(grads.b4, delta4, scale);

  kernels::matvec_transposed(params.w4, delta4, upstream);
  std::vector<double> delta3;
  relu_backward(upstream, cache.z3, cache.mask3, delta3);
  kernels::add_outer(grads.w3, delta3, cache.joint, scale);
  add_scaled(grads.b3, delta3, scale);

  std::vector<double> joint_grad(d.joint_dim());
  kernels::matvec_transposed(params.w3, delta3, joint_grad);
  const std::span<const double> text_grad(joint_grad.data(), d.text_hidden);
  const std::span<const double> social_grad(joint_grad.data() + d.text_hidden,
                                            d.social_hidden);

  std::vector<double> delta2;
  relu_backward(text_grad, cache.z2, cache.mask2, delta2);
  kernels::add_outer(grads.w2, delta2, cache.text, scale);
  add_scaled(grads.b2, delta2, scale);

  std::vector<double> delta1;
  relu_backward(social_grad, cache.z1, cache.mask1, delta1);
  kernels::add_outer(grads.w1, delta1, cache.social, scale);
  add_scaled(grads.b1, delta1, scale);
}

ModelParams backward(const ModelParams& params, const ForwardCache& cache, int label) {
  ModelParams grads = ModelParams::zeros(params.dims);
  accumulate_gradients(params, cache, label, 1.0, grads);
  return grads;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) || !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must lie in (0,1)");
  }
  if (!(adam_epsilon > 0.0)) throw std::invalid_argument("Adam epsilon must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0,1)");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
}

AdamState AdamState::zeros(const NetworkDims& dims) {
  return {ModelParams::zeros(dims), ModelParams::zeros(dims)};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& moments,
               std::uint64_t t, const TrainConfig& config) {
  if (t == 0) throw std::invalid_argument("adam_step: step must be >= 1");
  if (!(grads.dims == params.dims) || !(moments.m.dims == params.dims) ||
      !(moments.v.dims == params.dims)) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  const double td = static_cast<double>(t);
  const kernels::AdamCoefficients c{config.learning_rate,
                                    config.adam_beta1,
                                    config.adam_beta2,
                                    config.adam_epsilon,
                                    1.0 - std::pow(config.adam_beta1, td),
                                    1.0 - std::pow(config.adam_beta2, td)};
  auto p = params.blocks();
  const auto g = grads.blocks();
  auto m = moments.m.blocks();
  auto v = moments.v.blocks();
  for (std::size_t k = 0; k < p.size(); ++k) kernels::adam_update(p[k], g[k], m[k], v[k], c);
  params.generation = next_generation();
}

TrainResult train(const FeatureTable& data, const NetworkDims& dims,
                  const TrainConfig& config,
                  const std::function<void(std::size_t, double)>& on_epoch) {
  config.validate();
  dims.validate();
  if (data.size() == 0) throw std::invalid_argument("train: no training data");
  if (data.text.rows != data.size() || data.social.rows != data.size() ||
      data.text.cols != dims.text_in || data.social.cols != dims.social_in) {
    throw std::invalid_argument("train: feature table does not match network dims");
  }

  TrainResult result{init_params(dims, config.seed + config.init_offset), {}};
  ModelParams& params = result.params;
  AdamState moments = AdamState::zeros(dims);
  ModelParams grads = ModelParams::zeros(dims);
  std::mt19937_64 shuffle_rng(config.seed ^ 0x5DEECE66Dull);
  std::mt19937_64 dropout_rng(config.seed ^ 0x2545F4914F6CDD1Dull);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  ForwardCache cache;
  std::uint64_t step = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto block : grads.blocks()) std::fill(block.begin(), block.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t row = order[k];
        const int label = data.labels[row];
        const double p = forward(params, data.text.row(row), data.social.row(row), true,
                                 &dropout_rng, cache);
        loss_sum += bce_loss(std::span<const double>(&p, 1), std::span<const int>(&label, 1));
        accumulate_gradients(params, cache, label, scale, grads);
      }
      adam_step(params, grads, moments, ++step, config);
    }
    const double mean_loss = loss_sum / static_cast<double>(data.size());
    if (!std::isfinite(mean_loss)) {
      throw DivergenceError(static_cast<int>(epoch + 1),
                            "training diverged in epoch " + std::to_string(epoch + 1));
    }
    result.epoch_losses.push_back(mean_loss);
    if (on_epoch) on_epoch(epoch + 1, mean_loss);
  }
  return result;
}

Prediction predict(const ModelParams& params, std::span<const double> text,
                   std::span<const double> social, double threshold) {
  ForwardCache cache;
  const double p = forward(params, text, social, false, nullptr, cache);
  return {p, p >= threshold ? 1 : 0};
}

std::vector<Prediction> predict_batch(const ModelParams& params,
                                      const FeatureTable& data, double threshold) {
  std::vector<Prediction> out(data.text.rows);
  const auto n = static_cast<std::ptrdiff_t>(data.text.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = predict(params, data.text.row(i), data.social.row(i), threshold);
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const NetworkDims& d = params.dims;
  out.write(kMagic, 4);
  detail::write_le<std::uint16_t>(out, kVersion);
  for (std::size_t v : {d.social_in, d.social_hidden, d.text_in, d.text_hidden, d.joint_hidden}) {
    detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(v));
  }
  detail::write_f64(out, d.dropout_rate);
  for (const auto& block : params.blocks()) {
    for (double x : block) detail::write_f64(out, x);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  detail::BinaryReader reader(in, path.string());
  char magic[4];
  reader.read_bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) {
    throw FormatError(path.string() + ": not a model checkpoint");
  }
  const auto version = reader.read_le<std::uint16_t>();
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
  }
  NetworkDims d;
  d.social_in = reader.read_le<std::uint32_t>();
  d.social_hidden = reader.read_le<std::uint32_t>();
  d.text_in = reader.read_le<std::uint32_t>();
  d.text_hidden = reader.read_le<std::uint32_t>();
  d.joint_hidden = reader.read_le<std::uint32_t>();
  d.dropout_rate = reader.read_f64();
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  ModelParams p = ModelParams::zeros(d);
  for (auto block : p.blocks()) {
    for (double& x : block) {
      x = reader.read_f64();
      if (!std::isfinite(x)) throw FormatError(path.string() + ": non-finite parameter");
    }
  }
  if (!reader.at_end()) throw FormatError(path.string() + ": trailing bytes");
  return p;
}

void write_loss_history(const std::filesystem::path& path,
                        std::span<const double> epoch_losses) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "epoch,loss\n" << std::setprecision(17);
  for (std::size_t i = 0; i < epoch_losses.size(); ++i) {
    out << (i + 1) << ',' << epoch_losses[i] << '\n';
  }
}

}  // namespace abuse
