#pragma once

// Social/text/joint feature-fusion classifier with hand-written forward and
// backward passes and an Adam optimiser.
//
//   social  s (M)  -> fc1 relu dropout -> S (D1) ---------+
//   text    v (N)  -> fc2 relu dropout -> V (D2) -> concat(V, S) (D3 = D2 + D1)
//                                                      -> fc3 relu dropout (D4)
//                                                      -> fc4 relu dropout (D4)
//                                                      -> dense(1) -> sigmoid

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "abuse/matrix.hpp"

namespace abuse {

struct NetworkDims {
  std::size_t social_in = 5;        // M
  std::size_t social_hidden = 16;   // D1
  std::size_t text_in = 128 * 768;  // N = l * D
  std::size_t text_hidden = 768;    // D2
  std::size_t joint_hidden = 100;   // D4
  double dropout_rate = 0.2;

  std::size_t joint_dim() const { return text_hidden + social_hidden; }  // D3
  /// Throws std::invalid_argument for zero dims or a rate outside [0,1).
  void validate() const;

  /// Full-size layer widths for a sequence length and token width.
  static NetworkDims full_size(std::size_t seq_len = 128, std::size_t token_dim = 768);
  bool operator==(const NetworkDims&) const = default;
};

struct ModelParams {
  NetworkDims dims;
  Matrix w1;  // D1 x M
  std::vector<double> b1;
  Matrix w2;  // D2 x N
  std::vector<double> b2;
  Matrix w3;  // D4 x D3
  std::vector<double> b3;
  Matrix w4;  // D4 x D4
  std::vector<double> b4;
  Matrix w5;  // 1 x D4
  std::vector<double> b5;
  // Changes whenever the values are rewritten by init or an optimiser step;
  // caches remember it to detect staleness.
  std::uint64_t generation = 0;

  static constexpr std::array<std::string_view, 10> kBlockNames = {
      "w1", "b1", "w2", "b2", "w3", "b3", "w4", "b4", "w5", "b5"};

  static ModelParams zeros(const NetworkDims& dims);
  std::array<std::span<double>, 10> blocks();
  std::array<std::span<const double>, 10> blocks() const;
  std::size_t parameter_count() const;
  bool same_values(const ModelParams& other) const;
};

/// Uniform(-b, b) weights with b = sqrt(6 / (fan_in + fan_out)); zero biases.
ModelParams init_params(const NetworkDims& dims, std::uint64_t seed);

/// Activations and dropout masks of one forward pass, consumed by backward.
/// Holds a view of the text input, which must outlive the cache.
struct ForwardCache {
  bool valid = false;
  bool train_mode = false;
  std::uint64_t generation = 0;
  std::span<const double> text;
  std::vector<double> social;
  std::vector<double> z1, a1, mask1;
  std::vector<double> z2, a2, mask2;
  std::vector<double> joint;
  std::vector<double> z3, a3, mask3;
  std::vector<double> z4, a4, mask4;
  double z5 = 0.0;
  double probability = 0.5;
};

/// Returns the abusive-class probability. In train mode with a positive
/// dropout rate `dropout_rng` must be supplied. Throws std::invalid_argument
/// on input dimension mismatch.
double forward(const ModelParams& params, std::span<const double> text,
               std::span<const double> social, bool train_mode,
               std::mt19937_64* dropout_rng, ForwardCache& cache);

/// Mean of (L - 1) log(1 - p) - L log p with p clipped to [1e-7, 1 - 1e-7].
double bce_loss(std::span<const double> probabilities, std::span<const int> labels);

/// grads += scale * dLoss/dParams for one sample. Throws StateError when the
/// cache is empty, from an eval pass, or from other parameter values.
void accumulate_gradients(const ModelParams& params, const ForwardCache& cache,
                          int label, double scale, ModelParams& grads);
ModelParams backward(const ModelParams& params, const ForwardCache& cache, int label);

struct TrainConfig {
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  double threshold = 0.5;
  std::uint64_t seed = 0;         // shuffling and dropout
  std::uint64_t init_offset = 0;  // weights use seed + init_offset
  double alpha = 0.47;

  void validate() const;
};

struct AdamState {
  ModelParams m;
  ModelParams v;

  static AdamState zeros(const NetworkDims& dims);
};

/// One bias-corrected Adam update at step t >= 1.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& moments,
               std::uint64_t t, const TrainConfig& config);

/// Row-aligned training/evaluation inputs.
struct FeatureTable {
  Matrix text;    // rows x N
  Matrix social;  // rows x M
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

struct TrainResult {
  ModelParams params;
  std::vector<double> epoch_losses;
};

/// Seeded mini-batch Adam training over shuffled epochs. Throws
/// DivergenceError on a non-finite loss.
TrainResult train(const FeatureTable& data, const NetworkDims& dims,
                  const TrainConfig& config,
                  const std::function<void(std::size_t, double)>& on_epoch = {});

struct Prediction {
  double probability = 0.0;
  int label = 0;
};

/// Eval-mode forward; label 1 iff probability >= threshold.
Prediction predict(const ModelParams& params, std::span<const double> text,
                   std::span<const double> social, double threshold);
std::vector<Prediction> predict_batch(const ModelParams& params,
                                      const FeatureTable& data, double threshold);

/// "AMDL", u16 version, u32 M, D1, N, D2, D4, f64 dropout, then every
/// parameter block as little-endian float64 in w1, b1, ..., w5, b5 order.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

void write_loss_history(const std::filesystem::path& path,
                        std::span<const double> epoch_losses);

}  // namespace abuse
