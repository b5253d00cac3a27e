#include "abuse/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abuse::kernels {

namespace {

void check_matvec(const Matrix& a, std::span<const double> x,
                  std::span<const double> bias, std::span<double> y) {
  if (x.size() != a.cols || y.size() != a.rows ||
      (!bias.empty() && bias.size() != a.rows)) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
}

void check_transposed(const Matrix& a, std::span<const double> x,
                      std::span<double> y) {
  if (x.size() != a.rows || y.size() != a.cols) {
    throw std::invalid_argument("matvec_transposed: dimension mismatch");
  }
}

void check_outer(const Matrix& g, std::span<const double> u,
                 std::span<const double> v) {
  if (u.size() != g.rows || v.size() != g.cols) {
    throw std::invalid_argument("add_outer: dimension mismatch");
  }
}

void check_adam(std::span<double> p, std::span<const double> g,
                std::span<double> m, std::span<double> v) {
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw std::invalid_argument("adam_update: size mismatch");
  }
}

inline double row_dot(const double* row, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
  return acc;
}

inline void adam_element(double& p, double g, double& m, double& v,
                         const AdamCoefficients& c) {
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g * g;
  const double m_hat = m / c.bias_correction1;
  const double v_hat = v / c.bias_correction2;
  p -= c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
}

}  // namespace

namespace serial {

void matvec(const Matrix& a, std::span<const double> x,
            std::span<const double> bias, std::span<double> y) {
  check_matvec(a, x, bias, y);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double dot = row_dot(a.data.data() + i * a.cols, x.data(), a.cols);
    y[i] = bias.empty() ? dot : dot + bias[i];
  }
}

void matvec_transposed(const Matrix& a, std::span<const double> x,
                       std::span<double> y) {
  check_transposed(a, x, y);
  for (std::size_t j = 0; j < a.cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* row = a.data.data() + i * a.cols;
    for (std::size_t j = 0; j < a.cols; ++j) y[j] += row[j] * x[i];
  }
}

void add_outer(Matrix& g, std::span<const double> u, std::span<const double> v,
               double scale) {
  check_outer(g, u, v);
  for (std::size_t i = 0; i < g.rows; ++i) {
    const double ui = scale * u[i];
    if (ui == 0.0) continue;
    double* row = g.data.data() + i * g.cols;
    for (std::size_t j = 0; j < g.cols; ++j) row[j] += ui * v[j];
  }
}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> m, std::span<double> v,
                 const AdamCoefficients& c) {
  check_adam(params, grads, m, v);
  for (std::size_t k = 0; k < params.size(); ++k) {
    adam_element(params[k], grads[k], m[k], v[k], c);
  }
}

}  // namespace serial

namespace parallel {

void matvec(const Matrix& a, std::span<const double> x,
            std::span<const double> bias, std::span<double> y) {
  check_matvec(a, x, bias, y);
  const auto rows = static_cast<std::ptrdiff_t>(a.rows);
  const bool wide = a.rows * a.cols >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double dot = row_dot(a.data.data() + i * a.cols, x.data(), a.cols);
    y[i] = bias.empty() ? dot : dot + bias[i];
  }
}

void matvec_transposed(const Matrix& a, std::span<const double> x,
                       std::span<double> y) {
  check_transposed(a, x, y);
  // Columns are split into blocks; inside a block rows are visited in
  // ascending order, matching the serial accumulation order per column.
  constexpr std::size_t kBlock = 256;
  const auto blocks =
      static_cast<std::ptrdiff_t>((a.cols + kBlock - 1) / kBlock);
  const bool wide = a.rows * a.cols >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(a.cols, begin + kBlock);
    for (std::size_t j = begin; j < end; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
      const double* row = a.data.data() + i * a.cols;
      const double xi = x[i];
      for (std::size_t j = begin; j < end; ++j) y[j] += row[j] * xi;
    }
  }
}

void add_outer(Matrix& g, std::span<const double> u, std::span<const double> v,
               double scale) {
  check_outer(g, u, v);
  const auto rows = static_cast<std::ptrdiff_t>(g.rows);
  const bool wide = g.rows * g.cols >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double ui = scale * u[i];
    if (ui == 0.0) continue;
    double* row = g.data.data() + i * g.cols;
    for (std::size_t j = 0; j < g.cols; ++j) row[j] += ui * v[j];
  }
}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> m, std::span<double> v,
                 const AdamCoefficients& c) {
  check_adam(params, grads, m, v);
  const auto n = static_cast<std::ptrdiff_t>(params.size());
  const bool wide = params.size() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    adam_element(params[k], grads[k], m[k], v[k], c);
  }
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace abuse::kernels
