#pragma once

// Dense-layer kernels. Each kernel has a serial reference implementation and
// an OpenMP version. Both compute every output element with the same
// summation order, so their results are bitwise identical; the parallel
// versions only split the outer loop across threads.

#include <cstddef>
#include <span>

#include "abuse/matrix.hpp"

namespace abuse::kernels {

/// Below this many multiply-adds the OpenMP kernels run on one thread.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

struct AdamCoefficients {
  double lr;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

namespace serial {

// y = A x + b  (b may be empty)
void matvec(const Matrix& a, std::span<const double> x,
            std::span<const double> bias, std::span<double> y);
// y = A^T x
void matvec_transposed(const Matrix& a, std::span<const double> x,
                       std::span<double> y);
// G += scale * u v^T
void add_outer(Matrix& g, std::span<const double> u, std::span<const double> v,
               double scale);
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> m, std::span<double> v,
                 const AdamCoefficients& c);

}  // namespace serial

namespace parallel {

void matvec(const Matrix& a, std::span<const double> x,
            std::span<const double> bias, std::span<double> y);
void matvec_transposed(const Matrix& a, std::span<const double> x,
                       std::span<double> y);
void add_outer(Matrix& g, std::span<const double> u, std::span<const double> v,
               double scale);
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> m, std::span<double> v,
                 const AdamCoefficients& c);

}  // namespace parallel

using parallel::adam_update;
using parallel::add_outer;
using parallel::matvec;
using parallel::matvec_transposed;

/// Number of threads the parallel kernels may use.
int max_threads();

}  // namespace abuse::kernels
