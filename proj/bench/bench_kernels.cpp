// Serial vs OpenMP timings for the dense kernels at the layer sizes of the
// full-size network.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "abuse/kernels.hpp"

using namespace abuse;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
  return d.count() / reps;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx\n", name, serial,
              parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  // Text layer: 768 x (seq_len * 768). About ten such buffers are live, so
  // the default seq_len 32 keeps memory near 1.5 GB.
  const std::size_t seq_len = argc > 1 ? std::stoul(argv[1]) : 32;
  const int reps = argc > 2 ? std::stoi(argv[2]) : 3;
  const std::size_t rows = 768, cols = seq_len * 768;

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Matrix a(rows, cols);
  for (auto& x : a.data) x = g(rng);
  std::vector<double> x(cols), u(rows), bias(rows, 0.1), y(rows), t(cols);
  for (auto& v : x) v = g(rng);
  for (auto& v : u) v = g(rng);

  std::printf("threads %d, W %zux%zu, %d reps\n", kernels::max_threads(), rows, cols, reps);
  report("matvec",
         time_ms([&] { kernels::serial::matvec(a, x, bias, y); }, reps),
         time_ms([&] { kernels::parallel::matvec(a, x, bias, y); }, reps));
  report("matvec_transposed",
         time_ms([&] { kernels::serial::matvec_transposed(a, u, t); }, reps),
         time_ms([&] { kernels::parallel::matvec_transposed(a, u, t); }, reps));
  Matrix gs(rows, cols), gp(rows, cols);
  report("add_outer",
         time_ms([&] { kernels::serial::add_outer(gs, u, x, 1e-3); }, reps),
         time_ms([&] { kernels::parallel::add_outer(gp, u, x, 1e-3); }, reps));

  std::vector<double> ps = a.data, pp = a.data, grads(a.size(), 0.01);
  std::vector<double> ms(a.size()), mp(a.size()), vs(a.size()), vp(a.size());
  const kernels::AdamCoefficients coef{1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001};
  report("adam_update",
         time_ms([&] { kernels::serial::adam_update(ps, grads, ms, vs, coef); }, reps),
         time_ms([&] { kernels::parallel::adam_update(pp, grads, mp, vp, coef); }, reps));

  std::vector<double> ys(rows), yp(rows);
  kernels::serial::matvec(a, x, bias, ys);
  kernels::parallel::matvec(a, x, bias, yp);
  std::printf("serial and parallel matvec %s\n", ys == yp ? "identical" : "DIFFER");
  return ys == yp ? 0 : 1;
}
