#include <doctest.h>

#include <random>

#include "abuse/kernels.hpp"

using namespace abuse;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (auto& x : m.data) x = g(rng);
  return m;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("matvec reference values") {
  Matrix a(2, 3);
  a.data = {1, 2, 3, 4, 5, 6};
  const std::vector<double> x{1, 0, -1};
  const std::vector<double> b{0.5, -0.5};
  std::vector<double> y(2);
  kernels::serial::matvec(a, x, b, y);
  CHECK(y == std::vector<double>{-1.5, -2.5});
  kernels::serial::matvec(a, x, {}, y);
  CHECK(y == std::vector<double>{-2, -2});

  std::vector<double> t(3);
  kernels::serial::matvec_transposed(a, std::vector<double>{1, 1}, t);
  CHECK(t == std::vector<double>{5, 7, 9});

  Matrix g(2, 3);
  kernels::serial::add_outer(g, std::vector<double>{1, 2}, x, 0.5);
  CHECK(g.data == std::vector<double>{0.5, 0, -0.5, 1, 0, -1});
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  std::mt19937_64 rng(42);
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{3, 5}, {64, 1024}, {257, 300}}) {
    const Matrix a = random_matrix(r, c, rng);
    const auto x = random_vector(c, rng);
    const auto b = random_vector(r, rng);
    const auto u = random_vector(r, rng);

    std::vector<double> ys(r), yp(r);
    kernels::serial::matvec(a, x, b, ys);
    kernels::parallel::matvec(a, x, b, yp);
    CHECK(ys == yp);

    std::vector<double> ts(c), tp(c);
    kernels::serial::matvec_transposed(a, u, ts);
    kernels::parallel::matvec_transposed(a, u, tp);
    CHECK(ts == tp);

    Matrix gs = a, gp = a;
    kernels::serial::add_outer(gs, u, x, 0.3);
    kernels::parallel::add_outer(gp, u, x, 0.3);
    CHECK(gs == gp);

    auto ps = a.data, pp = a.data;
    const auto grads = random_matrix(r, c, rng).data;
    std::vector<double> ms(ps.size(), 0.1), mp = ms, vs(ps.size(), 0.2), vp = vs;
    const kernels::AdamCoefficients coef{1e-3, 0.9, 0.999, 1e-8, 1 - 0.9, 1 - 0.999};
    kernels::serial::adam_update(ps, grads, ms, vs, coef);
    kernels::parallel::adam_update(pp, grads, mp, vp, coef);
    CHECK(ps == pp);
    CHECK(ms == mp);
    CHECK(vs == vp);
  }
  CHECK(kernels::max_threads() >= 1);
}
