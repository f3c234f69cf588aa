// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "cdma/errors.hpp"
#include "cdma/linalg.hpp"

using namespace cdma;

namespace {

Mat random_symmetric(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

Mat reconstruct(const EigenDecomposition& e) {
  const std::size_t n = e.eigenvalues.size();
  Mat out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        s += e.eigenvectors(i, r) * e.eigenvalues[r] * e.eigenvectors(j, r);
      out(i, j) = s;
    }
  return out;
}

double max_abs_entry(const Mat& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("sym_eig diagonal input") {
  Mat a(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const EigenDecomposition e = sym_eig(a);
  CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  // axis-aligned up to sign
  CHECK(std::abs(e.eigenvectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(e.eigenvectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig 2x2 closed form") {
  // [[2,1],[1,2]]: eigenvalues 3 and 1 with eigenvectors along (1,1), (1,-1).
  Mat a(2, 2);
  a(0, 0) = a(1, 1) = 2.0;
  a(0, 1) = a(1, 0) = 1.0;
  const EigenDecomposition e = sym_eig(a);
  CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(e.eigenvectors(0, 0) * e.eigenvectors(1, 0)) ==
        doctest::Approx(inv_sqrt2 * inv_sqrt2).epsilon(1e-10));  // components equal magnitude
  CHECK(e.eigenvectors(0, 0) * e.eigenvectors(1, 0) > 0.0);      // same sign for lambda=3
  CHECK(e.eigenvectors(0, 1) * e.eigenvectors(1, 1) < 0.0);      // opposite sign for lambda=1
}

TEST_CASE("sym_eig identity reconstruction") {
  const Mat a = Mat::identity(5);
  const EigenDecomposition e = sym_eig(a);
  for (double l : e.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs_diff(reconstruct(e), a) < 1e-12);
}

TEST_CASE("sym_eig rejects asymmetric input") {
  Mat a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 1.0 + 1e-6;
  CHECK_THROWS_WITH_AS(sym_eig(a), doctest::Contains("NotSymmetric"), Error);
}

TEST_CASE("sym_eig invariants on 1000 random symmetric 7x7 matrices") {
  std::mt19937_64 rng(12345);
  double worst_orth = 0.0, worst_rec = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Mat a = random_symmetric(rng, 7, std::pow(10.0, (t % 7) - 3));
    const EigenDecomposition e = sym_eig(a);
    // descending order
    for (std::size_t i = 0; i + 1 < 7; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i + 1]);
    // orthonormality
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 7; ++j) {
        const double g = dot(e.eigenvectors.col(i), e.eigenvectors.col(j));
        worst_orth = std::max(worst_orth, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    worst_rec = std::max(worst_rec, max_abs_diff(reconstruct(e), a) /
                                        std::max(max_abs_entry(a), 1e-300));
  }
  CHECK(worst_orth <= 1e-9);
  CHECK(worst_rec <= 1e-8);
}

TEST_CASE("spd_solve identity and hand cases") {
  CHECK(spd_solve(Mat::identity(3), {1.0, 2.0, 3.0}) == Vec{1.0, 2.0, 3.0});

  Mat a(2, 2);
  a(0, 0) = a(1, 1) = 2.0;
  a(0, 1) = a(1, 0) = 1.0;
  const Vec x = spd_solve(a, {3.0, 3.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));

  Mat d(2, 2);
  d(0, 0) = d(1, 1) = 0.5;
  const Vec y = spd_solve(d, {1.0, 0.0});
  CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(y[1] == 0.0);
}

TEST_CASE("spd_solve rejects indefinite input") {
  Mat a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  CHECK_THROWS_WITH_AS(spd_solve(a, {1.0, 1.0}), doctest::Contains("NotPositiveDefinite"),
                       Error);
}

TEST_CASE("spd_solve residual bound up to condition 1e8") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 7;
    const EigenDecomposition basis = sym_eig(random_symmetric(rng, n));
    // spectrum log-spaced over the requested condition number
    const double cond = std::pow(10.0, 2 + (t % 7));
    Vec lam(n);
    for (std::size_t i = 0; i < n; ++i)
      lam[i] = std::pow(cond, -static_cast<double>(i) / (n - 1));
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
          s += basis.eigenvectors(i, r) * lam[r] * basis.eigenvectors(j, r);
        a(i, j) = s;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);  // exact symmetry
    Vec b(n);
    for (double& v : b) v = u(rng);
    const Vec x = spd_solve(a, b);
    Vec r = mat_vec(a, x);
    for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
    double a_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a_norm += a(i, j) * a(i, j);
    a_norm = std::sqrt(a_norm);
    CHECK(norm(r) <= 1e-10 * (a_norm * norm(x) + norm(b)));
  }
}

TEST_CASE("find_root_bisect known roots") {
  const double r = find_root_bisect([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK(find_root_bisect([](double x) { return x; }, -1.0, 1.0, 1e-12) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-11));
}

TEST_CASE("find_root_bisect requires a sign change") {
  CHECK_THROWS_WITH_AS(find_root_bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0, 1e-10),
                       doctest::Contains("NoSignChange"), Error);
}

TEST_CASE("find_root_bisect agrees with an independent grid scan") {
  auto f = [](double x) { return std::cos(3.0 * x) - 0.2 * x; };
  // fine-grid oracle on [0, 1]
  double lo = 0.0, hi = 1.0, grid_root = -1.0;
  const int cells = 1000000;
  double prev = f(lo);
  for (int i = 1; i <= cells; ++i) {
    const double x = lo + (hi - lo) * i / cells;
    const double fx = f(x);
    if ((prev > 0.0) != (fx > 0.0)) {
      grid_root = x;
      break;
    }
    prev = fx;
  }
  REQUIRE(grid_root > 0.0);
  const double r = find_root_bisect(f, 0.0, 1.0, 1e-10);
  CHECK(std::abs(r - grid_root) <= (hi - lo) / cells + 1e-10);
}

TEST_CASE("expand_bracket grows upward to a sign change") {
  const Bracket b =
      expand_bracket([](double x) { return x - 10.0; }, 0.0, 1.0, /*grow_hi=*/true);
  CHECK(b.lo <= 10.0);
  CHECK(b.hi >= 10.0);
}

TEST_CASE("expand_bracket brackets the target-SINR residual") {
  auto f = [](double x) { return std::exp(x) - 1.0 - 120.0 * x; };
  const Bracket b = expand_bracket(f, 1.0, 2.0, /*grow_hi=*/true);
  CHECK(b.lo <= 6.689);
  CHECK(b.hi >= 6.689);
  CHECK(f(b.lo) * f(b.hi) < 0.0);
}

TEST_CASE("expand_bracket gives up on sign-definite functions") {
  CHECK_THROWS_WITH_AS(
      expand_bracket([](double x) { return x * x + 1.0; }, 0.0, 1.0, true, true),
      doctest::Contains("BracketNotFound"), Error);
}

}  // TEST_SUITE
