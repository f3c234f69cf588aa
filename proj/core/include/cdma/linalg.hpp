// SPDX-License-Identifier: Apache-2.0
//
// Small dense symmetric linear algebra and scalar root finding. Everything in
// the simulator lives in signal space (N = processing gain, N <= a few dozen),
// so the kernels here favor simplicity and determinism over asymptotics.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cdma {

using Vec = std::vector<double>;

/// Dense row-major matrix.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Mat identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return a_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Vec col(std::size_t c) const;
  void set_col(std::size_t c, const Vec& v);

  const std::vector<double>& data() const noexcept { return a_; }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
double max_abs(const Vec& x);

Mat transpose(const Mat& a);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& a, const Vec& x);

/// Eigendecomposition of a symmetric matrix: A = U diag(λ) Uᵀ with eigenvalues
/// sorted in descending order and orthonormal eigenvector columns.
struct EigenDecomposition {
  Vec eigenvalues;
  Mat eigenvectors;
};

/// Cyclic Jacobi eigensolver. The input must be symmetric within 1e-9
/// (absolute); throws NotSymmetric otherwise, NoConvergence if the sweep cap
/// is ever exceeded (does not happen for the matrix sizes used here).
EigenDecomposition sym_eig(const Mat& a);

/// Cholesky factor of a symmetric positive definite matrix (lower triangular,
/// A = L Lᵀ). Factor once, solve many right-hand sides.
class CholeskyFactor {
 public:
  static CholeskyFactor factor(const Mat& a);  // throws NotPositiveDefinite
  Vec solve(const Vec& b) const;

 private:
  explicit CholeskyFactor(Mat l) : l_(std::move(l)) {}
  Mat l_;
};

/// One-shot SPD solve, x = A⁻¹ b.
Vec spd_solve(const Mat& a, const Vec& b);

/// Bisection on [lo, hi]; requires a sign change (throws NoSignChange).
/// Stops when the bracket width falls below `tol` or the midpoint is no
/// longer representable between the endpoints.
double find_root_bisect(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-10);

struct Bracket {
  double lo;
  double hi;
};

/// Grows the seed interval geometrically until f changes sign across it.
/// With grow_hi the upper end moves away from lo (doubling the span); with
/// grow_lo the lower end moves symmetrically downward. Throws BracketNotFound
/// after max_steps expansions.
Bracket expand_bracket(const std::function<double(double)>& f, double seed_lo, double seed_hi,
                       bool grow_hi = true, bool grow_lo = false, double factor = 2.0,
                       int max_steps = 200);

}  // namespace cdma
