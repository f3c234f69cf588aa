// SPDX-License-Identifier: Apache-2.0
#include "cdma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cdma/errors.hpp"

namespace cdma {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = a_[r * cols_ + c];
  return v;
}

void Mat::set_col(std::size_t c, const Vec& v) {
  for (std::size_t r = 0; r < rows_; ++r) a_[r * cols_ + c] = v[r];
}

double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

double max_abs(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "mat_mul shape");
  Mat out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Vec mat_vec(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "mat_vec shape");
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

double off_diag_norm(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frob_norm(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eig(const Mat& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw Error(ErrorCode::DimensionMismatch, "sym_eig needs a square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-9)
        throw Error(ErrorCode::NotSymmetric, "asymmetry exceeds 1e-9");

  // Work on the symmetrized copy so the rotations see an exactly symmetric
  // matrix regardless of roundoff in the input.
  Mat w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
  Mat v = Mat::identity(n);

  const double scale = frob_norm(w);
  const int max_sweeps = 64;
  bool converged = (n < 2);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (off_diag_norm(w) <= 1e-14 * std::max(scale, 1e-300)) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_diag_norm(w) > 1e-12 * std::max(scale, 1e-300))
    throw Error(ErrorCode::NoConvergence, "Jacobi sweep cap exceeded");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Mat(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = w(idx[j], idx[j]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, idx[j]);
  }
  return out;
}

CholeskyFactor CholeskyFactor::factor(const Mat& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw Error(ErrorCode::DimensionMismatch, "cholesky needs a square matrix");
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "nonpositive pivot");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

Vec CholeskyFactor::solve(const Vec& b) const {
  const std::size_t n = l_.rows();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "cholesky solve rhs");
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * y[k];
    y[i] = s / l_(i, i);
  }
  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * x[k];
    x[ii] = s / l_(ii, ii);
  }
  return x;
}

Vec spd_solve(const Mat& a, const Vec& b) { return CholeskyFactor::factor(a).solve(b); }

double find_root_bisect(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorCode::NoSignChange, "f(lo) and f(hi) have the same sign");
  for (int it = 0; it < 2000 && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket no longer splittable
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Bracket expand_bracket(const std::function<double(double)>& f, double seed_lo, double seed_hi,
                       bool grow_hi, bool grow_lo, double factor, int max_steps) {
  double lo = seed_lo;
  double hi = seed_hi;
  double flo = f(lo);
  double fhi = f(hi);
  for (int step = 0; step < max_steps; ++step) {
    if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0)) return {lo, hi};
    const double span = hi - lo;
    if (grow_hi) {
      hi += span * (factor - 1.0);
      fhi = f(hi);
    }
    if (grow_lo) {
      lo -= span * (factor - 1.0);
      flo = f(lo);
    }
    if (!grow_hi && !grow_lo) break;
  }
  if (flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0)) return {lo, hi};
  throw Error(ErrorCode::BracketNotFound, "no sign change after expansion");
}

}  // namespace cdma
