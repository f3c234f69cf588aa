// SPDX-License-Identifier: Apache-2.0
#include "cdma/code_opt.hpp"

#include <algorithm>
#include <cmath>

#include "cdma/errors.hpp"
#include "cdma/receivers.hpp"

namespace cdma {

MuSearchResult mu_search(const EigenDecomposition& eig, const Vec& filter, double power,
                         double gain) {
  const std::size_t n = filter.size();
  const Vec& lam = eig.eigenvalues;
  const Mat& u = eig.eigenvectors;

  Vec proj(n);  // c_i = u_iᵀ d
  for (std::size_t i = 0; i < n; ++i) proj[i] = dot(u.col(i), filter);
  const double filter_norm = norm(filter);
  const double lam_max = lam.empty() ? 0.0 : std::max(lam.front(), 0.0);
  const double lam_tol = 1e-12 * lam_max;
  const double proj_tol = 1e-12 * filter_norm;

  std::vector<std::size_t> relevant;
  for (std::size_t i = 0; i < n; ++i)
    if (lam[i] > lam_tol && std::abs(proj[i]) > proj_tol) relevant.push_back(i);
  if (relevant.empty())
    throw Error(ErrorCode::ZeroProjection, "filter has no projection on the nonzero spectrum");

  const double ph2 = power * gain * gain;
  // ‖s(μ)‖² restricted to the relevant spectrum; strictly decreasing on
  // (−λ', ∞) with λ' the smallest relevant eigenvalue.
  auto norm_sq = [&](double mu) {
    double s = 0.0;
    for (std::size_t i : relevant) {
      const double z = proj[i] / (lam[i] + mu);
      s += z * z;
    }
    return ph2 * s;
  };

  double lam_low = lam[relevant.front()];
  for (std::size_t i : relevant) lam_low = std::min(lam_low, lam[i]);
  const double base = -lam_low;

  // Eigenvalues below the rank threshold are treated as exactly zero.
  const double lam_floor = std::max(lam.back(), 0.0) > lam_tol ? lam.back() : 0.0;
  if (lam_floor < lam_low) {
    // The filter has no projection on the smallest eigendirection. If the
    // parameterized family cannot reach unit norm before (A + μI) loses
    // positive semidefiniteness there, the constrained minimizer sits on that
    // boundary: z(λ,μ) = 0 kills the singular terms and the missing norm is
    // supplied along the spare eigendirection itself.
    const double boundary = norm_sq(-lam_floor);
    if (boundary < 1.0) {
      const double mu = -lam_floor;
      Vec code(n, 0.0);
      const double scale = std::sqrt(power) * gain;
      for (std::size_t i : relevant) {
        const double w = scale * proj[i] / (lam[i] + mu);
        for (std::size_t r = 0; r < n; ++r) code[r] += w * u(r, i);
      }
      const double tau = std::sqrt(1.0 - boundary);
      for (std::size_t r = 0; r < n; ++r) code[r] += tau * u(r, n - 1);
      const double len = norm(code);
      for (double& x : code) x /= len;
      return {mu, code};
    }
  }

  // Lower end: approach the singularity until the norm exceeds 1.
  double eps = 1e-9 * std::max(lam_max, 1.0);
  double lo = base + eps;
  int guard = 0;
  while (norm_sq(lo) <= 1.0) {
    eps *= 0.5;
    lo = base + eps;
    if (++guard > 200 || lo == base)
      throw Error(ErrorCode::BracketNotFound, "norm stays below 1 near the singularity");
  }
  // Upper end: double the span until the norm falls below 1.
  double span = std::max(lam_max, 1.0);
  double hi = base + span;
  guard = 0;
  while (norm_sq(hi) >= 1.0) {
    span *= 2.0;
    hi = base + span;
    if (++guard > 200) throw Error(ErrorCode::BracketNotFound, "norm stays above 1");
  }

  // Bisect to machine precision: the bracket endpoints carry the invariant
  // norm(lo) > 1 > norm(hi).
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (norm_sq(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double mu = 0.5 * (lo + hi);

  Vec code(n, 0.0);
  const double scale = std::sqrt(power) * gain;
  for (std::size_t i : relevant) {
    const double w = scale * proj[i] / (lam[i] + mu);
    for (std::size_t r = 0; r < n; ++r) code[r] += w * u(r, i);
  }
  const double len = norm(code);
  if (std::abs(len - 1.0) > 1e-9)
    throw Error(ErrorCode::NoConvergence, "mu search left the code norm off unity");
  for (double& x : code) x /= len;
  return {mu, code};
}

namespace {

EigenDecomposition scaled_eig(const EigenDecomposition& base, double factor) {
  EigenDecomposition out;
  out.eigenvalues.resize(base.eigenvalues.size());
  for (std::size_t i = 0; i < base.eigenvalues.size(); ++i)
    out.eigenvalues[i] = factor * base.eigenvalues[i];
  out.eigenvectors = base.eigenvectors;
  return out;
}

Mat gram_of_columns(const Mat& d, std::size_t cols) {
  // D(:,0..cols-1) Dᵀ, an N×N positive semidefinite matrix.
  const std::size_t n = d.rows();
  Mat g(n, n);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      const double dic = d(i, c);
      if (dic == 0.0) continue;
      for (std::size_t j = i; j < n; ++j) g(i, j) += dic * d(j, c);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

double column_displacement(const Mat& a, const Mat& b, std::size_t col) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double d = a(r, col) - b(r, col);
    s += d * d;
  }
  return std::sqrt(s);
}

// Symmetric (polar) orthogonalization S (SᵀS)^{-1/2}: the nearest matrix with
// orthonormal columns. Only defined for K <= N with S of full column rank;
// returns an empty matrix when the Gram is too ill-conditioned to invert.
Mat polar_orthogonalize(const Mat& s) {
  const std::size_t k = s.cols();
  if (k > s.rows()) return {};
  Mat gram(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(s.col(i), s.col(j));
  const EigenDecomposition eig = sym_eig(gram);
  if (eig.eigenvalues.back() < 1e-8 * eig.eigenvalues.front()) return {};
  // (SᵀS)^{-1/2} = V diag(1/√λ) Vᵀ
  Mat half(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < k; ++r)
        acc += eig.eigenvectors(i, r) * eig.eigenvectors(j, r) / std::sqrt(eig.eigenvalues[r]);
      half(i, j) = acc;
    }
  return mat_mul(s, half);
}

}  // namespace

CodeOptResult tmse_sweep_linear(const Scenario& sc, const SystemConfig& config) {
  CodeOptResult result;
  result.codes = sc.codes;
  const std::size_t k = static_cast<std::size_t>(sc.num_users);
  if (k == 0) {
    result.converged = true;
    return result;
  }

  Scenario cur = sc;
  double prev_tmse = 0.0;
  bool have_prev = false;
  int sweep = 0;
  while (sweep < config.max_iters_tmse) {
    ++sweep;
    result.sweeps = sweep;
    const ReceiverBank bank = mmse_receiver(cur, config);
    const EigenDecomposition gram_eig = sym_eig(gram_of_columns(bank.filters, k));

    Mat new_codes = cur.codes;
    double disp = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (cur.powers[i] == 0.0) continue;  // nothing to optimize for silent users
      const double ph2 = cur.powers[i] * cur.gains[i] * cur.gains[i];
      const MuSearchResult ms =
          mu_search(scaled_eig(gram_eig, ph2), bank.filters.col(i), cur.powers[i], cur.gains[i]);
      new_codes.set_col(i, ms.code);
      disp = std::max(disp, column_displacement(new_codes, cur.codes, i));
    }
    cur = cur.with_codes(config, new_codes);
    result.displacement_trace.push_back(disp);

    const double tmse = mse_and_tmse(cur, config, bank).tmse;
    result.tmse_trace.push_back(tmse);
    // The TMSE flattens quadratically in the remaining code motion, so the
    // change test alone would stop while columns still travel; requiring the
    // displacement to settle too is what makes the fixed point update-stable.
    const bool settled =
        have_prev &&
        std::abs(tmse - prev_tmse) < config.tol_tmse * std::max(std::abs(prev_tmse), 1e-300) &&
        disp < 10.0 * config.tol_tmse;
    prev_tmse = tmse;
    have_prev = true;
    if (!settled && sweep % 64 != 0) continue;

    // The sweep map also admits stable degenerate fixed points where two
    // codes coincide while a signal-space direction sits empty (the approach
    // can crawl, hence the periodic check). Offer each user the bank's
    // least-occupied eigendirection; a strict TMSE decrease (with that user's
    // receiver rebuilt) means we were parked on such a point, so reseat and
    // resume.
    bool reseated = false;
    const Mat& u = gram_eig.eigenvectors;
    Vec spare(u.rows());
    for (std::size_t r = 0; r < u.rows(); ++r) spare[r] = u(r, u.cols() - 1);
    for (std::size_t i = 0; i < k && !reseated; ++i) {
      if (cur.powers[i] == 0.0) continue;
      Mat cand_codes = cur.codes;
      cand_codes.set_col(i, spare);
      const Scenario cand = cur.with_codes(config, cand_codes);
      const double cand_tmse = mse_and_tmse(cand, config, mmse_receiver(cand, config)).tmse;
      if (cand_tmse < tmse * (1.0 - 100.0 * config.tol_tmse)) {
        cur = cand;
        prev_tmse = cand_tmse;
        have_prev = false;
        reseated = true;
      }
    }
    if (reseated) continue;

    // With K <= N the optimum is an orthonormal set and any orthonormal set
    // is exactly stationary, while the sweep itself can rotate toward one
    // arbitrarily slowly. Snapping to the nearest orthonormal matrix (when
    // that does not raise the TMSE) cuts the crawl short.
    if (k <= cur.codes.rows()) {
      const Mat snapped = polar_orthogonalize(cur.codes);
      if (!snapped.empty()) {
        double moved = 0.0;
        for (std::size_t c = 0; c < k; ++c)
          moved = std::max(moved, column_displacement(snapped, cur.codes, c));
        if (moved > 10.0 * config.tol_tmse) {
          const Scenario cand = cur.with_codes(config, snapped);
          const double cand_tmse =
              mse_and_tmse(cand, config, mmse_receiver(cand, config)).tmse;
          if (cand_tmse <= tmse * (1.0 + 1e-13)) {
            cur = cand;
            prev_tmse = cand_tmse;
            have_prev = false;
            continue;
          }
        }
      }
    }
    if (settled) {
      result.converged = true;
      break;
    }
  }
  result.codes = cur.codes;
  result.filters = mmse_receiver(cur, config).filters;
  return result;
}

CodeOptResult tmse_sweep_sic(const Scenario& sc, const SystemConfig& config) {
  CodeOptResult result;
  result.codes = sc.codes;
  const std::size_t k = static_cast<std::size_t>(sc.num_users);
  if (k == 0) {
    result.converged = true;
    return result;
  }

  Scenario cur = sc;
  const std::vector<int> order = sic_detection_order(sc.gains);
  for (int sweep = 1; sweep <= config.max_iters_tmse; ++sweep) {
    result.sweeps = sweep;
    const ReceiverBank bank = sic_receiver(cur, config);

    // Filters of the first (pos+1) detected users, in detection order.
    Mat detected(bank.filters.rows(), k);
    Mat new_codes = cur.codes;
    double disp = 0.0;
    for (std::size_t pos = 0; pos < k; ++pos) {
      const std::size_t user = static_cast<std::size_t>(order[pos]);
      detected.set_col(pos, bank.filters.col(user));
      if (cur.powers[user] == 0.0) continue;
      const double ph2 = cur.powers[user] * cur.gains[user] * cur.gains[user];
      const Mat gram = gram_of_columns(detected, pos + 1);
      const MuSearchResult ms = mu_search(scaled_eig(sym_eig(gram), ph2),
                                          bank.filters.col(user), cur.powers[user],
                                          cur.gains[user]);
      new_codes.set_col(user, ms.code);
      disp = std::max(disp, column_displacement(new_codes, cur.codes, user));
    }
    cur = cur.with_codes(config, new_codes);
    result.displacement_trace.push_back(disp);

    // Informational trace: total of the detection-order restricted MSEs.
    double tmse = 0.0;
    for (std::size_t pos = 0; pos < k; ++pos) {
      const std::size_t user = static_cast<std::size_t>(order[pos]);
      const std::span<const int> remaining(order.data() + pos, k - pos);
      const Mat cov = restricted_covariance(cur, config, remaining);
      const Vec d = bank.filters.col(user);
      const double cross =
          std::sqrt(cur.powers[user]) * cur.gains[user] * dot(d, cur.codes.col(user));
      tmse += 1.0 + dot(d, mat_vec(cov, d)) - 2.0 * cross;
    }
    result.tmse_trace.push_back(tmse);

    result.codes = cur.codes;
    result.filters = bank.filters;
    if (disp < config.tol_tmse) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace cdma
