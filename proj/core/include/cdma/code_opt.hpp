// SPDX-License-Identifier: Apache-2.0
//
// Alternating spreading-code / receive-filter optimization. Each sweep first
// refreshes the filter bank at fixed codes, then replaces every code with the
// norm-constrained minimizer of its own MSE term,
//   s_k = √p_k h_k (p_k h_k² D Dᵀ + μ_k I)⁺ d_k,   ‖s_k‖ = 1,
// where μ_k is located by a monotone bracket-and-bisect search on the spectrum
// of p_k h_k² D Dᵀ.
#pragma once

#include "cdma/model.hpp"

namespace cdma {

struct CodeOptResult {
  Mat codes;    // N×K fixed-point spreading codes, unit-norm columns
  Mat filters;  // filter bank from the final sweep
  Vec tmse_trace;          // total MSE after each sweep
  Vec displacement_trace;  // max_k ‖Δs_k‖ per sweep
  int sweeps = 0;
  bool converged = false;
};

struct MuSearchResult {
  double mu = 0.0;
  Vec code;  // unit norm
};

/// Solves ‖s(μ)‖ = 1 for the code update. `eig` is the eigendecomposition of
/// p h² D Dᵀ. Eigencomponents with negligible eigenvalue or negligible
/// projection of `filter` are excluded (the pseudoinverse zero branch); on the
/// remaining spectrum the norm is strictly decreasing in μ from +∞ to 0, so
/// the root is unique. Throws ZeroProjection when nothing remains.
MuSearchResult mu_search(const EigenDecomposition& eig, const Vec& filter, double power,
                         double gain);

/// Joint code/filter fixed point for the linear-MMSE game at fixed powers.
/// Stops when the relative TMSE change per sweep drops below tol_tmse.
CodeOptResult tmse_sweep_linear(const Scenario& sc, const SystemConfig& config);

/// Fixed point of the SIC iterations at fixed powers: stage filters against
/// not-yet-detected users, code updates against the filters of users detected
/// so far (D_k = [d_1..d_k] in detection order). Convergence is declared on
/// the code displacement max_k ‖Δs_k‖ < tol_tmse, since the TMSE identity
/// underlying the linear criterion holds only for full-covariance MMSE banks.
CodeOptResult tmse_sweep_sic(const Scenario& sc, const SystemConfig& config);

}  // namespace cdma
