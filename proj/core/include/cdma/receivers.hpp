// SPDX-License-Identifier: Apache-2.0
//
// Receive-filter construction and SINR/MSE evaluation for the three detection
// strategies: matched filter, linear MMSE, and SIC with per-stage MMSE
// filters (perfect past decisions assumed).
#pragma once

#include "cdma/model.hpp"

namespace cdma {

/// Per-user SINRs (linear scale), per-user MSEs and their sum. For an exact
/// linear-MMSE bank, tmse == Σ 1/(1+γ_k) holds to roundoff.
struct SinrReport {
  Vec sinr;
  Vec mse;
  double tmse = 0.0;
};

/// Detection order for SIC: channel gains sorted non-increasingly, ties broken
/// by ascending user index.
std::vector<int> sic_detection_order(const Vec& gains);

/// d_k = s_k for every user.
ReceiverBank matched_filter(const Scenario& sc);

/// d_k = √p_k h_k M⁻¹ s_k with M the full data covariance. Users with zero
/// power get a zero filter.
ReceiverBank mmse_receiver(const Scenario& sc, const SystemConfig& config);

/// Stage-k filter built against the not-yet-detected users only:
/// d_k = √p_k h_k (Σ_{j detected at or after k} p_j h_j² s_j s_jᵀ + (N0/2)I)⁻¹ s_k.
ReceiverBank sic_receiver(const Scenario& sc, const SystemConfig& config);

/// Output SINR of a linear filter, Eq. form
/// γ_k = p_k h_k² (d_kᵀs_k)² / [(N0/2)‖d_k‖² + Σ_{i≠k} p_i h_i² (d_kᵀs_i)²].
/// Zero-power users report γ = 0; a zero filter with positive power throws
/// ZeroFilter.
double sinr_linear(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank,
                   int user);

/// SINR under successive cancellation: the interference sum runs only over
/// users detected after `user` in the bank's detection order.
double sinr_sic(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank,
                int user);

/// Dispatches on the bank's strategy.
Vec all_sinrs(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank);

/// MSE_k = 1 + d_kᵀ M d_k − 2√p_k h_k d_kᵀ s_k against the full data
/// covariance M, plus the per-user SINRs and the total MSE.
SinrReport mse_and_tmse(const Scenario& sc, const SystemConfig& config,
                        const ReceiverBank& bank);

}  // namespace cdma
