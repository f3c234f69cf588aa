// SPDX-License-Identifier: Apache-2.0
//
// System parameters and per-realization state of the synchronous DS/CDMA
// uplink: K users, N-chip unit-norm spreading codes, real channel amplitudes,
// white Gaussian noise with per-dimension variance N0/2.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdma/linalg.hpp"
#include "cdma/utility.hpp"

namespace cdma {

struct SystemConfig {
  int processing_gain = 7;  // N, chips/symbol
  int packet_len = 120;     // M, symbols/packet
  int info_len = 120;       // L, information symbols/packet
  double rate = 1e5;        // R, bits/s
  double noise_psd = 1e-9;  // N0, W/Hz
  double pmax = 316.22776601683794;  // per-user power cap, W (25 dB re 1 W)
  double tol_power = 1e-6;
  double tol_tmse = 1e-9;
  int max_iters_power = 1000;
  int max_iters_tmse = 3000;

  void validate() const;  // throws InvalidValue

  /// Per-dimension noise variance N0/2.
  double noise_var() const { return 0.5 * noise_psd; }

  UtilityParams utility_params() const { return {packet_len, info_len, rate}; }
};

/// One channel realization. Immutable after construction; the with_* helpers
/// return validated copies.
struct Scenario {
  int num_users = 0;  // K
  Vec gains;          // h, length K, all > 0
  Vec distances;      // meters; metadata only (empty when not sampled)
  Mat codes;          // N×K, unit-norm columns
  Vec powers;         // watts, each in [0, pmax]

  Scenario with_powers(const SystemConfig& config, Vec new_powers) const;
  Scenario with_codes(const SystemConfig& config, Mat new_codes) const;
};

/// Validates dimensions and invariants and renormalizes code columns whose
/// norm drifted by at most 1e-6; larger deviations are rejected (NonUnitCode).
Scenario make_scenario(const SystemConfig& config, Vec gains, Mat codes, Vec powers,
                       Vec distances = {});

/// Covariance of the received vector: S H P Hᵀ Sᵀ + (N0/2) I_N.
Mat data_covariance(const Scenario& sc, const SystemConfig& config);

/// Same, but summing only the listed users (plus the noise term). Used by the
/// successive-cancellation receiver, which sees only not-yet-detected users.
Mat restricted_covariance(const Scenario& sc, const SystemConfig& config,
                          std::span<const int> users);

enum class DetectionStrategy { MatchedFilter, LinearMmse, SicMmse };

/// Per-user receive filters plus the detection strategy. `order` is the
/// detection order (identity for the linear strategies; channel gains sorted
/// non-increasingly for SIC, ties broken by ascending user index).
struct ReceiverBank {
  Mat filters;  // N×K, column k belongs to user k
  DetectionStrategy strategy = DetectionStrategy::MatchedFilter;
  std::vector<int> order;
};

}  // namespace cdma
