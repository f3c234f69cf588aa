// SPDX-License-Identifier: Apache-2.0
//
// The four non-cooperative energy-efficiency games. Every game separates into
// (i) SINR maximization over receivers (and codes, for the code-optimizing
// variants) at fixed powers and (ii) a transmit-power best response driving
// each user's SINR to the common target γ̄, capped at pmax.
#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "cdma/code_opt.hpp"
#include "cdma/model.hpp"
#include "cdma/receivers.hpp"

namespace cdma {

enum class GameKind {
  MmseBaseline,  // linear MMSE receivers, fixed codes
  MmseCodes,     // linear MMSE receivers + spreading-code optimization
  SicPower,      // SIC/MMSE receivers, fixed codes
  SicCodes,      // SIC/MMSE receivers + spreading-code optimization
};

inline constexpr GameKind kAllGames[] = {GameKind::MmseBaseline, GameKind::MmseCodes,
                                         GameKind::SicPower, GameKind::SicCodes};

std::string_view to_string(GameKind kind);
GameKind game_kind_from_string(std::string_view tag);  // throws InvalidValue
bool optimizes_codes(GameKind kind);
bool uses_sic(GameKind kind);

struct GameOutcome {
  GameKind kind = GameKind::MmseBaseline;
  double gamma_bar = 0.0;
  Vec powers;    // equilibrium transmit powers, watts
  Mat codes;     // equilibrium codes (the input codes for non-code games)
  Mat filters;   // receiver bank at the equilibrium
  std::vector<int> order;  // detection order (identity for linear games)
  Vec sinr;      // per-user output SINR, linear scale
  Vec utilities; // bits per Joule
  std::vector<std::uint8_t> saturated;  // p_k at pmax
  Vec power_change_trace;  // max relative power change per outer iteration
  int outer_iterations = 0;
  bool converged = false;
};

/// One best-response pass: p_k ← min(pmax, p_k γ̄/γ_k). Linear strategies
/// update all users against the current powers; SIC strategies sweep in
/// reverse detection order so each user responds to already-updated
/// downstream powers (the last-detected user's response is exact).
/// Throws ZeroSinr if a powered user measures zero SINR.
Vec power_best_response(const Scenario& sc, const SystemConfig& config,
                        const ReceiverBank& bank, double gamma_bar);

/// Runs the game to its Nash equilibrium. On convergence every user is either
/// within 1e-4 of γ̄ or saturated at pmax with γ < γ̄; if the outer-iteration
/// cap is hit the outcome is returned with converged = false.
GameOutcome run_game(const Scenario& sc, const SystemConfig& config, GameKind kind);

struct NashDeviation {
  int user = 0;
  double factor = 0.0;
  double utility_equilibrium = 0.0;
  double utility_deviated = 0.0;
};

struct NashReport {
  bool passed = true;
  double worst_gain = 0.0;  // max (u_dev - u_eq)/u_eq over all deviations
  std::vector<NashDeviation> violations;
};

inline constexpr double kDefaultDeviationFactors[] = {0.5, 0.9, 1.1, 2.0};

/// Rescales each user's power by every factor (clipped to (0, pmax]),
/// re-optimizes only that user's receiver, and checks that no deviation
/// improves the user's utility beyond a 1e-9 relative slack.
NashReport verify_nash(const GameOutcome& outcome, const Scenario& sc,
                       const SystemConfig& config,
                       std::span<const double> factors = kDefaultDeviationFactors);

struct UniquenessReport {
  bool agrees = false;
  int runs_converged = 0;
  double max_power_spread = 0.0;  // max relative disagreement across starts
  double max_sinr_spread = 0.0;
};

/// Re-runs the game from n_starts random initial powers (and random initial
/// codes for the code-optimizing games) and compares the converged powers and
/// SINRs across starts at 1e-4 relative tolerance.
UniquenessReport equilibrium_uniqueness_probe(const Scenario& sc, const SystemConfig& config,
                                              GameKind kind, int n_starts, std::uint64_t seed);

}  // namespace cdma
