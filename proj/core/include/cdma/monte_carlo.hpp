// SPDX-License-Identifier: Apache-2.0
//
// Scenario sampling and Monte Carlo aggregation. Each trial samples one
// shared channel realization that is replayed across every requested game
// (paired comparison); the code matrix is the starting point for the
// code-optimizing games and the fixed code assignment for the others.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cdma/game.hpp"
#include "cdma/model.hpp"

namespace cdma {

struct TrialSpec {
  std::uint64_t seed = 0;
  int num_users = 1;
  SystemConfig config;
  double cell_min = 10.0;   // meters
  double cell_max = 500.0;  // meters
};

/// Distances uniform on [cell_min, cell_max]; channel amplitudes Rayleigh with
/// mean d^{-2} (scale d^{-2}·√(2/π)); codes i.i.d. ±1/√N; initial powers
/// pmax/10. Bit-deterministic in the seed.
Scenario sample_scenario(const TrialSpec& spec);

struct ExperimentSpec {
  SystemConfig config;
  std::vector<int> k_list = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
  std::vector<GameKind> games = {GameKind::MmseBaseline, GameKind::MmseCodes,
                                 GameKind::SicPower, GameKind::SicCodes};
  int trials = 2000;
  std::uint64_t base_seed = 1;
  double cell_min = 10.0;
  double cell_max = 500.0;
  int threads = 0;  // 0 = hardware concurrency
};

/// Per-trial seed: base ⊕ trial index pushed through a 64-bit mix. The user
/// count does not enter: cells with different K replay the same user stream
/// (common random numbers across the K sweep).
std::uint64_t scenario_seed(std::uint64_t base_seed, int trial, int num_users);

/// The exact sampling inputs run_experiment uses for a given cell and trial.
TrialSpec trial_spec_for(const ExperimentSpec& spec, int num_users, int trial);

/// Per-trial, per-game record: user means within one converged outcome.
struct TrialSummary {
  double mean_utility = 0.0;
  double mean_power = 0.0;
  double mean_sinr = 0.0;
  int saturated = 0;
  int users = 0;
};

struct CellStats {
  GameKind game = GameKind::MmseBaseline;
  int num_users = 0;
  int trials_used = 0;
  int dropped_trials = 0;
  double mean_utility = 0.0;
  double se_utility = 0.0;
  double mean_power_w = 0.0;
  double mean_power_dbw = 0.0;
  double se_power_w = 0.0;
  double mean_sinr = 0.0;
  double mean_sinr_db = 0.0;
  double frac_pmax = 0.0;
};

struct AggregateStats {
  std::vector<CellStats> cells;  // grouped by game (spec order), K ascending
};

/// Mean over users then over trials; standard errors from the per-trial
/// means. Throws EmptyCell when no trial survived.
CellStats aggregate_cell(GameKind game, int num_users, std::span<const TrialSummary> rows,
                         int dropped_trials);

/// Runs trials in parallel worker threads. A trial is dropped from every game
/// if any of its games fails to converge, preserving the pairing. Results are
/// bit-identical for any thread count.
AggregateStats run_experiment(const ExperimentSpec& spec);

}  // namespace cdma
