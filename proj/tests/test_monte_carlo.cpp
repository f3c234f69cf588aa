// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cdma/errors.hpp"
#include "cdma/monte_carlo.hpp"
#include "cdma/rng.hpp"

using namespace cdma;

TEST_SUITE("montecarlo") {

TEST_CASE("sampling is bit-deterministic in the seed") {
  TrialSpec spec;
  spec.seed = 987654321;
  spec.num_users = 9;
  const Scenario a = sample_scenario(spec);
  const Scenario b = sample_scenario(spec);
  CHECK(a.gains == b.gains);
  CHECK(a.distances == b.distances);
  CHECK(a.codes == b.codes);
  CHECK(a.powers == b.powers);
}

TEST_CASE("scenarios with different K share their first users") {
  TrialSpec spec;
  spec.seed = 1234;
  spec.num_users = 7;
  const Scenario small = sample_scenario(spec);
  spec.num_users = 14;
  const Scenario big = sample_scenario(spec);
  for (int u = 0; u < 7; ++u) {
    CHECK(small.gains[u] == big.gains[u]);
    CHECK(small.distances[u] == big.distances[u]);
    for (std::size_t r = 0; r < 7; ++r) CHECK(small.codes(r, u) == big.codes(r, u));
  }
}

TEST_CASE("distances, codes and initial powers follow the sampling contract") {
  TrialSpec spec;
  spec.seed = 5;
  spec.num_users = 12;
  const Scenario sc = sample_scenario(spec);
  const double chip = 1.0 / std::sqrt(7.0);
  for (int u = 0; u < 12; ++u) {
    CHECK(sc.distances[u] >= spec.cell_min);
    CHECK(sc.distances[u] <= spec.cell_max);
    CHECK(sc.gains[u] > 0.0);
    CHECK(sc.powers[u] == spec.config.pmax / 10.0);
    for (std::size_t r = 0; r < 7; ++r)
      CHECK(std::abs(std::abs(sc.codes(r, u)) - chip) <= 1e-12);
    CHECK(std::abs(norm(sc.codes.col(u)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("Rayleigh amplitude empirical mean matches d^-2 at d = 100 m") {
  std::mt19937_64 rng(2468);
  const double mean_target = 1e-4;  // d^-2 at 100 m
  const double sigma = mean_target * std::sqrt(2.0 / std::numbers::pi);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += rayleigh(rng, sigma);
  CHECK(std::abs(sum / n - mean_target) <= 0.005 * mean_target);
}

TEST_CASE("per-trial seeds are a mixed stream") {
  CHECK(scenario_seed(1, 0, 7) != scenario_seed(1, 1, 7));
  CHECK(scenario_seed(1, 0, 7) == scenario_seed(1, 0, 14));  // K does not enter
  CHECK(scenario_seed(1, 0, 7) != scenario_seed(2, 0, 7));
}

TEST_CASE("aggregate_cell textbook values") {
  std::vector<TrialSummary> rows(2);
  rows[0] = {100.0, 1.0, 5.0, 0, 3};
  rows[1] = {300.0, 3.0, 5.0, 3, 3};
  const CellStats cell = aggregate_cell(GameKind::SicCodes, 3, rows, 1);
  CHECK(cell.mean_utility == 200.0);
  CHECK(cell.se_utility == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(cell.mean_power_w == 2.0);
  CHECK(cell.frac_pmax == 0.5);
  CHECK(cell.dropped_trials == 1);
  CHECK(cell.mean_sinr == 5.0);
  CHECK(cell.mean_sinr_db == doctest::Approx(10.0 * std::log10(5.0)).epsilon(1e-12));
}

TEST_CASE("aggregate_cell handles saturation and rejects empty cells") {
  std::vector<TrialSummary> rows(1);
  rows[0] = {10.0, 1.0, 5.0, 4, 4};  // everyone saturated
  CHECK(aggregate_cell(GameKind::MmseBaseline, 4, rows, 0).frac_pmax == 1.0);
  CHECK_THROWS_WITH_AS(aggregate_cell(GameKind::MmseBaseline, 4, {}, 2),
                       doctest::Contains("EmptyCell"), Error);
}

TEST_CASE("single-user trial: all four games coincide") {
  ExperimentSpec spec;
  spec.k_list = {1};
  spec.trials = 1;
  spec.base_seed = 99;
  const AggregateStats stats = run_experiment(spec);
  REQUIRE(stats.cells.size() == 4);
  for (const CellStats& c : stats.cells) {
    CHECK(c.trials_used == 1);
    CHECK(c.mean_utility ==
          doctest::Approx(stats.cells.front().mean_utility).epsilon(1e-9));
    CHECK(c.mean_sinr <= target_sinr(spec.config.packet_len) * (1.0 + 1e-4));
  }
}

TEST_CASE("pairing: the experiment replays exactly the published trial scenarios") {
  ExperimentSpec spec;
  spec.k_list = {3};
  spec.trials = 2;
  spec.games = {GameKind::MmseBaseline};
  spec.base_seed = 4242;
  const AggregateStats stats = run_experiment(spec);

  double repro = 0.0;
  int users = 0, sat = 0;
  for (int t = 0; t < 2; ++t) {
    const Scenario sc = sample_scenario(trial_spec_for(spec, 3, t));
    const GameOutcome out = run_game(sc, spec.config, GameKind::MmseBaseline);
    REQUIRE(out.converged);
    // non-code game keeps the sampled codes bit-identically
    CHECK(out.codes == sc.codes);
    double mean_u = 0.0;
    for (double x : out.utilities) mean_u += x;
    repro += mean_u / 3.0 / 2.0;
    users += 3;
    for (auto s : out.saturated) sat += s ? 1 : 0;
  }
  CHECK(stats.cells[0].mean_utility == repro);
  CHECK(stats.cells[0].frac_pmax == static_cast<double>(sat) / users);
}

TEST_CASE("code games start from the sampled matrix") {
  ExperimentSpec spec;
  const Scenario sc = sample_scenario(trial_spec_for(spec, 5, 0));
  const double chip = 1.0 / std::sqrt(7.0);
  // the sampled matrix is a legal binary start in every entry
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 5; ++c)
      CHECK(std::abs(std::abs(sc.codes(r, c)) - chip) <= 1e-12);
  // and the optimized outcome moved away from it (it did optimize)
  const GameOutcome out = run_game(sc, spec.config, GameKind::MmseCodes);
  REQUIRE(out.converged);
  CHECK_FALSE(out.codes == sc.codes);
}

TEST_CASE("results are identical for any thread count") {
  ExperimentSpec a;
  a.k_list = {2, 4};
  a.trials = 6;
  a.base_seed = 31415;
  a.threads = 1;
  ExperimentSpec b = a;
  b.threads = 4;
  const AggregateStats sa = run_experiment(a);
  const AggregateStats sb = run_experiment(b);
  REQUIRE(sa.cells.size() == sb.cells.size());
  for (std::size_t i = 0; i < sa.cells.size(); ++i) {
    CHECK(sa.cells[i].mean_utility == sb.cells[i].mean_utility);
    CHECK(sa.cells[i].se_utility == sb.cells[i].se_utility);
    CHECK(sa.cells[i].mean_power_w == sb.cells[i].mean_power_w);
    CHECK(sa.cells[i].mean_sinr == sb.cells[i].mean_sinr);
    CHECK(sa.cells[i].frac_pmax == sb.cells[i].frac_pmax);
    CHECK(sa.cells[i].dropped_trials == sb.cells[i].dropped_trials);
  }
}

TEST_CASE("mean SINR never exceeds the target in any cell") {
  ExperimentSpec spec;
  spec.k_list = {2, 7, 10};
  spec.trials = 25;
  spec.base_seed = 777;
  const double gbar = target_sinr(spec.config.packet_len);
  const AggregateStats stats = run_experiment(spec);
  for (const CellStats& c : stats.cells) CHECK(c.mean_sinr <= gbar);
}

TEST_CASE("code-optimizing games coincide for K <= N (paired means)") {
  ExperimentSpec spec;
  spec.k_list = {5};
  spec.trials = 50;
  spec.base_seed = 2026;
  spec.games = {GameKind::MmseCodes, GameKind::SicCodes};
  const AggregateStats stats = run_experiment(spec);
  const CellStats& a = stats.cells[0];
  const CellStats& b = stats.cells[1];
  const double two_se = 2.0 * std::sqrt(a.se_utility * a.se_utility +
                                        b.se_utility * b.se_utility);
  CHECK(std::abs(a.mean_utility - b.mean_utility) <= two_se + 1e-9 * a.mean_utility);
}

}  // TEST_SUITE
