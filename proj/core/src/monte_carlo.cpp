// SPDX-License-Identifier: Apache-2.0
#include "cdma/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "cdma/errors.hpp"
#include "cdma/rng.hpp"

namespace cdma {

Scenario sample_scenario(const TrialSpec& spec) {
  if (!(spec.cell_min > 0.0) || !(spec.cell_max > spec.cell_min))
    throw Error(ErrorCode::InvalidValue, "cell bounds");
  const std::size_t k = static_cast<std::size_t>(spec.num_users);
  const std::size_t n = static_cast<std::size_t>(spec.config.processing_gain);
  std::mt19937_64 rng(spec.seed);

  // One user at a time (distance, amplitude, code column), so scenarios with
  // the same seed but different K share their first min(K, K') users: sweeps
  // over K then compare cells under common random numbers.
  const double mean_to_scale = std::sqrt(2.0 / std::numbers::pi);  // Rayleigh mean -> scale
  Vec distances(k), gains(k);
  Mat codes(n, k);
  const double chip = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < k; ++i) {
    distances[i] = uniform_range(rng, spec.cell_min, spec.cell_max);
    const double mean = 1.0 / (distances[i] * distances[i]);
    gains[i] = rayleigh(rng, mean * mean_to_scale);
    for (std::size_t r = 0; r < n; ++r) codes(r, i) = (rng() >> 63) ? chip : -chip;
  }

  Vec powers(k, spec.config.pmax / 10.0);
  return make_scenario(spec.config, std::move(gains), std::move(codes), std::move(powers),
                       std::move(distances));
}

std::uint64_t scenario_seed(std::uint64_t base_seed, int trial, int /*num_users*/) {
  return mix64(base_seed ^ static_cast<std::uint64_t>(trial));
}

TrialSpec trial_spec_for(const ExperimentSpec& spec, int num_users, int trial) {
  return {scenario_seed(spec.base_seed, trial, num_users), num_users, spec.config,
          spec.cell_min, spec.cell_max};
}

CellStats aggregate_cell(GameKind game, int num_users, std::span<const TrialSummary> rows,
                         int dropped_trials) {
  if (rows.empty()) throw Error(ErrorCode::EmptyCell, "no converged trials");
  CellStats cell;
  cell.game = game;
  cell.num_users = num_users;
  cell.trials_used = static_cast<int>(rows.size());
  cell.dropped_trials = dropped_trials;

  double su = 0.0, sp = 0.0, sg = 0.0;
  long saturated = 0, users = 0;
  for (const TrialSummary& r : rows) {
    su += r.mean_utility;
    sp += r.mean_power;
    sg += r.mean_sinr;
    saturated += r.saturated;
    users += r.users;
  }
  const double n = static_cast<double>(rows.size());
  cell.mean_utility = su / n;
  cell.mean_power_w = sp / n;
  cell.mean_sinr = sg / n;
  cell.frac_pmax = users > 0 ? static_cast<double>(saturated) / static_cast<double>(users) : 0.0;
  cell.mean_power_dbw = 10.0 * std::log10(cell.mean_power_w);
  cell.mean_sinr_db = 10.0 * std::log10(cell.mean_sinr);

  if (rows.size() > 1) {
    double vu = 0.0, vp = 0.0;
    for (const TrialSummary& r : rows) {
      vu += (r.mean_utility - cell.mean_utility) * (r.mean_utility - cell.mean_utility);
      vp += (r.mean_power - cell.mean_power_w) * (r.mean_power - cell.mean_power_w);
    }
    cell.se_utility = std::sqrt(vu / (n - 1.0)) / std::sqrt(n);
    cell.se_power_w = std::sqrt(vp / (n - 1.0)) / std::sqrt(n);
  }
  return cell;
}

namespace {

TrialSummary summarize(const GameOutcome& out) {
  TrialSummary s;
  s.users = static_cast<int>(out.powers.size());
  for (std::size_t u = 0; u < out.powers.size(); ++u) {
    s.mean_utility += out.utilities[u];
    s.mean_power += out.powers[u];
    s.mean_sinr += out.sinr[u];
    s.saturated += out.saturated[u] ? 1 : 0;
  }
  if (s.users > 0) {
    s.mean_utility /= s.users;
    s.mean_power /= s.users;
    s.mean_sinr /= s.users;
  }
  return s;
}

struct TrialResult {
  bool ok = false;
  std::vector<TrialSummary> per_game;
};

}  // namespace

AggregateStats run_experiment(const ExperimentSpec& spec) {
  spec.config.validate();
  if (spec.trials < 1) throw Error(ErrorCode::InvalidValue, "trials must be >= 1");
  if (spec.k_list.empty() || spec.games.empty())
    throw Error(ErrorCode::InvalidValue, "empty K or game list");

  unsigned thread_cap = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  thread_cap = std::min<unsigned>(thread_cap, static_cast<unsigned>(spec.trials));

  // cells[game][k_index] accumulates rows in trial order.
  std::vector<std::vector<std::vector<TrialSummary>>> rows(
      spec.games.size(), std::vector<std::vector<TrialSummary>>(spec.k_list.size()));
  std::vector<int> dropped(spec.k_list.size(), 0);

  for (std::size_t ki = 0; ki < spec.k_list.size(); ++ki) {
    const int k = spec.k_list[ki];
    std::vector<TrialResult> results(static_cast<std::size_t>(spec.trials));
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= spec.trials) break;
        TrialResult& res = results[static_cast<std::size_t>(t)];
        try {
          const Scenario sc = sample_scenario(trial_spec_for(spec, k, t));
          res.per_game.reserve(spec.games.size());
          bool all_ok = true;
          for (GameKind g : spec.games) {
            const GameOutcome out = run_game(sc, spec.config, g);
            if (!out.converged) {
              all_ok = false;
              break;
            }
            res.per_game.push_back(summarize(out));
          }
          res.ok = all_ok && res.per_game.size() == spec.games.size();
        } catch (const Error&) {
          res.ok = false;  // dropped from every game to preserve pairing
        }
      }
    };
    if (thread_cap <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(thread_cap);
      for (unsigned i = 0; i < thread_cap; ++i) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
    }
    // Merge in trial order so the output is schedule-independent.
    for (int t = 0; t < spec.trials; ++t) {
      const TrialResult& res = results[static_cast<std::size_t>(t)];
      if (!res.ok) {
        ++dropped[ki];
        continue;
      }
      for (std::size_t gi = 0; gi < spec.games.size(); ++gi)
        rows[gi][ki].push_back(res.per_game[gi]);
    }
  }

  AggregateStats stats;
  for (std::size_t gi = 0; gi < spec.games.size(); ++gi)
    for (std::size_t ki = 0; ki < spec.k_list.size(); ++ki)
      stats.cells.push_back(
          aggregate_cell(spec.games[gi], spec.k_list[ki], rows[gi][ki], dropped[ki]));
  return stats;
}

}  // namespace cdma
