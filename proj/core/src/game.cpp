// SPDX-License-Identifier: Apache-2.0
#include "cdma/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cdma/errors.hpp"
#include "cdma/rng.hpp"
#include "cdma/utility.hpp"

namespace cdma {

std::string_view to_string(GameKind kind) {
  switch (kind) {
    case GameKind::MmseBaseline: return "mmse-baseline";
    case GameKind::MmseCodes: return "mmse-codes";
    case GameKind::SicPower: return "sic-power";
    case GameKind::SicCodes: return "sic-codes";
  }
  return "unknown";
}

GameKind game_kind_from_string(std::string_view tag) {
  for (GameKind k : kAllGames)
    if (tag == to_string(k)) return k;
  throw Error(ErrorCode::InvalidValue, "unknown game tag '" + std::string(tag) + "'");
}

bool optimizes_codes(GameKind kind) {
  return kind == GameKind::MmseCodes || kind == GameKind::SicCodes;
}

bool uses_sic(GameKind kind) {
  return kind == GameKind::SicPower || kind == GameKind::SicCodes;
}

namespace {

constexpr double kOnTargetTol = 1e-4;

bool is_saturated(double power, double pmax) { return power >= pmax * (1.0 - 1e-12); }

// SINR of `user` for explicit powers, without materializing a Scenario.
double eval_sinr(const Scenario& sc, const SystemConfig& config, const Mat& filters,
                 const Vec& powers, int user, std::span<const int> interferers) {
  const std::size_t k = static_cast<std::size_t>(user);
  if (powers[k] == 0.0) return 0.0;
  const Vec d = filters.col(k);
  const double dd = dot(d, d);
  if (dd == 0.0) throw Error(ErrorCode::ZeroFilter, "user " + std::to_string(user));
  const double h = sc.gains[k];
  const double ds = dot(d, sc.codes.col(k));
  double denom = config.noise_var() * dd;
  for (int j : interferers) {
    const std::size_t ju = static_cast<std::size_t>(j);
    const double dsj = dot(d, sc.codes.col(ju));
    denom += powers[ju] * sc.gains[ju] * sc.gains[ju] * dsj * dsj;
  }
  return powers[k] * h * h * ds * ds / denom;
}

ReceiverBank rebuild_bank(const Scenario& sc, const SystemConfig& config, GameKind kind) {
  return uses_sic(kind) ? sic_receiver(sc, config) : mmse_receiver(sc, config);
}

bool dichotomy_holds(const Vec& sinr, const Vec& powers, double gamma_bar, double pmax) {
  for (std::size_t k = 0; k < powers.size(); ++k) {
    if (powers[k] == 0.0) continue;
    const bool on_target = std::abs(sinr[k] - gamma_bar) <= kOnTargetTol * gamma_bar;
    const bool saturated_below = is_saturated(powers[k], pmax) && sinr[k] < gamma_bar;
    if (!on_target && !saturated_below) return false;
  }
  return true;
}

}  // namespace

Vec power_best_response(const Scenario& sc, const SystemConfig& config,
                        const ReceiverBank& bank, double gamma_bar) {
  const int k = sc.num_users;
  Vec updated = sc.powers;
  if (bank.strategy == DetectionStrategy::SicMmse) {
    // Reverse detection order: downstream powers are already final within the
    // pass, so each response is exact given the current filters.
    for (int pos = k; pos-- > 0;) {
      const int user = bank.order[static_cast<std::size_t>(pos)];
      const std::size_t uu = static_cast<std::size_t>(user);
      if (updated[uu] == 0.0) continue;
      const std::span<const int> later(bank.order.data() + pos + 1,
                                       static_cast<std::size_t>(k - pos - 1));
      const double g = eval_sinr(sc, config, bank.filters, updated, user, later);
      if (g <= 0.0) throw Error(ErrorCode::ZeroSinr, "user " + std::to_string(user));
      updated[uu] = std::min(config.pmax, updated[uu] * gamma_bar / g);
    }
    return updated;
  }

  std::vector<int> others;
  others.reserve(static_cast<std::size_t>(k));
  for (int user = 0; user < k; ++user) {
    const std::size_t uu = static_cast<std::size_t>(user);
    if (sc.powers[uu] == 0.0) continue;
    others.clear();
    for (int j = 0; j < k; ++j)
      if (j != user) others.push_back(j);
    const double g = eval_sinr(sc, config, bank.filters, sc.powers, user, others);
    if (g <= 0.0) throw Error(ErrorCode::ZeroSinr, "user " + std::to_string(user));
    updated[uu] = std::min(config.pmax, sc.powers[uu] * gamma_bar / g);
  }
  return updated;
}

GameOutcome run_game(const Scenario& sc, const SystemConfig& config, GameKind kind) {
  config.validate();
  const double gamma_bar = target_sinr(config.packet_len);

  GameOutcome out;
  out.kind = kind;
  out.gamma_bar = gamma_bar;

  Scenario cur = sc;
  ReceiverBank bank;
  Vec sinr;
  bool first_pass = true;

  // In overload the codes↔powers alternation can limit-cycle (the TMSE
  // optimum flips which users get the clean dimensions as powers swing), so
  // code updates get a finite budget; past it the codes freeze and the pure
  // power iteration, which converges at fixed codes, finishes the job.
  constexpr int kCodeUpdateBudget = 100;

  int iter = 0;
  for (iter = 1; iter <= config.max_iters_power; ++iter) {
    // (i) receivers (and codes) at fixed powers.
    if (optimizes_codes(kind) && iter <= kCodeUpdateBudget) {
      SystemConfig sweep_cfg = config;
      if (!first_pass) sweep_cfg.max_iters_tmse = std::min(config.max_iters_tmse, 50);
      const CodeOptResult co = uses_sic(kind) ? tmse_sweep_sic(cur, sweep_cfg)
                                              : tmse_sweep_linear(cur, sweep_cfg);
      cur = cur.with_codes(config, co.codes);
    }
    bank = rebuild_bank(cur, config, kind);
    first_pass = false;

    // (ii) power best response.
    const Vec updated = power_best_response(cur, config, bank, gamma_bar);
    double change = 0.0;
    for (std::size_t u = 0; u < updated.size(); ++u) {
      const double ref = std::max(cur.powers[u], 1e-300);
      change = std::max(change, std::abs(updated[u] - cur.powers[u]) / ref);
    }
    cur = cur.with_powers(config, updated);
    out.power_change_trace.push_back(change);

    if (change < config.tol_power) {
      // Consistency pass: receivers for the final powers, then the
      // equilibrium dichotomy must hold on the fresh SINRs.
      bank = rebuild_bank(cur, config, kind);
      sinr = all_sinrs(cur, config, bank);
      if (dichotomy_holds(sinr, cur.powers, gamma_bar, config.pmax)) {
        out.converged = true;
        break;
      }
    }
  }
  out.outer_iterations = std::min(iter, config.max_iters_power);
  if (!out.converged) {
    bank = rebuild_bank(cur, config, kind);
    sinr = all_sinrs(cur, config, bank);
  }

  const std::size_t k = static_cast<std::size_t>(sc.num_users);
  out.powers = cur.powers;
  out.codes = cur.codes;
  out.filters = bank.filters;
  out.order = bank.order;
  out.sinr = sinr;
  out.utilities.resize(k);
  out.saturated.resize(k);
  const UtilityParams up = config.utility_params();
  for (std::size_t u = 0; u < k; ++u) {
    out.utilities[u] = (cur.powers[u] > 0.0) ? utility(sinr[u], cur.powers[u], up) : 0.0;
    out.saturated[u] = is_saturated(cur.powers[u], config.pmax) ? 1 : 0;
  }
  return out;
}

namespace {

// SINR of user k after deviating its power, with its own receiver rebuilt and
// everyone else's strategy frozen.
double deviated_sinr(const Scenario& eq, const SystemConfig& config, const GameOutcome& outcome,
                     int user, double new_power) {
  const std::size_t uu = static_cast<std::size_t>(user);
  Vec powers = outcome.powers;
  powers[uu] = new_power;
  const double scale = std::sqrt(new_power) * eq.gains[uu];

  if (uses_sic(outcome.kind)) {
    std::size_t pos = 0;
    while (outcome.order[pos] != user) ++pos;
    const std::span<const int> tail(outcome.order.data() + pos,
                                    outcome.order.size() - pos);
    // Restricted covariance over the tail, with the deviated own power.
    const std::size_t n = eq.codes.rows();
    Mat cov(n, n);
    for (std::size_t i = 0; i < n; ++i) cov(i, i) = config.noise_var();
    for (int j : tail) {
      const std::size_t ju = static_cast<std::size_t>(j);
      const double w = powers[ju] * eq.gains[ju] * eq.gains[ju];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) cov(i, l) += w * eq.codes(i, ju) * eq.codes(l, ju);
    }
    Vec d = CholeskyFactor::factor(cov).solve(eq.codes.col(uu));
    for (double& x : d) x *= scale;
    Mat filters = outcome.filters;
    filters.set_col(uu, d);
    const std::span<const int> later(outcome.order.data() + pos + 1,
                                     outcome.order.size() - pos - 1);
    return eval_sinr(eq, config, filters, powers, user, later);
  }

  Scenario dev = eq.with_powers(config, powers);
  Vec d = CholeskyFactor::factor(data_covariance(dev, config)).solve(eq.codes.col(uu));
  for (double& x : d) x *= scale;
  Mat filters = outcome.filters;
  filters.set_col(uu, d);
  std::vector<int> others;
  for (int j = 0; j < eq.num_users; ++j)
    if (j != user) others.push_back(j);
  return eval_sinr(eq, config, filters, powers, user, others);
}

}  // namespace

NashReport verify_nash(const GameOutcome& outcome, const Scenario& sc,
                       const SystemConfig& config, std::span<const double> factors) {
  const Scenario eq = make_scenario(config, sc.gains, outcome.codes, outcome.powers,
                                    sc.distances);
  const UtilityParams up = config.utility_params();
  NashReport report;
  for (int user = 0; user < eq.num_users; ++user) {
    const std::size_t uu = static_cast<std::size_t>(user);
    if (outcome.powers[uu] == 0.0) continue;  // silent users take no part
    const double u_star = outcome.utilities[uu];
    for (double f : factors) {
      const double p_dev = std::min(f * outcome.powers[uu], config.pmax);
      if (!(p_dev > 0.0)) continue;
      const double g_dev = deviated_sinr(eq, config, outcome, user, p_dev);
      const double u_dev = utility(g_dev, p_dev, up);
      const double gain = (u_dev - u_star) / std::max(u_star, 1e-300);
      report.worst_gain = std::max(report.worst_gain, gain);
      if (u_dev > u_star * (1.0 + 1e-9)) {
        report.passed = false;
        report.violations.push_back({user, f, u_star, u_dev});
      }
    }
  }
  return report;
}

UniquenessReport equilibrium_uniqueness_probe(const Scenario& sc, const SystemConfig& config,
                                              GameKind kind, int n_starts, std::uint64_t seed) {
  UniquenessReport report;
  std::vector<GameOutcome> runs;
  for (int s = 0; s < n_starts; ++s) {
    std::mt19937_64 rng(mix64(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(s + 1))));
    Vec powers(static_cast<std::size_t>(sc.num_users));
    for (double& p : powers) p = uniform_open01(rng) * config.pmax;
    Mat codes = optimizes_codes(kind)
                    ? random_sign_codes(rng, config.processing_gain, sc.num_users)
                    : sc.codes;
    const Scenario start = make_scenario(config, sc.gains, std::move(codes), std::move(powers),
                                         sc.distances);
    GameOutcome out = run_game(start, config, kind);
    if (out.converged) runs.push_back(std::move(out));
  }
  report.runs_converged = static_cast<int>(runs.size());
  if (runs.size() < 2) {
    report.agrees = !runs.empty();
    return report;
  }
  const GameOutcome& ref = runs.front();
  for (std::size_t r = 1; r < runs.size(); ++r) {
    for (std::size_t u = 0; u < ref.powers.size(); ++u) {
      report.max_power_spread =
          std::max(report.max_power_spread,
                   std::abs(runs[r].powers[u] - ref.powers[u]) / std::max(ref.powers[u], 1e-300));
      report.max_sinr_spread =
          std::max(report.max_sinr_spread,
                   std::abs(runs[r].sinr[u] - ref.sinr[u]) / std::max(ref.sinr[u], 1e-300));
    }
  }
  report.agrees = report.max_power_spread <= 1e-4 && report.max_sinr_spread <= 1e-4;
  return report;
}

}  // namespace cdma
