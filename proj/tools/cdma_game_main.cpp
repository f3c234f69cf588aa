// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: `run` executes a Monte Carlo experiment from a config file
// and writes the results CSV, a replayable manifest and a plot script;
// `single` traces one game on one sampled scenario; `target-sinr` prints the
// utility-maximizing SINR for a packet length.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cdma/errors.hpp"
#include "cdma/report.hpp"
#include "cdma/run_config.hpp"
#include "cdma/utility.hpp"
#include "cdma/version.hpp"

namespace {

int resolve_threads(int flag_value, bool flag_given, int config_value) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("CDMA_GAME_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
      std::cerr << "warning: ignoring unparsable CDMA_GAME_THREADS='" << env << "'\n";
    }
  }
  return config_value;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads,
            bool threads_given, std::uint64_t seed, bool seed_given) {
  cdma::ExperimentSpec spec = cdma::load_config_file(config_path);
  if (seed_given) spec.base_seed = seed;
  spec.threads = resolve_threads(threads, threads_given, spec.threads);

  std::filesystem::create_directories(out_dir);
  const std::string started = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  const cdma::AggregateStats stats = cdma::run_experiment(spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path out(out_dir);
  cdma::write_csv_file(stats, (out / "results.csv").string());
  cdma::write_plot_script(stats, "results.csv", (out / "plot_results.py").string());
  {
    const std::string manifest =
        cdma::render_manifest(spec, cdma::kVersion, "results.csv", started, wall);
    std::ofstream mf(out / "manifest.txt", std::ios::binary);
    if (!mf) throw cdma::Error(cdma::ErrorCode::IoError, "cannot write manifest");
    mf << manifest;
  }

  for (const cdma::CellStats& c : stats.cells)
    std::printf("%-14s K=%-3d trials=%-5d utility=%.6g bits/J  power=%.4f dBW  sinr=%.4f dB  "
                "frac_pmax=%.4f dropped=%d\n",
                std::string(cdma::to_string(c.game)).c_str(), c.num_users, c.trials_used,
                c.mean_utility, c.mean_power_dbw, c.mean_sinr_db, c.frac_pmax, c.dropped_trials);
  std::printf("wrote %s/{results.csv,manifest.txt,plot_results.py} in %.2fs\n", out_dir.c_str(),
              wall);
  return 0;
}

int cmd_single(int k, const std::string& game_tag, std::uint64_t seed,
               const std::string& config_path) {
  cdma::ExperimentSpec spec =
      config_path.empty() ? cdma::ExperimentSpec{} : cdma::load_config_file(config_path);
  const cdma::GameKind kind = cdma::game_kind_from_string(game_tag);
  spec.base_seed = seed;

  const cdma::Scenario sc = cdma::sample_scenario(cdma::trial_spec_for(spec, k, 0));
  const double gbar = cdma::target_sinr(spec.config.packet_len);
  std::printf("scenario: K=%d seed=%llu gamma_bar=%.6f (%.4f dB)\n", k,
              static_cast<unsigned long long>(seed), gbar, 10.0 * std::log10(gbar));
  for (int u = 0; u < sc.num_users; ++u)
    std::printf("  user %-2d d=%8.2f m  h=%.6e  p0=%.4f W\n", u,
                sc.distances[static_cast<std::size_t>(u)], sc.gains[static_cast<std::size_t>(u)],
                sc.powers[static_cast<std::size_t>(u)]);

  const cdma::GameOutcome out = cdma::run_game(sc, spec.config, kind);
  std::printf("game=%s converged=%s outer_iterations=%d\n",
              std::string(cdma::to_string(kind)).c_str(), out.converged ? "yes" : "no",
              out.outer_iterations);
  for (std::size_t i = 0; i < out.power_change_trace.size(); ++i)
    std::printf("  iter %-3zu max_rel_power_change=%.3e\n", i + 1, out.power_change_trace[i]);
  std::printf("%-4s %-12s %-12s %-12s %-10s %s\n", "user", "p* (W)", "sinr", "sinr (dB)",
              "u (bits/J)", "state");
  for (int u = 0; u < sc.num_users; ++u) {
    const std::size_t uu = static_cast<std::size_t>(u);
    std::printf("%-4d %-12.6g %-12.6g %-12.6g %-10.6g %s\n", u, out.powers[uu], out.sinr[uu],
                10.0 * std::log10(out.sinr[uu]), out.utilities[uu],
                out.saturated[uu] ? "saturated" : "on-target");
  }
  return out.converged ? 0 : 3;
}

int cmd_target_sinr(int m) {
  const double g = cdma::target_sinr(m);
  std::printf("target_sinr = %.9g\n", g);
  std::printf("target_sinr_db = %.9g\n", 10.0 * std::log10(g));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash-equilibrium simulator for energy-efficiency games in uplink DS/CDMA"};
  app.set_version_flag("--version", cdma::kVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a Monte Carlo experiment from a config file");
  std::string config_path, out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "config file (key = value)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  auto* threads_opt = run->add_option("--threads", threads, "worker thread cap");
  auto* seed_opt = run->add_option("--seed", seed, "override base_seed");

  auto* single = app.add_subcommand("single", "trace one game on one sampled scenario");
  int single_k = 7;
  std::string single_game = "mmse-baseline", single_config;
  std::uint64_t single_seed = 1;
  single->add_option("--k", single_k, "number of users")->required();
  single->add_option("--game", single_game,
                     "mmse-baseline | mmse-codes | sic-power | sic-codes")->required();
  single->add_option("--seed", single_seed, "base seed")->required();
  single->add_option("--config", single_config, "optional config file");

  auto* tsinr = app.add_subcommand("target-sinr", "print the utility-maximizing SINR");
  int m = 120;
  tsinr->add_option("--m", m, "packet length in symbols")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, out_dir, threads, threads_opt->count() > 0, seed,
                     seed_opt->count() > 0);
    if (single->parsed()) return cmd_single(single_k, single_game, single_seed, single_config);
    if (tsinr->parsed()) return cmd_target_sinr(m);
  } catch (const cdma::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
