// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "cdma/monte_carlo.hpp"

namespace cdma {

/// Fixed 12-column schema, one row per (game, K):
/// game,K,trials,mean_utility_bpj,se_utility,mean_power_w,mean_power_dbw,
/// se_power,mean_sinr,mean_sinr_db,frac_pmax,dropped_trials
/// Full-precision decimal text; header row; newline-terminated.
void emit_csv(const AggregateStats& stats, std::ostream& out);
std::string render_csv(const AggregateStats& stats);
void write_csv_file(const AggregateStats& stats, const std::string& path);  // IoError

/// Self-contained matplotlib script rendering the four comparison charts
/// (utility, power, output SINR, saturation fraction versus K, one curve per
/// game). References only `csv_relpath`.
std::string render_plot_script(const AggregateStats& stats, std::string_view csv_relpath);
void write_plot_script(const AggregateStats& stats, std::string_view csv_relpath,
                       const std::string& path);  // IoError

}  // namespace cdma
