// SPDX-License-Identifier: Apache-2.0
#include "cdma/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cdma/errors.hpp"

namespace cdma {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void emit_csv(const AggregateStats& stats, std::ostream& out) {
  out << "game,K,trials,mean_utility_bpj,se_utility,mean_power_w,mean_power_dbw,"
         "se_power,mean_sinr,mean_sinr_db,frac_pmax,dropped_trials\n";
  for (const CellStats& c : stats.cells) {
    out << to_string(c.game) << ',' << c.num_users << ',' << c.trials_used << ','
        << num(c.mean_utility) << ',' << num(c.se_utility) << ',' << num(c.mean_power_w) << ','
        << num(c.mean_power_dbw) << ',' << num(c.se_power_w) << ',' << num(c.mean_sinr) << ','
        << num(c.mean_sinr_db) << ',' << num(c.frac_pmax) << ',' << c.dropped_trials << '\n';
  }
}

std::string render_csv(const AggregateStats& stats) {
  std::ostringstream out;
  emit_csv(stats, out);
  return out.str();
}

void write_csv_file(const AggregateStats& stats, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  emit_csv(stats, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::string render_plot_script([[maybe_unused]] const AggregateStats& stats,
                               std::string_view csv_relpath) {
  // The group loop keys off the games actually present in the CSV, so a
  // single-game file renders single-curve charts with no dangling references.
  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "\"\"\"Render the four comparison charts from the results CSV.\"\"\"\n"
     << "import csv\n"
     << "import matplotlib\n"
     << "matplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\n"
     << "\n"
     << "CSV_PATH = \"" << csv_relpath << "\"\n"
     << "\n"
     << "rows = []\n"
     << "with open(CSV_PATH, newline=\"\") as fh:\n"
     << "    for row in csv.DictReader(fh):\n"
     << "        rows.append(row)\n"
     << "\n"
     << "games = sorted({r[\"game\"] for r in rows})\n"
     << "\n"
     << "CHARTS = [\n"
     << "    (\"mean_utility_bpj\", \"Average utility (bits/Joule)\", \"utility_vs_k.png\", True),\n"
     << "    (\"mean_power_dbw\", \"Average transmit power (dBW)\", \"power_vs_k.png\", False),\n"
     << "    (\"mean_sinr_db\", \"Average output SINR (dB)\", \"sinr_vs_k.png\", False),\n"
     << "    (\"frac_pmax\", \"Fraction of users at max power\", \"frac_pmax_vs_k.png\", False),\n"
     << "]\n"
     << "\n"
     << "for column, label, outfile, logscale in CHARTS:\n"
     << "    fig, ax = plt.subplots(figsize=(7, 5))\n"
     << "    for game in games:\n"
     << "        pts = sorted(((int(r[\"K\"]), float(r[column])) for r in rows\n"
     << "                      if r[\"game\"] == game))\n"
     << "        ax.plot([k for k, _ in pts], [v for _, v in pts], marker=\"o\", label=game)\n"
     << "    if logscale:\n"
     << "        ax.set_yscale(\"log\")\n"
     << "    ax.set_xlabel(\"Number of active users K\")\n"
     << "    ax.set_ylabel(label)\n"
     << "    ax.grid(True, alpha=0.4)\n"
     << "    ax.legend()\n"
     << "    fig.tight_layout()\n"
     << "    fig.savefig(outfile, dpi=150)\n"
     << "    plt.close(fig)\n"
     << "    print(f\"wrote {outfile}\")\n";
  return py.str();
}

void write_plot_script(const AggregateStats& stats, std::string_view csv_relpath,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << render_plot_script(stats, csv_relpath);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace cdma
