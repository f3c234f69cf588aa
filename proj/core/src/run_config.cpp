// SPDX-License-Identifier: Apache-2.0
#include "cdma/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "cdma/errors.hpp"

namespace cdma {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

double parse_double(std::string_view v, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(std::string(v), &used);
    if (used != v.size()) parse_fail(line, "trailing characters in number '" + std::string(v) + "'");
    return x;
  } catch (const Error&) {
    throw;
  } catch (...) {
    parse_fail(line, "expected a number, got '" + std::string(v) + "'");
  }
}

long long parse_int(std::string_view v, int line) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    parse_fail(line, "expected an integer, got '" + std::string(v) + "'");
  return x;
}

std::uint64_t parse_u64(std::string_view v, int line) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    parse_fail(line, "expected an unsigned integer, got '" + std::string(v) + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view v, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const std::size_t pos = v.find(sep);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(v));
      break;
    }
    parts.push_back(trim(v.substr(0, pos)));
    v.remove_prefix(pos + 1);
  }
  return parts;
}

std::vector<int> parse_k_list(std::string_view v, int line) {
  std::vector<int> ks;
  for (std::string_view item : split(v, ',')) {
    if (item.empty()) parse_fail(line, "empty item in k_list");
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      ks.push_back(static_cast<int>(parse_int(item, line)));
    } else {
      const int a = static_cast<int>(parse_int(trim(item.substr(0, colon)), line));
      const int b = static_cast<int>(parse_int(trim(item.substr(colon + 1)), line));
      if (b < a) parse_fail(line, "descending range in k_list");
      for (int k = a; k <= b; ++k) ks.push_back(k);
    }
  }
  return ks;
}

std::vector<GameKind> parse_games(std::string_view v, int line) {
  std::vector<GameKind> games;
  for (std::string_view item : split(v, ',')) {
    if (item.empty()) parse_fail(line, "empty item in games");
    games.push_back(game_kind_from_string(item));
  }
  return games;
}

}  // namespace

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  std::optional<int> info_len;  // defaults to packet_len when unset

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "missing key");
    if (value.empty()) parse_fail(line_no, "missing value for key '" + key + "'");

    if (key == "processing_gain") spec.config.processing_gain = static_cast<int>(parse_int(value, line_no));
    else if (key == "packet_len") spec.config.packet_len = static_cast<int>(parse_int(value, line_no));
    else if (key == "info_len") info_len = static_cast<int>(parse_int(value, line_no));
    else if (key == "rate") spec.config.rate = parse_double(value, line_no);
    else if (key == "noise_psd") spec.config.noise_psd = parse_double(value, line_no);
    else if (key == "pmax") spec.config.pmax = parse_double(value, line_no);
    else if (key == "tol_power") spec.config.tol_power = parse_double(value, line_no);
    else if (key == "tol_tmse") spec.config.tol_tmse = parse_double(value, line_no);
    else if (key == "max_iters_power") spec.config.max_iters_power = static_cast<int>(parse_int(value, line_no));
    else if (key == "max_iters_tmse") spec.config.max_iters_tmse = static_cast<int>(parse_int(value, line_no));
    else if (key == "cell_min") spec.cell_min = parse_double(value, line_no);
    else if (key == "cell_max") spec.cell_max = parse_double(value, line_no);
    else if (key == "trials") spec.trials = static_cast<int>(parse_int(value, line_no));
    else if (key == "k_list") spec.k_list = parse_k_list(value, line_no);
    else if (key == "games") spec.games = parse_games(value, line_no);
    else if (key == "base_seed") spec.base_seed = parse_u64(value, line_no);
    else if (key == "threads") spec.threads = static_cast<int>(parse_int(value, line_no));
    else throw Error(ErrorCode::UnknownKey, "line " + std::to_string(line_no) + ": '" + key + "'");
  }

  spec.config.info_len = info_len.value_or(spec.config.packet_len);
  spec.config.validate();
  if (!(spec.cell_min > 0.0) || !(spec.cell_max > spec.cell_min))
    throw Error(ErrorCode::InvalidValue, "cell bounds must satisfy 0 < cell_min < cell_max");
  if (spec.trials < 1) throw Error(ErrorCode::InvalidValue, "trials must be >= 1");
  if (spec.threads < 0) throw Error(ErrorCode::InvalidValue, "threads must be >= 0");
  if (spec.k_list.empty()) throw Error(ErrorCode::InvalidValue, "k_list is empty");
  for (int k : spec.k_list)
    if (k < 1) throw Error(ErrorCode::InvalidValue, "user counts must be >= 1");
  if (spec.games.empty()) throw Error(ErrorCode::InvalidValue, "games is empty");
  return spec;
}

ExperimentSpec load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string render_manifest(const ExperimentSpec& spec, std::string_view tool_version,
                            std::string_view csv_filename, std::string_view started_at,
                            double wall_seconds) {
  std::ostringstream out;
  out << "# cdma-game run manifest; replay with: cdma-game run --config <this file>\n";
  out << "# tool_version = " << tool_version << "\n";
  out << "# started_at = " << started_at << "\n";
  out << "# wall_clock_s = " << fmt_double(wall_seconds) << "\n";
  out << "# results_csv = " << csv_filename << "\n";
  out << "processing_gain = " << spec.config.processing_gain << "\n";
  out << "packet_len = " << spec.config.packet_len << "\n";
  out << "info_len = " << spec.config.info_len << "\n";
  out << "rate = " << fmt_double(spec.config.rate) << "\n";
  out << "noise_psd = " << fmt_double(spec.config.noise_psd) << "\n";
  out << "pmax = " << fmt_double(spec.config.pmax) << "\n";
  out << "tol_power = " << fmt_double(spec.config.tol_power) << "\n";
  out << "tol_tmse = " << fmt_double(spec.config.tol_tmse) << "\n";
  out << "max_iters_power = " << spec.config.max_iters_power << "\n";
  out << "max_iters_tmse = " << spec.config.max_iters_tmse << "\n";
  out << "cell_min = " << fmt_double(spec.cell_min) << "\n";
  out << "cell_max = " << fmt_double(spec.cell_max) << "\n";
  out << "trials = " << spec.trials << "\n";
  out << "k_list = ";
  for (std::size_t i = 0; i < spec.k_list.size(); ++i)
    out << (i ? "," : "") << spec.k_list[i];
  out << "\n";
  out << "games = ";
  for (std::size_t i = 0; i < spec.games.size(); ++i)
    out << (i ? "," : "") << to_string(spec.games[i]);
  out << "\n";
  out << "base_seed = " << spec.base_seed << "\n";
  out << "threads = " << spec.threads << "\n";
  return out.str();
}

}  // namespace cdma
