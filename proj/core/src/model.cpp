// SPDX-License-Identifier: Apache-2.0
#include "cdma/model.hpp"

#include <cmath>
#include <string>

#include "cdma/errors.hpp"

namespace cdma {

void SystemConfig::validate() const {
  if (processing_gain < 1) throw Error(ErrorCode::InvalidValue, "processing_gain must be >= 1");
  if (packet_len < 2) throw Error(ErrorCode::InvalidValue, "packet_len must be >= 2");
  if (info_len < 1 || info_len > packet_len)
    throw Error(ErrorCode::InvalidValue, "info_len must be in [1, packet_len]");
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidValue, "rate must be positive");
  if (!(noise_psd > 0.0)) throw Error(ErrorCode::InvalidValue, "noise_psd must be positive");
  if (!(pmax > 0.0)) throw Error(ErrorCode::InvalidValue, "pmax must be positive");
  if (!(tol_power > 0.0) || !(tol_tmse > 0.0))
    throw Error(ErrorCode::InvalidValue, "tolerances must be positive");
  if (max_iters_power < 1 || max_iters_tmse < 1)
    throw Error(ErrorCode::InvalidValue, "iteration caps must be >= 1");
}

Scenario make_scenario(const SystemConfig& config, Vec gains, Mat codes, Vec powers,
                       Vec distances) {
  config.validate();
  const std::size_t k = gains.size();
  const std::size_t n = static_cast<std::size_t>(config.processing_gain);
  if (codes.rows() != n || codes.cols() != k || powers.size() != k)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(n) + "x" + std::to_string(k) + " codes and " +
                    std::to_string(k) + " powers");
  if (!distances.empty() && distances.size() != k)
    throw Error(ErrorCode::DimensionMismatch, "distances length");

  for (std::size_t i = 0; i < k; ++i)
    if (!(gains[i] > 0.0)) throw Error(ErrorCode::NonPositiveGain, "user " + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i)
    if (powers[i] < 0.0 || powers[i] > config.pmax)
      throw Error(ErrorCode::InvalidValue, "power outside [0, pmax] for user " + std::to_string(i));

  for (std::size_t j = 0; j < k; ++j) {
    const double len = norm(codes.col(j));
    if (std::abs(len - 1.0) > 1e-6)
      throw Error(ErrorCode::NonUnitCode,
                  "column " + std::to_string(j) + " has norm " + std::to_string(len));
    // Repair drift from iterative updates, but leave columns that are already
    // unit to machine precision untouched so construction is bit-stable.
    if (std::abs(len - 1.0) > 1e-12) {
      Vec c = codes.col(j);
      for (double& x : c) x /= len;
      codes.set_col(j, c);
    }
  }

  Scenario sc;
  sc.num_users = static_cast<int>(k);
  sc.gains = std::move(gains);
  sc.distances = std::move(distances);
  sc.codes = std::move(codes);
  sc.powers = std::move(powers);
  return sc;
}

Scenario Scenario::with_powers(const SystemConfig& config, Vec new_powers) const {
  return make_scenario(config, gains, codes, std::move(new_powers), distances);
}

Scenario Scenario::with_codes(const SystemConfig& config, Mat new_codes) const {
  return make_scenario(config, gains, std::move(new_codes), powers, distances);
}

namespace {

void add_user_terms(Mat& m, const Scenario& sc, std::span<const int> users) {
  const std::size_t n = m.rows();
  for (int u : users) {
    const std::size_t k = static_cast<std::size_t>(u);
    const double w = sc.powers[k] * sc.gains[k] * sc.gains[k];
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w * sc.codes(i, k);
      for (std::size_t j = i; j < n; ++j) m(i, j) += wi * sc.codes(j, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
}

}  // namespace

Mat data_covariance(const Scenario& sc, const SystemConfig& config) {
  const std::size_t n = static_cast<std::size_t>(config.processing_gain);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = config.noise_var();
  std::vector<int> all(static_cast<std::size_t>(sc.num_users));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  add_user_terms(m, sc, all);
  return m;
}

Mat restricted_covariance(const Scenario& sc, const SystemConfig& config,
                          std::span<const int> users) {
  if (users.empty()) throw Error(ErrorCode::EmptyUserSet, "restricted_covariance");
  for (int u : users)
    if (u < 0 || u >= sc.num_users)
      throw Error(ErrorCode::DimensionMismatch, "user index out of range");
  const std::size_t n = static_cast<std::size_t>(config.processing_gain);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = config.noise_var();
  add_user_terms(m, sc, users);
  return m;
}

}  // namespace cdma
