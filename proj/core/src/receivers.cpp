// SPDX-License-Identifier: Apache-2.0
#include "cdma/receivers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cdma/errors.hpp"

namespace cdma {

std::vector<int> sic_detection_order(const Vec& gains) {
  std::vector<int> order(gains.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return gains[a] > gains[b]; });
  return order;
}

namespace {

std::vector<int> identity_order(int k) {
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

ReceiverBank matched_filter(const Scenario& sc) {
  return {sc.codes, DetectionStrategy::MatchedFilter, identity_order(sc.num_users)};
}

ReceiverBank mmse_receiver(const Scenario& sc, const SystemConfig& config) {
  const std::size_t k = static_cast<std::size_t>(sc.num_users);
  const std::size_t n = static_cast<std::size_t>(config.processing_gain);
  Mat filters(n, k);
  if (k > 0) {
    const CholeskyFactor chol = CholeskyFactor::factor(data_covariance(sc, config));
    for (std::size_t i = 0; i < k; ++i) {
      if (sc.powers[i] == 0.0) continue;  // zero column
      Vec d = chol.solve(sc.codes.col(i));
      const double scale = std::sqrt(sc.powers[i]) * sc.gains[i];
      for (double& x : d) x *= scale;
      filters.set_col(i, d);
    }
  }
  return {std::move(filters), DetectionStrategy::LinearMmse, identity_order(sc.num_users)};
}

ReceiverBank sic_receiver(const Scenario& sc, const SystemConfig& config) {
  const std::size_t k = static_cast<std::size_t>(sc.num_users);
  const std::size_t n = static_cast<std::size_t>(config.processing_gain);
  std::vector<int> order = sic_detection_order(sc.gains);
  Mat filters(n, k);
  for (std::size_t pos = 0; pos < k; ++pos) {
    const int user = order[pos];
    if (sc.powers[static_cast<std::size_t>(user)] == 0.0) continue;
    const std::span<const int> remaining(order.data() + pos, k - pos);
    const Mat cov = restricted_covariance(sc, config, remaining);
    Vec d = CholeskyFactor::factor(cov).solve(sc.codes.col(static_cast<std::size_t>(user)));
    const double scale =
        std::sqrt(sc.powers[static_cast<std::size_t>(user)]) * sc.gains[static_cast<std::size_t>(user)];
    for (double& x : d) x *= scale;
    filters.set_col(static_cast<std::size_t>(user), d);
  }
  return {std::move(filters), DetectionStrategy::SicMmse, std::move(order)};
}

namespace {

double sinr_common(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank,
                   int user, const std::vector<int>& interferers) {
  const std::size_t k = static_cast<std::size_t>(user);
  if (sc.powers[k] == 0.0) return 0.0;
  const Vec d = bank.filters.col(k);
  const double dd = dot(d, d);
  if (dd == 0.0) throw Error(ErrorCode::ZeroFilter, "user " + std::to_string(user));
  const double h = sc.gains[k];
  const double ds = dot(d, sc.codes.col(k));
  const double signal = sc.powers[k] * h * h * ds * ds;
  double denom = config.noise_var() * dd;
  for (int j : interferers) {
    const std::size_t ju = static_cast<std::size_t>(j);
    const double dsj = dot(d, sc.codes.col(ju));
    denom += sc.powers[ju] * sc.gains[ju] * sc.gains[ju] * dsj * dsj;
  }
  return signal / denom;
}

}  // namespace

double sinr_linear(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank,
                   int user) {
  std::vector<int> others;
  others.reserve(static_cast<std::size_t>(sc.num_users));
  for (int i = 0; i < sc.num_users; ++i)
    if (i != user) others.push_back(i);
  return sinr_common(sc, config, bank, user, others);
}

double sinr_sic(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank,
                int user) {
  // Interference only from users detected after `user`.
  std::vector<int> later;
  bool seen = false;
  for (int u : bank.order) {
    if (seen) later.push_back(u);
    if (u == user) seen = true;
  }
  return sinr_common(sc, config, bank, user, later);
}

Vec all_sinrs(const Scenario& sc, const SystemConfig& config, const ReceiverBank& bank) {
  Vec out(static_cast<std::size_t>(sc.num_users));
  for (int i = 0; i < sc.num_users; ++i)
    out[static_cast<std::size_t>(i)] =
        (bank.strategy == DetectionStrategy::SicMmse) ? sinr_sic(sc, config, bank, i)
                                                      : sinr_linear(sc, config, bank, i);
  return out;
}

SinrReport mse_and_tmse(const Scenario& sc, const SystemConfig& config,
                        const ReceiverBank& bank) {
  const std::size_t k = static_cast<std::size_t>(sc.num_users);
  SinrReport report;
  // Zero filters are legal in an MSE report (they score MSE = 1), so map them
  // to γ = 0 instead of propagating ZeroFilter.
  report.sinr.resize(k);
  for (int i = 0; i < sc.num_users; ++i) {
    const std::size_t iu = static_cast<std::size_t>(i);
    if (dot(bank.filters.col(iu), bank.filters.col(iu)) == 0.0) {
      report.sinr[iu] = 0.0;
    } else {
      report.sinr[iu] = (bank.strategy == DetectionStrategy::SicMmse)
                            ? sinr_sic(sc, config, bank, i)
                            : sinr_linear(sc, config, bank, i);
    }
  }
  report.mse.resize(k);
  const Mat m = data_covariance(sc, config);
  for (std::size_t i = 0; i < k; ++i) {
    const Vec d = bank.filters.col(i);
    const double quad = dot(d, mat_vec(m, d));
    const double cross = std::sqrt(sc.powers[i]) * sc.gains[i] * dot(d, sc.codes.col(i));
    report.mse[i] = 1.0 + quad - 2.0 * cross;
    report.tmse += report.mse[i];
  }
  return report;
}

}  // namespace cdma
