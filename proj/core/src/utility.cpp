// SPDX-License-Identifier: Apache-2.0
#include "cdma/utility.hpp"

#include <cmath>

#include "cdma/errors.hpp"
#include "cdma/linalg.hpp"

namespace cdma {

void UtilityParams::validate() const {
  if (packet_len < 2) throw Error(ErrorCode::InvalidValue, "packet_len must be >= 2");
  if (info_len < 1 || info_len > packet_len)
    throw Error(ErrorCode::InvalidValue, "info_len must be in [1, packet_len]");
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidValue, "rate must be positive");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double packet_success(double gamma, int packet_len) {
  const double bit_ok = 1.0 - q_function(std::sqrt(2.0 * gamma));
  return std::pow(bit_ok, packet_len);
}

double efficiency(double gamma, int packet_len) {
  if (gamma <= 0.0) return 0.0;
  return std::exp(static_cast<double>(packet_len) * std::log1p(-std::exp(-gamma)));
}

double efficiency_prime(double gamma, int packet_len) {
  const double e = std::exp(-gamma);
  if (packet_len == 1) return e;
  if (gamma <= 0.0) return 0.0;
  return packet_len * std::exp(-gamma + (packet_len - 1) * std::log1p(-e));
}

double target_sinr(int packet_len) {
  // e^γ − 1 − Mγ starts at 0 with slope 1 − M; for M >= 2 it dips negative and
  // the exponential brings it back up through the unique positive root.
  if (packet_len < 2) throw Error(ErrorCode::NoPositiveRoot, "requires packet_len >= 2");
  const double m = packet_len;
  auto residual = [m](double g) { return std::expm1(g) - m * g; };
  const Bracket b = expand_bracket(residual, 1e-9, 2.0, /*grow_hi=*/true);
  return find_root_bisect(residual, b.lo, b.hi, 1e-12);
}

double utility(double gamma, double power, const UtilityParams& params) {
  params.validate();
  if (!(power > 0.0)) throw Error(ErrorCode::ZeroPower, "utility needs positive power");
  const double frame = static_cast<double>(params.info_len) / params.packet_len;
  return params.rate * frame * efficiency(gamma, params.packet_len) / power;
}

}  // namespace cdma
