// SPDX-License-Identifier: Apache-2.0
//
// Packet-success model, efficiency function and the bits-per-Joule utility.
// The efficiency function f(γ) = (1 − e^{−γ})^M is the standard smooth
// surrogate for the BPSK packet-success probability; it vanishes at γ = 0 so
// the utility f(γ)/p stays bounded as p → 0.
#pragma once

namespace cdma {

/// Throughput bookkeeping: packets of `packet_len` symbols carry `info_len`
/// information symbols at `rate` bits/s.
struct UtilityParams {
  int packet_len = 120;  // M
  int info_len = 120;    // L
  double rate = 1e5;     // R, bits/s

  void validate() const;  // throws InvalidValue
};

/// Gaussian tail probability Q(x) = P(Z > x) for Z ~ N(0, 1).
double q_function(double x);

/// Probability that an M-symbol BPSK packet is received error-free at SINR γ:
/// [1 − Q(√(2γ))]^M.
double packet_success(double gamma, int packet_len);

/// Efficiency function f(γ) = (1 − e^{−γ})^M, computed in exp/log1p form so
/// large M does not underflow.
double efficiency(double gamma, int packet_len);

/// f′(γ) = M e^{−γ} (1 − e^{−γ})^{M−1}.
double efficiency_prime(double gamma, int packet_len);

/// The utility-maximizing SINR: the unique positive solution of
/// f(γ) = γ f′(γ), solved via the reduced form e^γ − 1 = Mγ.
/// Throws NoPositiveRoot for packet_len < 2.
double target_sinr(int packet_len);

/// u = R (L/M) f(γ)/p in bits per Joule. Throws ZeroPower for p <= 0.
double utility(double gamma, double power, const UtilityParams& params);

}  // namespace cdma
