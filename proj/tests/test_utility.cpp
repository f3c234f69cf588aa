// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "cdma/errors.hpp"
#include "cdma/utility.hpp"

using namespace cdma;

TEST_SUITE("utilityfn") {

TEST_CASE("q_function reference points") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
  CHECK(q_function(40.0) < 1e-300);  // -> 0 in the tail
  // monotone non-increasing
  double prev = 1.0;
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    const double q = q_function(x);
    CHECK(q <= prev);
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);
    prev = q;
  }
}

TEST_CASE("packet_success reference points") {
  for (int m : {1, 2, 50, 120})
    CHECK(packet_success(0.0, m) == doctest::Approx(std::pow(2.0, -m)).epsilon(1e-12));
  CHECK(packet_success(50.0, 120) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(packet_success(2.0, 1) == doctest::Approx(0.9772498680518208).epsilon(1e-12));
  // increasing in gamma
  double prev = 0.0;
  for (double g = 0.0; g < 12.0; g += 0.2) {
    const double p = packet_success(g, 120);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("efficiency reference points") {
  CHECK(efficiency(0.0, 120) == 0.0);
  CHECK(efficiency(std::log(2.0), 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(efficiency(6.689, 120) - 0.8611) <= 1e-4);
  // strictly increasing, limit 1
  double prev = -1.0;
  for (double g = 0.0; g <= 40.0; g += 0.5) {
    const double f = efficiency(g, 120);
    CHECK(f > prev);
    CHECK(f < 1.0);
    prev = f;
  }
  CHECK(efficiency(60.0, 120) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("efficiency does not underflow at large M") {
  CHECK(efficiency(0.05, 5000) > 0.0);
  CHECK(std::isfinite(efficiency(0.05, 5000)));
}

TEST_CASE("efficiency_prime closed forms") {
  CHECK(efficiency_prime(0.0, 2) == 0.0);
  CHECK(efficiency_prime(0.0, 120) == 0.0);
  for (double g : {0.1, 1.0, 3.0})
    CHECK(efficiency_prime(g, 1) == doctest::Approx(std::exp(-g)).epsilon(1e-14));
  CHECK(efficiency_prime(1.0, 2) ==
        doctest::Approx(2.0 * std::exp(-1.0) * (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(efficiency_prime(1.0, 2) == doctest::Approx(0.46509).epsilon(1e-4));
}

TEST_CASE("efficiency_prime matches centered finite differences") {
  for (int m : {2, 10, 120}) {
    for (double g = 0.1; g <= 20.0; g += 0.37) {
      const double h = 3e-6 * g;
      const double fd = (efficiency(g + h, m) - efficiency(g - h, m)) / (2.0 * h);
      const double an = efficiency_prime(g, m);
      CHECK(an == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("target_sinr reference points and residuals") {
  const double g120 = target_sinr(120);
  CHECK(std::abs(g120 - 6.689) <= 1e-3);
  CHECK(std::abs(10.0 * std::log10(g120) - 8.25) <= 1e-2);
  CHECK(std::abs(target_sinr(2) - 1.2564) <= 1e-3);
  CHECK_THROWS_WITH_AS(target_sinr(1), doctest::Contains("NoPositiveRoot"), Error);

  for (int m : {2, 10, 50, 100, 120, 500}) {
    const double g = target_sinr(m);
    CHECK(g > 0.0);
    CHECK(std::abs(std::expm1(g) - m * g) <= 1e-8 * m * g);
    CHECK(std::abs(efficiency(g, m) - g * efficiency_prime(g, m)) <= 1e-10);
  }
}

TEST_CASE("f(gamma)/gamma is maximized at the target SINR") {
  for (int m : {2, 10, 50, 100, 120, 500}) {
    const double gbar = target_sinr(m);
    auto ratio = [m](double g) { return efficiency(g, m) / g; };
    CHECK(ratio(gbar * 1.01) < ratio(gbar));
    CHECK(ratio(gbar * 0.99) < ratio(gbar));
  }
}

TEST_CASE("efficiency sits below the true packet-success curve") {
  for (int m : {100, 120})
    for (double g = 0.3; g <= 30.0; g += 0.1)
      CHECK(efficiency(g, m) <= packet_success(g, m));
}

TEST_CASE("utility reference points") {
  const UtilityParams params{120, 120, 1e5};
  CHECK(utility(0.0, 2.0, params) == 0.0);
  // doubling power halves utility exactly
  const double u1 = utility(3.0, 1.5, params);
  CHECK(utility(3.0, 3.0, params) == 0.5 * u1);
  CHECK(std::abs(utility(6.689, 1.0, params) - 8.611e4) <= 10.0);
  CHECK_THROWS_WITH_AS(utility(1.0, 0.0, params), doctest::Contains("ZeroPower"), Error);
}

TEST_CASE("utility params are validated") {
  CHECK_THROWS_WITH_AS(utility(1.0, 1.0, UtilityParams{1, 1, 1e5}),
                       doctest::Contains("InvalidValue"), Error);
  CHECK_THROWS_WITH_AS(utility(1.0, 1.0, UtilityParams{120, 121, 1e5}),
                       doctest::Contains("InvalidValue"), Error);
  CHECK_THROWS_WITH_AS(utility(1.0, 1.0, UtilityParams{120, 120, 0.0}),
                       doctest::Contains("InvalidValue"), Error);
}

}  // TEST_SUITE
