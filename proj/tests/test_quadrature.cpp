#include <cmath>

#include "doctest.h"
#include "freelunch/errors.hpp"
#include "freelunch/quadrature.hpp"

using namespace freelunch;

TEST_CASE("polynomials and smooth integrands") {
  auto sq = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sq.abs_error <= 1e-9);

  auto s = integrate([](double x) { return std::sin(x); }, 0.0, 1.0);
  CHECK(s.value == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-12));

  // Rapid oscillation forces adaptive splitting.
  auto osc = integrate([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0, 1e-10);
  CHECK(osc.value == doctest::Approx((1.0 - std::cos(40.0)) / 40.0).epsilon(1e-9));
}

TEST_CASE("zero integral needs the absolute floor") {
  const double two_pi = 8.0 * std::atan(1.0);
  auto r = integrate([](double x) { return std::sin(x); }, 0.0, two_pi, 1e-10, 1e-12);
  CHECK(std::abs(r.value) <= 1e-10);
}

TEST_CASE("left-endpoint power weights") {
  // g == 1 gives the pure power: integral of x^p over (0,1) is 1/(p+1).
  auto half = integrate_left_power([](double) { return 1.0; }, 0.0, 1.0, -0.5);
  CHECK(half.value == doctest::Approx(2.0).epsilon(1e-10));

  auto q = integrate_left_power([](double) { return 1.0; }, 0.0, 1.0, -0.75);
  CHECK(q.value == doctest::Approx(4.0).epsilon(1e-10));

  // Smooth factor: integral of cos(x) x^{-1/2} over (0,1), series value.
  double series = 0.0;
  double sign = 1.0, fact = 1.0;
  for (int k = 0; k < 20; ++k) {
    if (k > 0) {
      sign = -sign;
      fact *= (2.0 * k - 1.0) * (2.0 * k);
    }
    series += sign / (fact * (2.0 * k + 0.5));
  }
  auto c = integrate_left_power([](double x) { return std::cos(x); }, 0.0, 1.0, -0.5);
  CHECK(c.value == doctest::Approx(series).epsilon(1e-10));

  // Shifted interval: integral of (x-2)^{-1/2} over (2,3) equals 2.
  auto sh = integrate_left_power([](double) { return 1.0; }, 2.0, 3.0, -0.5);
  CHECK(sh.value == doctest::Approx(2.0).epsilon(1e-10));

  CHECK_THROWS_AS(integrate_left_power([](double) { return 1.0; }, 0.0, 1.0, -1.0),
                  DivergentIntegral);
}

TEST_CASE("non-integrable integrands fail loudly") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0),
                  std::runtime_error);
  CHECK_THROWS_AS(
      integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, 1e-10),
      std::runtime_error);
}

TEST_CASE("interval validation") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), DomainError);
}
