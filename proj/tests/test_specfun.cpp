#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "skel/errors.hpp"
#include "skel/specfun.hpp"

using namespace skel;

TEST_SUITE("specfun") {
  TEST_CASE("log_gamma at known points") {
    CHECK(specfun::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(specfun::log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(specfun::log_gamma(0.5) == doctest::Approx(0.5 * std::log(oracle::kPi)).epsilon(1e-13));
    CHECK(specfun::log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
    CHECK(specfun::log_gamma(0.5) == doctest::Approx(0.5723649).epsilon(1e-7));
    CHECK(specfun::log_gamma(10.0) == doctest::Approx(12.8018275).epsilon(1e-8));
  }

  TEST_CASE("log_gamma matches std::lgamma to 1e-12 relative on [0.5, 200]") {
    for (double x = 0.5; x <= 200.0; x += 0.173) {
      const double ref = std::lgamma(x);
      const double got = specfun::log_gamma(x);
      // Near the zeros of ln Gamma (x = 1, 2) compare absolutely.
      const double scale = std::max(std::abs(ref), 1.0);
      CHECK(std::abs(got - ref) <= 1e-12 * scale);
    }
  }

  TEST_CASE("log_gamma recurrence") {
    for (double x = 0.3; x < 150.0; x *= 1.37) {
      CHECK(specfun::log_gamma(x + 1.0) - specfun::log_gamma(x) ==
            doctest::Approx(std::log(x)).epsilon(1e-12).scale(1.0));
    }
  }

  TEST_CASE("log_gamma rejects non-positive arguments") {
    CHECK_THROWS_AS(specfun::log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(specfun::log_gamma(-2.5), DomainError);
  }

  TEST_CASE("bessel_k0 reference values") {
    CHECK(specfun::bessel_k0(1.0) == doctest::Approx(0.42102444).epsilon(1e-8));
    CHECK(specfun::bessel_k0(0.1) == doctest::Approx(2.42706902).epsilon(1e-8));
  }

  TEST_CASE("bessel_k0 against the integral representation") {
    for (double x : {0.05, 0.3, 1.0, 1.9, 2.0, 2.1, 4.0, 9.0, 20.0}) {
      CHECK(specfun::bessel_k0(x) == doctest::Approx(oracle::k0_integral(x)).epsilon(1e-9));
    }
  }

  TEST_CASE("bessel_k0 relative error below 1e-8 on [1e-6, 50]") {
    for (double x = 1e-6; x <= 50.0; x *= 1.05) {
      const double ref = std::cyl_bessel_k(0.0, x);
      CHECK(std::abs(specfun::bessel_k0(x) - ref) <= 1e-8 * ref);
    }
  }

  TEST_CASE("bessel_k0 large-argument asymptotics") {
    CHECK(specfun::bessel_k0(20.0) == doctest::Approx(oracle::k0_asymptotic(20.0)).epsilon(1e-6));
    // Leading term alone is off by about 1/(8x).
    const double lead = std::sqrt(oracle::kPi / 40.0) * std::exp(-20.0);
    CHECK(specfun::bessel_k0(20.0) / lead == doctest::Approx(1.0 - 1.0 / 160.0).epsilon(1e-4));
  }

  TEST_CASE("bessel_k0 is positive, decreasing and convex") {
    double prev2 = specfun::bessel_k0(0.01);
    double prev = specfun::bessel_k0(0.02);
    for (double x = 0.03; x < 40.0; x += 0.01) {
      const double v = specfun::bessel_k0(x);
      CHECK(v > 0.0);
      CHECK(v < prev);
      CHECK(v - 2.0 * prev + prev2 >= -1e-14 * prev);
      prev2 = prev;
      prev = v;
    }
  }

  TEST_CASE("bessel_k0 rejects non-positive arguments") {
    CHECK_THROWS_AS(specfun::bessel_k0(0.0), DomainError);
    CHECK_THROWS_AS(specfun::bessel_k0(-1.0), DomainError);
  }

  TEST_CASE("bessel_i0_series") {
    CHECK(specfun::bessel_i0_series(0.0) == 1.0);
    for (double x : {0.1, 0.7, 1.5, 2.0}) {
      CHECK(specfun::bessel_i0_series(x) == doctest::Approx(std::cyl_bessel_i(0.0, x)).epsilon(1e-14));
    }
  }
}
