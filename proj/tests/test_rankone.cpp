#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "skel/eigensolve.hpp"
#include "skel/errors.hpp"
#include "skel/kernels.hpp"
#include "skel/quadrature.hpp"
#include "skel/rankone.hpp"
#include "skel/skeleton.hpp"

using namespace skel;
using oracle::kPi;

namespace {

const std::vector<double> kTraceAngles{kPi / 3.0, kPi / 2.0, 2.0 * kPi / 3.0, 3.0 * kPi / 4.0};

DiscreteOperator parity_op(Angle th, int sign, const QuadratureRule& rule) {
  return quadrature::nystrom([&](double p, double q) { return kernels::t_parity(th, sign, p, q); }, rule);
}

}  // namespace

TEST_SUITE("rankone") {
  TEST_CASE("g_vec is normalised") {
    const auto rule = quadrature::fullline_rule(400);
    for (int n = 0; n <= 10; ++n) {
      for (double s : {0.5, 1.0, 3.0}) {
        const double norm = rule.integrate([&](double p) { return std::pow(rankone::g_vec(n, s, p), 2); });
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("g_vec values, parity and range") {
    CHECK(rankone::g_vec(0, 0.5, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
    CHECK(rankone::g_vec(0, 0.5, 0.0) == doctest::Approx(0.7511255).epsilon(1e-7));
    for (int n : {1, 3, 7, 41}) {
      for (double p : {0.1, 0.9, 2.5}) CHECK(rankone::g_vec(n, 1.3, -p) == -rankone::g_vec(n, 1.3, p));
    }
    CHECK(std::isfinite(rankone::g_vec(200, 0.01, 3.0)));
    CHECK(rankone::g_vec(200, 50.0, 40.0) == 0.0);
    CHECK_THROWS_AS(rankone::g_vec(-1, 1.0, 1.0), ContractError);
    CHECK_THROWS_AS(rankone::g_vec(2, 0.0, 1.0), ContractError);
  }

  TEST_CASE("term coefficients carry the sign of cos^n") {
    const Angle obtuse{2.0 * kPi / 3.0};
    CHECK(rankone::term(obtuse, 2, 0.7).coefficient > 0.0);
    CHECK(rankone::term(obtuse, 3, 0.7).coefficient < 0.0);
    CHECK(rankone::term(Angle{kPi / 3.0}, 3, 0.7).coefficient > 0.0);
    CHECK(rankone::term(Angle{kPi / 2.0}, 1, 0.7).coefficient == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("closed-form traces") {
    const auto right = rankone::trace_formulas(Angle{kPi / 2.0});
    CHECK(right.tr_total == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(right.tr_plus == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(right.tr_minus == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(right.norm1_total == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rankone::trace_formulas(Angle{2.0 * kPi / 3.0}).tr_total == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-15));
    auto gen = oracle::rng(41);
    std::uniform_real_distribution<double> ang(0.05, kPi - 0.05);
    for (int i = 0; i < 1000; ++i) {
      const auto f = rankone::trace_formulas(Angle{ang(gen)});
      CHECK(f.tr_plus + f.tr_minus == doctest::Approx(f.tr_total).epsilon(1e-13));
      CHECK(f.norm1_minus == doctest::Approx(std::abs(f.tr_minus)).epsilon(1e-13));
    }
  }

  TEST_CASE("numeric traces match the closed forms") {
    const auto rule = quadrature::halfline_rule(400);
    for (double th : kTraceAngles) {
      const Angle a{th};
      const auto f = rankone::trace_formulas(a);
      const double tp = eigensolve::trace(parity_op(a, +1, rule).matrix);
      const double tm = eigensolve::trace(parity_op(a, -1, rule).matrix);
      CHECK(std::abs(tp - f.tr_plus) <= 1e-4 * f.tr_plus);
      if (std::abs(f.tr_minus) < 1e-15) {
        CHECK(tm == 0.0);
      } else {
        CHECK(std::abs(tm - f.tr_minus) <= 1e-4 * std::abs(f.tr_minus));
      }
      CHECK(std::abs(tp + tm - f.tr_total) <= 1e-4 * f.tr_total);
    }
  }

  TEST_CASE("numeric trace norms match the closed forms") {
    const auto rule = quadrature::halfline_rule(400);
    for (double th : kTraceAngles) {
      const Angle a{th};
      const auto f = rankone::trace_formulas(a);
      CHECK(std::abs(eigensolve::trace_norm(parity_op(a, -1, rule).matrix) - f.norm1_minus) <= 1e-4 * f.norm1_total);
      const double n1 = eigensolve::trace_norm(parity_op(a, +1, rule).matrix) +
                        eigensolve::trace_norm(parity_op(a, -1, rule).matrix);
      CHECK(std::abs(n1 - f.norm1_total) <= 1e-4 * f.norm1_total);
    }
  }

  TEST_CASE("sign structure of the parity parts") {
    const auto rule = quadrature::halfline_rule(200);
    for (double frac : {0.5, 0.6, 2.0 / 3.0, 0.8, 0.95}) {
      const Angle a = Angle::from_pi_fraction(frac);
      CHECK(eigensolve::eigvalsh(parity_op(a, +1, rule).matrix).minCoeff() >= -1e-9);
      CHECK(eigensolve::eigvalsh(-parity_op(a, -1, rule).matrix).minCoeff() >= -1e-9);
    }
    // Below the right angle the sign of T^- flips.
    const Angle acute = Angle::from_pi_fraction(0.3);
    CHECK(eigensolve::eigvalsh(parity_op(acute, -1, rule).matrix).minCoeff() >= -1e-9);
  }

  TEST_CASE("tilde trace-norm bound") {
    const double ref = -4.0 / 3.0 + 5.0 / std::sqrt(3.0) + std::log(3.0) / (std::sqrt(3.0) * kPi);
    CHECK(rankone::tilde_trace_bound(Angle{kPi / 3.0}) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(rankone::tilde_trace_bound(Angle{kPi / 3.0}) == doctest::Approx(1.75532).epsilon(1e-5));
    CHECK(rankone::tilde_trace_bound(Angle{2.0 * kPi / 3.0}) == doctest::Approx(ref).epsilon(1e-13));
    for (double th = 0.1; th < 0.5 * kPi; th += 0.01) {
      const double b = rankone::tilde_trace_bound(Angle{th});
      CHECK(std::isfinite(b));
      CHECK(b > 0.0);
    }
    const auto rule = quadrature::halfline_rule(400);
    const double norm1 = eigensolve::trace_norm(skeleton::build_tilde(Angle{2.0 * kPi / 3.0}, rule).matrix);
    CHECK(norm1 <= 1.38929);
    CHECK(norm1 <= rankone::tilde_trace_bound(Angle{2.0 * kPi / 3.0}));
    CHECK_THROWS_AS(rankone::tilde_trace_bound(Angle{0.0}), SingularAngleError);
  }

  TEST_CASE("tilde bound dominates the numeric trace norm along the sweep range") {
    const auto rule = quadrature::halfline_rule(200);
    for (double frac = 0.52; frac < 0.97; frac += 0.05) {
      const Angle a = Angle::from_pi_fraction(frac);
      CHECK(eigensolve::trace_norm(skeleton::build_tilde(a, rule).matrix) <= rankone::tilde_trace_bound(a));
    }
  }

  TEST_CASE("hilbert-schmidt norm of the tilde operator") {
    const auto rule = quadrature::halfline_rule(400);
    CHECK(std::abs(eigensolve::frobenius(skeleton::build_tilde(Angle{2.0 * kPi / 3.0}, rule).matrix) - 1.01327) <= 1e-2);
  }

  TEST_CASE("coefficient mass identity") {
    const Angle obtuse{2.0 * kPi / 3.0};
    CHECK(rankone::coefficient_mass_closed_form(obtuse) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    const auto u = quadrature::halfline_rule(200);
    CHECK(std::abs(rankone::coefficient_mass(obtuse, 60, u) - 1.0 / std::sqrt(2.0)) <= 1e-8);
    double sum = 0.0;
    for (int n = 0; n < 200; ++n) sum += rankone::degree_mass(obtuse, n);
    CHECK(sum == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }

  TEST_CASE("truncated decomposition") {
    const auto u = quadrature::halfline_rule(200);
    const auto p = quadrature::fullline_rule(120);
    const Angle right{kPi / 2.0};
    const auto one = rankone::truncated_decomposition(right, 1, u, p);
    const auto ref_right = quadrature::nystrom([&](double x, double y) { return kernels::t_theta(right, 1.0, x, y); }, p);
    // only the s-quadrature error remains; it must shrink under refinement
    const double coarse = (one.op.matrix - ref_right.matrix).norm();
    const auto fine = rankone::truncated_decomposition(right, 1, quadrature::halfline_rule(400), p);
    const double refined = (fine.op.matrix - ref_right.matrix).norm();
    CHECK(coarse <= 1e-5);
    CHECK(refined <= 1e-9);
    CHECK(refined < coarse);
    CHECK(one.tail_bound == 0.0);

    const Angle obtuse{2.0 * kPi / 3.0};
    const auto ref = quadrature::nystrom([&](double x, double y) { return kernels::t_theta(obtuse, 1.0, x, y); }, p);
    const auto d60 = rankone::truncated_decomposition(obtuse, 60, u, p);
    CHECK((d60.op.matrix - ref.matrix).norm() <= 1e-3);
    const auto d20 = rankone::truncated_decomposition(obtuse, 20, u, p);
    CHECK(d60.tail_bound < d20.tail_bound);
    CHECK((d60.op.matrix - ref.matrix).norm() <= (d20.op.matrix - ref.matrix).norm());
    CHECK_THROWS_AS(rankone::truncated_decomposition(obtuse, 0, u, p), ContractError);
  }
}
