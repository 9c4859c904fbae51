#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "skel/eigensolve.hpp"
#include "skel/errors.hpp"
#include "skel/kernels.hpp"
#include "skel/quadrature.hpp"

using namespace skel;
using oracle::kPi;

TEST_SUITE("quadrature") {
  TEST_CASE("small Gauss-Legendre rules") {
    const auto one = quadrature::gauss_legendre(1);
    CHECK(one.nodes[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(one.weights[0] == doctest::Approx(2.0));
    const auto two = quadrature::gauss_legendre(2);
    CHECK(two.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(quadrature::gauss_legendre(3).integrate([](double x) { return x * x * x * x; }) ==
          doctest::Approx(0.4).epsilon(1e-15));
  }

  TEST_CASE("rule size limits") {
    CHECK_THROWS_AS(quadrature::gauss_legendre(0), ContractError);
    CHECK_THROWS_AS(quadrature::gauss_legendre(4097), ContractError);
    CHECK(quadrature::gauss_legendre(4096).size() == 4096);
  }

  TEST_CASE("exactness up to degree 2n-1 and rule invariants") {
    for (int n : {1, 2, 5, 16, 64, 200, 1000}) {
      const auto r = quadrature::gauss_legendre(n);
      CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-13));
      for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r.weights[i] > 0.0);
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
      }
      for (int d : {0, 1, 2 * n - 2, 2 * n - 1}) {
        if (d < 0) continue;
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::abs(r.integrate([d](double x) { return std::pow(x, d); }) - exact) <= 1e-12);
      }
    }
  }

  TEST_CASE("half-line map") {
    const auto r200 = quadrature::halfline_rule(200);
    CHECK(r200.domain == Domain::HalfLine);
    CHECK(r200.integrate([](double p) { return std::exp(-p); }) == doctest::Approx(1.0).epsilon(1e-10));
    const auto r400 = quadrature::halfline_rule(400);
    CHECK(std::abs(r400.integrate([](double p) { return 1.0 / (p * p + 1.0); }) - 0.5 * kPi) <= 1e-8);
    CHECK(std::abs(r400.integrate([](double p) { return std::pow(kernels::t0(1.0, p), 2); }) - kPi / (2.0 * std::sqrt(2.0))) <= 1e-8);
    for (std::size_t i = 0; i < r400.size(); ++i) {
      CHECK(r400.nodes[i] > 0.0);
      CHECK(r400.weights[i] > 0.0);
    }
    const auto scaled = quadrature::halfline_rule(300, 2.5);
    CHECK(scaled.scale == 2.5);
    CHECK(scaled.integrate([](double p) { return std::exp(-p); }) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(quadrature::map_halfline(r200), ContractError);
  }

  TEST_CASE("full-line map") {
    const auto r = quadrature::fullline_rule(400);
    CHECK(r.domain == Domain::FullLine);
    CHECK(r.integrate([](double p) { return std::exp(-p * p); }) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
    CHECK(std::abs(r.integrate([](double p) { return 1.0 / (p * p + 1.0); }) - kPi) <= 1e-8);
  }

  TEST_CASE("nystrom assembly") {
    const auto rule = quadrature::halfline_rule(400);
    const Angle right{0.5 * kPi};
    double tr = 0.0;
    for (int s : {+1, -1}) {
      tr += eigensolve::trace(
          quadrature::nystrom([&](double p, double q) { return kernels::t_parity(right, s, p, q); }, rule).matrix);
    }
    CHECK(std::abs(tr - 0.5) <= 1e-4);

    const auto full = quadrature::fullline_rule(400);
    const auto t = quadrature::nystrom([&](double p, double q) { return kernels::t_theta(right, 1.0, p, q); }, full);
    CHECK(std::abs(eigensolve::frobenius(t.matrix) - 1.0 / std::sqrt(2.0 * kPi)) <= 1e-3);
    CHECK(t.matrix == t.matrix.transpose());
    CHECK(t.kind == OperatorKind::Integral);

    const auto zero = quadrature::nystrom([](double, double) { return 0.0; }, rule);
    CHECK(zero.matrix.isZero(0.0));

    // sqrt(w_i w_j) K(p_i, p_j) convention.
    const auto small = quadrature::halfline_rule(7);
    const auto m = quadrature::nystrom([](double p, double q) { return p + q; }, small);
    CHECK(m.matrix(2, 5) == doctest::Approx(std::sqrt(small.weights[2] * small.weights[5]) * (small.nodes[2] + small.nodes[5])));
  }

  TEST_CASE("diagonal multiplication") {
    const auto rule = quadrature::halfline_rule(400);
    const auto d = quadrature::diag_multiplication([](double p) { return kernels::t0(1.0, p); }, rule);
    CHECK(d.kind == OperatorKind::Multiplication);
    CHECK(d.matrix.maxCoeff() < std::sqrt(0.5));
    CHECK(d.matrix.maxCoeff() > std::sqrt(0.5) - 1e-4);
    CHECK((d.matrix - Eigen::MatrixXd(d.matrix.diagonal().asDiagonal())).isZero(0.0));
    const auto id = quadrature::diag_multiplication([](double) { return 1.0; }, rule);
    CHECK(id.matrix.isIdentity(0.0));
    const auto d2 = quadrature::diag_multiplication([](double p) { return kernels::t0(2.0, p); }, rule);
    CHECK(d2.matrix.maxCoeff() < 1.0 / (2.0 * std::sqrt(2.0)));
  }

  TEST_CASE("combine, frame conversion") {
    const auto rule = quadrature::halfline_rule(20);
    const auto a = quadrature::diag_multiplication([](double) { return 1.0; }, rule);
    const auto b = quadrature::nystrom([](double p, double q) { return std::exp(-p - q); }, rule);
    const auto c = quadrature::combine(a, b, -2.0);
    CHECK(c.kind == OperatorKind::Sum);
    CHECK((c.matrix - (a.matrix - 2.0 * b.matrix)).isZero(0.0));
    CHECK_THROWS_AS(quadrature::combine(a, quadrature::diag_multiplication([](double) { return 1.0; }, quadrature::halfline_rule(21))),
                    ContractError);
    std::vector<double> f(rule.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(rule.nodes[i]);
    const auto back = quadrature::deweight(rule, quadrature::to_frame(rule, f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-14));
  }

  TEST_CASE("assembly is deterministic") {
    const auto rule = quadrature::halfline_rule(150);
    const Angle th{2.0};
    auto build = [&] { return quadrature::nystrom([&](double p, double q) { return kernels::t_parity(th, 1, p, q); }, rule); };
    CHECK(build().matrix == build().matrix);
    CHECK(quadrature::halfline_rule(150).nodes == rule.nodes);
  }

  TEST_CASE("refinement convergence of the top eigenvalue of T^+ at the right angle") {
    const Angle right{0.5 * kPi};
    auto top = [&](int n) {
      const auto rule = quadrature::halfline_rule(n);
      return eigensolve::eigvalsh(
                 quadrature::nystrom([&](double p, double q) { return kernels::t_parity(right, 1, p, q); }, rule).matrix)
          .maxCoeff();
    };
    const double a = top(8), b = top(16), c = top(32);
    CHECK(std::abs(c - b) * 4.0 <= std::abs(b - a));
  }
}
