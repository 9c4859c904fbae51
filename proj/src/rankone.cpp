#include "skel/rankone.hpp"

#include <cmath>
#include <numbers>

#include "skel/errors.hpp"
#include "skel/specfun.hpp"

namespace skel::rankone {

using specfun::log_gamma;
constexpr double kPi = std::numbers::pi;

double g_vec(int n, double s, double p) {
  if (n < 0) throw ContractError("g_vec: degree must be non-negative");
  if (!(s > 0.0)) throw ContractError("g_vec: width must be positive");
  if (p == 0.0) return n == 0 ? std::exp(0.5 * (0.5 * std::log(2.0 * s) - log_gamma(0.5))) : 0.0;
  const double nh = n + 0.5;
  const double log_mag = 0.5 * (nh * std::log(2.0 * s) - log_gamma(nh)) + n * std::log(std::abs(p)) - s * p * p;
  const double mag = std::exp(log_mag);
  return (n % 2 == 1 && p < 0.0) ? -mag : mag;
}

RankOneTerm term(Angle theta, int n, double s) {
  kernels::require_regular(theta);
  const double sn = std::sin(theta.radians);
  const double co = kernels::cosine(theta);
  const double ratio = std::exp(log_gamma(n + 0.5) - log_gamma(n + 1.0));
  const double cos_n = std::pow(co, n);
  const double c = std::numbers::sqrt2 / 2.0 * (sn / kPi) * ratio * cos_n / std::sqrt(s) *
                   std::exp(-2.0 * sn * sn * s);
  return {n, s, c};
}

double degree_mass(Angle theta, int n) {
  const double ratio = std::exp(log_gamma(n + 0.5) - log_gamma(n + 1.0));
  return ratio * std::pow(std::abs(kernels::cosine(theta)), n) / (2.0 * std::sqrt(kPi));
}

double coefficient_mass(Angle theta, int terms, const QuadratureRule& u_rule) {
  kernels::require_regular(theta);
  if (u_rule.domain != Domain::HalfLine) throw ContractError("coefficient_mass: needs a half-line rule");
  const double sn = std::sin(theta.radians);
  const double co = std::abs(kernels::cosine(theta));
  // int_0^inf s^{-1/2} e^{-2 sin^2 s} ds = int_0^inf 2 e^{-2 sin^2 u^2} du
  const double s_integral = u_rule.integrate([&](double u) { return 2.0 * std::exp(-2.0 * sn * sn * u * u); });
  double sum = 0.0;
  for (int n = 0; n < terms; ++n) {
    sum += std::exp(log_gamma(n + 0.5) - log_gamma(n + 1.0)) * std::pow(co, n);
  }
  return std::numbers::sqrt2 / 2.0 * (sn / kPi) * sum * s_integral;
}

double coefficient_mass_closed_form(Angle theta) {
  return 0.5 / std::sqrt(1.0 - std::abs(kernels::cosine(theta)));
}

TruncatedDecomposition truncated_decomposition(Angle theta, int terms, const QuadratureRule& u_rule,
                                               const QuadratureRule& p_rule) {
  kernels::require_regular(theta);
  if (terms < 1) throw ContractError("truncated_decomposition: need at least one term");
  if (u_rule.domain != Domain::HalfLine) throw ContractError("truncated_decomposition: s-rule must be half-line");

  const auto np = static_cast<Eigen::Index>(p_rule.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(np, np);
  Eigen::VectorXd g(np);
  // Fixed ascending order in n, then in u, keeps the sum bit-stable.
  for (int n = 0; n < terms; ++n) {
    for (std::size_t iu = 0; iu < u_rule.size(); ++iu) {
      const double u = u_rule.nodes[iu];
      const double s = u * u;
      // s^{-1/2} ds = 2 du
      const double weight = term(theta, n, s).coefficient * std::sqrt(s) * 2.0 * u_rule.weights[iu];
      if (weight == 0.0) continue;
      for (Eigen::Index i = 0; i < np; ++i) {
        g[i] = std::sqrt(p_rule.weights[static_cast<std::size_t>(i)]) * g_vec(n, s, p_rule.nodes[static_cast<std::size_t>(i)]);
      }
      acc.selfadjointView<Eigen::Upper>().rankUpdate(g, weight);
    }
  }
  acc.triangularView<Eigen::StrictlyLower>() = acc.transpose();

  const double co = std::abs(kernels::cosine(theta));
  double tail = 0.0;
  if (co > 0.0) {
    tail = std::exp(log_gamma(terms + 0.5) - log_gamma(terms + 1.0)) / (2.0 * std::sqrt(kPi)) *
           std::pow(co, terms) / (1.0 - co);
  }
  return {DiscreteOperator{std::move(acc), p_rule, OperatorKind::Sum}, terms, tail};
}

TraceFormulas trace_formulas(Angle theta) {
  kernels::require_regular(theta);
  const double sn = std::sin(theta.radians);
  const double ch = std::cos(0.5 * theta.radians);
  const double sh = std::sin(0.5 * theta.radians);
  const double r8 = 2.0 * std::numbers::sqrt2;
  TraceFormulas f;
  f.tr_plus = (ch + sh) / (r8 * sn);
  f.tr_minus = (ch - sh) / (r8 * sn);
  f.norm1_minus = std::abs(ch - sh) / (r8 * sn);
  f.tr_total = 1.0 / (r8 * sh);
  f.norm1_total = std::max(ch, sh) / (std::numbers::sqrt2 * sn);
  return f;
}

double tilde_trace_bound(Angle theta) {
  kernels::require_regular(theta);
  double t = theta.radians;
  if (t > 0.5 * kPi) t = kPi - t;
  const double sn = std::sin(t);
  const double co = std::cos(t);
  const double ch = std::cos(0.5 * t);
  const double sh = std::sin(0.5 * t);
  // Summed contributions of the four bounding series.
  const double a1 = 0.5 * (ch - sh);
  const double a2 = 0.5 * co / sn * (ch + sh);
  const double a3 = 2.0 / (sn * sn) * (ch - sh);
  const double a4 = std::atanh(co) / (kPi * sn);
  return a1 + a2 + a3 + a4;
}

}  // namespace skel::rankone
