#include "skel/quadrature.hpp"

#include <numbers>
#include <utility>

namespace skel::quadrature {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > kMaxNodes) throw ContractError("gauss_legendre: n must lie in [1, 4096]");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // i-th root from the right, Newton from a Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dpn] = legendre_with_derivative(n, x);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dpn = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[hi] = x;
    rule.nodes[lo] = -x;
    rule.weights[hi] = w;
    rule.weights[lo] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

QuadratureRule map_halfline(const QuadratureRule& rule, double scale) {
  if (rule.domain != Domain::Reference) throw ContractError("map_halfline: needs a reference rule");
  if (!(scale > 0.0)) throw ContractError("map_halfline: scale must be positive");
  QuadratureRule out;
  out.domain = Domain::HalfLine;
  out.scale = scale;
  out.nodes.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    const double om = 1.0 - u;
    out.nodes.push_back(scale * (1.0 + u) / om);
    out.weights.push_back(rule.weights[i] * 2.0 * scale / (om * om));
  }
  return out;
}

QuadratureRule map_fullline(const QuadratureRule& rule, double scale) {
  if (rule.domain != Domain::Reference) throw ContractError("map_fullline: needs a reference rule");
  if (!(scale > 0.0)) throw ContractError("map_fullline: scale must be positive");
  QuadratureRule out;
  out.domain = Domain::FullLine;
  out.scale = scale;
  out.nodes.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    const double om = 1.0 - u * u;
    out.nodes.push_back(scale * u / om);
    out.weights.push_back(rule.weights[i] * scale * (1.0 + u * u) / (om * om));
  }
  return out;
}

QuadratureRule halfline_rule(int n, double scale) { return map_halfline(gauss_legendre(n), scale); }

QuadratureRule fullline_rule(int n, double scale) { return map_fullline(gauss_legendre(n), scale); }

DiscreteOperator combine(const DiscreteOperator& a, const DiscreteOperator& b, double factor) {
  if (a.size() != b.size() || a.rule.nodes != b.rule.nodes) {
    throw ContractError("combine: operators live on different grids");
  }
  return {a.matrix + factor * b.matrix, a.rule, OperatorKind::Sum};
}

Eigen::VectorXd to_frame(const QuadratureRule& rule, std::span<const double> values) {
  if (values.size() != rule.size()) throw ContractError("to_frame: size mismatch");
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = std::sqrt(rule.weights[i]) * values[i];
  }
  return v;
}

std::vector<double> deweight(const QuadratureRule& rule, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != rule.size()) throw ContractError("deweight: size mismatch");
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) out[i] = v[static_cast<Eigen::Index>(i)] / std::sqrt(rule.weights[i]);
  return out;
}

}  // namespace skel::quadrature
