#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "skel/errors.hpp"

namespace skel {

enum class Domain { Reference, HalfLine, FullLine };

/// Nodes (strictly increasing) and positive weights on one of three domains.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Domain domain = Domain::Reference;
  double scale = 1.0;  ///< map scale L; 1 for the reference rule

  std::size_t size() const { return nodes.size(); }

  /// Sum of w_i f(x_i).
  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

enum class OperatorKind { Integral, Multiplication, Sum };

/// Symmetric matrix of a discretized operator in the symmetrized Nystrom frame:
/// entries sqrt(w_i w_j) K(p_i, p_j) for kernels, m(p_i) on the diagonal for
/// multiplication operators.
struct DiscreteOperator {
  Eigen::MatrixXd matrix;
  QuadratureRule rule;
  OperatorKind kind = OperatorKind::Integral;

  Eigen::Index size() const { return matrix.rows(); }
};

namespace quadrature {

inline constexpr int kMaxNodes = 4096;

/// n-point Gauss-Legendre rule on (-1, 1), 1 <= n <= 4096.
QuadratureRule gauss_legendre(int n);

/// p = L (1+u)/(1-u): reference rule to (0, inf).
QuadratureRule map_halfline(const QuadratureRule& rule, double scale = 1.0);

/// p = L u/(1-u^2): reference rule to (-inf, inf).
QuadratureRule map_fullline(const QuadratureRule& rule, double scale = 1.0);

/// Shorthands for gauss_legendre followed by the map.
QuadratureRule halfline_rule(int n, double scale = 1.0);
QuadratureRule fullline_rule(int n, double scale = 1.0);

/// Symmetrized Nystrom matrix of a symmetric kernel. Only the upper triangle
/// is evaluated and mirrored, so the result is exactly symmetric.
template <class Kernel>
DiscreteOperator nystrom(Kernel&& kernel, const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd sw(n);
  for (Eigen::Index i = 0; i < n; ++i) sw[i] = std::sqrt(rule.weights[i]);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = sw[i] * sw[j] * kernel(rule.nodes[i], rule.nodes[j]);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return {std::move(a), rule, OperatorKind::Integral};
}

/// Diagonal matrix m(p_i); multiplication operators carry no quadrature weights.
template <class Fn>
DiscreteOperator diag_multiplication(Fn&& m, const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = m(rule.nodes[i]);
  return {std::move(a), rule, OperatorKind::Multiplication};
}

/// a + factor * b on the same rule.
DiscreteOperator combine(const DiscreteOperator& a, const DiscreteOperator& b, double factor = 1.0);

/// sqrt(w_i) f(p_i): a function sampled into the Nystrom frame.
Eigen::VectorXd to_frame(const QuadratureRule& rule, std::span<const double> values);

/// v_i / sqrt(w_i): frame vector back to function samples.
std::vector<double> deweight(const QuadratureRule& rule, const Eigen::VectorXd& v);

}  // namespace quadrature
}  // namespace skel
