#pragma once

#include "skel/kernels.hpp"
#include "skel/quadrature.hpp"

namespace skel {

/// One rank-one term of the Gaussian-monomial expansion of T_theta.
struct RankOneTerm {
  int n = 0;                ///< monomial degree
  double s = 0.0;           ///< Gaussian width
  double coefficient = 0.0; ///< weight of |g_{n,s}><g_{n,s}| in the s-integral
};

/// Closed-form traces and trace norms of T_theta and its parity parts.
struct TraceFormulas {
  double tr_plus = 0.0;
  double tr_minus = 0.0;
  double norm1_minus = 0.0;
  double tr_total = 0.0;
  double norm1_total = 0.0;
};

/// Truncated expansion assembled on a momentum grid.
struct TruncatedDecomposition {
  DiscreteOperator op;
  int terms = 0;
  /// Trace-norm bound on the discarded terms n >= terms.
  double tail_bound = 0.0;
};

namespace rankone {

/// Normalised g_{n,s}(p) = sqrt((2s)^{n+1/2} / Gamma(n+1/2)) p^n exp(-s p^2), evaluated in log space.
double g_vec(int n, double s, double p);

/// Term weight 2^{-1/2} (sin/pi) Gamma(n+1/2)/Gamma(n+1) cos^n s^{-1/2} exp(-2 sin^2 s).
RankOneTerm term(Angle theta, int n, double s);

/// Trace norm carried by degree n after the s-integration:
/// Gamma(n+1/2) / (2 sqrt(pi) Gamma(n+1)) |cos|^n.
double degree_mass(Angle theta, int n);

/// Sum over n < terms of the term weights |coefficient| integrated in s with the
/// given half-line rule (s = u^2 substitution).
double coefficient_mass(Angle theta, int terms, const QuadratureRule& u_rule);

/// 1 / (2 sqrt(1 - |cos theta|)).
double coefficient_mass_closed_form(Angle theta);

/// sum_{n < terms} int ds coefficient(n,s) |g_{n,s}><g_{n,s}| on p_rule nodes.
/// The s-integral uses s = u^2 with the half-line rule u_rule.
TruncatedDecomposition truncated_decomposition(Angle theta, int terms, const QuadratureRule& u_rule,
                                               const QuadratureRule& p_rule);

TraceFormulas trace_formulas(Angle theta);

/// Upper bound on the trace norm of the weighted odd operator; theta in (pi/2, pi)
/// is reflected to pi - theta.
double tilde_trace_bound(Angle theta);

}  // namespace rankone
}  // namespace skel
