#pragma once

#include <functional>
#include <vector>

#include "skel/kernels.hpp"
#include "skel/quadrature.hpp"

namespace skel {

/// Scaled sector operator T_0 + beta T_theta^alpha on the half-line grid.
struct SectorOperator {
  static constexpr double essential_edge = kernels::kEssentialEdge;

  Angle theta;
  SectorLabel sector;  ///< skeleton labels (parity, exchange)
  DiscreteOperator op;
};

/// Eigenvalue k above the essential edge, with the eigenvector as function samples.
struct BoundState {
  double k = 0.0;
  double refinement_error = 0.0;  ///< |k(n) - k(2n)|
  std::vector<double> phi;        ///< momentum-space samples on the operator's nodes
};

struct RayleighCheck {
  double rayleigh = 0.0;
  double residual = 0.0;  ///< ||A v - rho v|| / ||v||
  double norm_sq = 0.0;   ///< quadrature value of int phi^2 over the grid's domain
};

/// Pairwise angles between the three wire directions.
struct WireAngles {
  double theta12 = 0.0;
  double theta23 = 0.0;
  double theta13 = 0.0;

  /// Throws ContractError if no planar arrangement of unit vectors has these mutual angles.
  void validate() const;
};

/// Discretized S(k) = g^{-1} + tau R_0(-k^2) tau^*. Two blocks when lambda = 0.
struct GeneralSkeleton {
  double k = 0.0;
  WireAngles angles;
  double lambda = 0.0;
  int blocks = 3;
  bool outside_proof_range = false;  ///< lambda in [-1, 0)
  DiscreteOperator op;               ///< block matrix; op.rule is the per-block grid
};

struct ZeroCrossing {
  double k = 0.0;
  double energy = 0.0;
  int multiplicity = 1;
};

struct UnresolvedInterval {
  double k_lo = 0.0;
  double k_hi = 0.0;
};

struct ZeroCrossingResult {
  std::vector<ZeroCrossing> crossings;
  std::vector<UnresolvedInterval> unresolved;
};

namespace skeleton {

inline constexpr double kDefaultMargin = 1e-6;
inline constexpr double kClusterTolerance = 1e-6;

/// T_0 + beta K^alpha with both parts assembled on a half-line rule.
SectorOperator build_sector(Angle theta, int alpha, int beta, const QuadratureRule& rule);

/// Rayleigh quotient and residual of the sampled function phi for a discretized operator.
RayleighCheck apply_exact_vector(const DiscreteOperator& op, const std::function<double(double)>& phi);

/// Nystrom matrix of the weighted odd kernel.
DiscreteOperator build_tilde(Angle theta, const QuadratureRule& rule);

/// Eigenvalues k > edge + margin, each confirmed on a grid with twice the nodes
/// (same map scale) to within margin / 10. Descending in k.
/// Throws ContractError for margin <= 0 and NumericalError if a candidate is not
/// reproduced under refinement.
std::vector<BoundState> bound_states(const SectorOperator& op, double margin = kDefaultMargin);

/// Assemble S(k) on a full-line rule. lambda = 0 drops the third wire.
GeneralSkeleton build_general(double k, const WireAngles& angles, double lambda, const QuadratureRule& rule);

/// Values of k in [k_lo, k_hi] where S(k) has a zero eigenvalue.
ZeroCrossingResult zero_crossings(const WireAngles& angles, double lambda, const QuadratureRule& rule,
                                  double k_lo, double k_hi, int k_steps);

}  // namespace skeleton
}  // namespace skel
