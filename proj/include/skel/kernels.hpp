#pragma once

#include <numbers>

namespace skel {

/// Crossing angle between two wire directions, in radians.
struct Angle {
  double radians = 0.0;

  constexpr Angle() = default;
  constexpr explicit Angle(double r) : radians(r) {}
  static constexpr Angle from_pi_fraction(double f) { return Angle{f * std::numbers::pi}; }
};

/// Parity labels: alpha for p -> -p, beta for exchange of the two wire components.
struct SectorLabel {
  int alpha = +1;
  int beta = +1;

  /// Throws ContractError unless both labels are +1 or -1.
  static SectorLabel make(int alpha, int beta);
  friend constexpr bool operator==(SectorLabel, SectorLabel) = default;
};

/// Spectral parameter k > 0 with energy E = -k^2.
struct EnergyParameter {
  double k = 1.0;

  /// Throws DomainError unless k > 0.
  static EnergyParameter make(double k);
  double energy() const { return -k * k; }
};

namespace kernels {

/// Top of the continuous spectrum of the scaled T_0, 2^{-1/2}.
inline constexpr double kEssentialEdge = 0.70710678118654752440;

/// |sin theta| below this is rejected as singular.
inline constexpr double kSingularSin = 1e-8;

/// Throws SingularAngleError when |sin theta| < kSingularSin.
void require_regular(Angle theta);

/// cos theta as sin(pi/2 - theta), so the double nearest pi/2 gives exactly 0.
double cosine(Angle theta);

/// Momentum-space kernel of tau_A R_0(-k^2) tau_B^* for wires at angle theta.
double t_theta(Angle theta, double k, double p, double q);

/// Multiplication function of the same-wire operator, 1/sqrt(p^2 + 2k^2).
double t0(double k, double p);

/// Kernel after the unitary scaling p -> p sin(theta); regular for every theta.
double t_sharp(Angle theta, double p, double q);

/// Half-line kernel K^{sign}(p,q) = t(p,q) + sign t(p,-q) at k = 1.
/// Evaluated without the cancellation of the literal difference.
double t_parity(Angle theta, int sign, double p, double q);

/// 2^{-1/2} - t0(1,p), cancellation-free. Behaves like 2^{-5/2} p^2 near 0.
double threshold_gap(double p);

/// (2^{-1/2} - t0(1,p))^{-1/2}. Throws DomainError for p <= 0.
double tilde_weight(double p);

/// tilde_weight(p) * K^-(p,q) * tilde_weight(q).
double tilde_kernel_minus(Angle theta, double p, double q);

/// d/dtheta of t_parity(theta, -1, p, q).
double dtheta_kernel_minus(Angle theta, double p, double q);

}  // namespace kernels
}  // namespace skel
