#include "skel/kernels.hpp"

#include <cmath>

#include "skel/errors.hpp"

namespace skel {

SectorLabel SectorLabel::make(int alpha, int beta) {
  if ((alpha != 1 && alpha != -1) || (beta != 1 && beta != -1)) {
    throw ContractError("sector labels must be +1 or -1");
  }
  return SectorLabel{alpha, beta};
}

EnergyParameter EnergyParameter::make(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("energy parameter k must be positive");
  return EnergyParameter{k};
}

namespace kernels {

namespace {

constexpr double kPi = std::numbers::pi;

// p^2 + q^2 - 2 cos(theta) p q via 1 - cos = 2 sin^2(theta/2) and
// 1 + cos = 2 cos^2(theta/2), picking the form with no cancellation.
double quad_form(Angle theta, double p, double q) {
  const double pq = p * q;
  if (pq >= 0.0) {
    const double sh = std::sin(0.5 * theta.radians);
    return (p - q) * (p - q) + 4.0 * sh * sh * pq;
  }
  const double ch = std::cos(0.5 * theta.radians);
  return (p + q) * (p + q) - 4.0 * ch * ch * pq;
}

// Shared pieces of the k = 1 kernel written as c / (D - e) with
// D = (p^2 + q^2) / (2 sin^2) + 1 and e = cos * p q / sin^2.
// D - e and D + e are taken from quad_form directly.
struct ParityTerms {
  double c;
  double d;
  double e;
  double d_minus_e;
  double d_plus_e;
};

ParityTerms parity_terms(Angle theta, double p, double q) {
  const double s = std::abs(std::sin(theta.radians));
  const double co = cosine(theta);
  const double s2 = s * s;
  return {1.0 / (2.0 * kPi * s), (p * p + q * q) / (2.0 * s2) + 1.0, co * (p * q) / s2,
          quad_form(theta, p, q) / (2.0 * s2) + 1.0, quad_form(theta, p, -q) / (2.0 * s2) + 1.0};
}

}  // namespace

double cosine(Angle theta) { return std::sin(0.5 * kPi - theta.radians); }

void require_regular(Angle theta) {
  if (!std::isfinite(theta.radians) || std::abs(std::sin(theta.radians)) < kSingularSin) {
    throw SingularAngleError("crossing angle too close to 0 or pi");
  }
}

double t_theta(Angle theta, double k, double p, double q) {
  require_regular(theta);
  const double s = std::abs(std::sin(theta.radians));
  const double quad = quad_form(theta, p, q) / (2.0 * s * s);
  return 1.0 / (2.0 * kPi * s) / (quad + k * k);
}

double t0(double k, double p) { return 1.0 / std::sqrt(p * p + 2.0 * k * k); }

double t_sharp(Angle theta, double p, double q) {
  return (1.0 / kPi) / (quad_form(theta, p, q) + 2.0);
}

double t_parity(Angle theta, int sign, double p, double q) {
  require_regular(theta);
  const auto [c, d, e, dm, dp] = parity_terms(theta, p, q);
  const double den = dm * dp;
  return sign > 0 ? 2.0 * c * d / den : 2.0 * c * e / den;
}

double threshold_gap(double p) {
  const double r = std::sqrt(p * p + 2.0);
  return p * p / (std::numbers::sqrt2 * r * (r + std::numbers::sqrt2));
}

double tilde_weight(double p) {
  if (!(p > 0.0)) throw DomainError("tilde_weight: singular at p <= 0");
  return 1.0 / std::sqrt(threshold_gap(p));
}

double tilde_kernel_minus(Angle theta, double p, double q) {
  return tilde_weight(p) * t_parity(theta, -1, p, q) * tilde_weight(q);
}

double dtheta_kernel_minus(Angle theta, double p, double q) {
  require_regular(theta);
  if (theta.radians <= 0.0 || theta.radians >= kPi) {
    throw DomainError("dtheta_kernel_minus: theta must lie in (0, pi)");
  }
  // K^- = 2 c e / (D^2 - e^2); differentiate c, D, e in theta (0 < theta < pi).
  const double s = std::sin(theta.radians);
  const double co = cosine(theta);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const auto [c, d, e, dm, dp] = parity_terms(theta, p, q);
  const double dc = -co / (2.0 * kPi * s2);
  const double dd = -(p * p + q * q) * co / s3;
  const double de = -p * q * (s2 + 2.0 * co * co) / s3;
  const double den = dm * dp;
  return 2.0 * (dc * e + c * de) / den - 2.0 * c * e * (2.0 * d * dd - 2.0 * e * de) / (den * den);
}

}  // namespace kernels
}  // namespace skel
