#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "skel/kernels.hpp"
#include "skel/quadrature.hpp"
#include "skel/skeleton.hpp"

namespace skel {

/// One bound state of H_theta in the parity sector (alpha, beta) of the Hamiltonian.
/// alpha: parity under y -> -y, beta: parity under x -> -x.
struct BoundStateRow {
  double theta = 0.0;
  SectorLabel sector;
  int index = 0;  ///< 0 = largest k within the sector
  double k = 0.0;
  double energy = 0.0;
  double refinement_error = 0.0;
};

struct BoundStateTable {
  std::vector<BoundStateRow> rows;

  std::vector<BoundStateRow> select(double theta, SectorLabel sector) const;
};

struct GridSpec {
  double x_min = -4.0;
  double x_max = 4.0;
  int nx = 41;
  double y_min = -4.0;
  double y_max = 4.0;
  int ny = 41;
};

/// Psi sampled on a rectangular grid, row-major in y (values[iy * nx + ix]).
struct WavefunctionGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;
  std::vector<char> degraded;  ///< point too close to a wire for the transform to converge fast
  double theta = 0.0;
  SectorLabel sector;
  double k = 0.0;

  double at(std::size_t ix, std::size_t iy) const { return values[iy * xs.size() + ix]; }
};

struct SymmetryError {
  double x_reflection = 0.0;  ///< max |Psi(-x,y) - beta Psi(x,y)|
  double y_reflection = 0.0;  ///< max |Psi(x,-y) - alpha Psi(x,y)|
};

struct CriticalAngleResult {
  double theta_c = 0.0;
  int evaluations = 0;
};

struct FeynmanHellmann {
  double value = 0.0;
  double closed_form = 0.0;
};

namespace scissor {

/// Hamiltonian sector (alpha, beta) -> skeleton sector (alpha beta, beta).
SectorLabel skeleton_sector(SectorLabel hamiltonian_sector);

/// The four Hamiltonian sectors in output order.
std::vector<SectorLabel> all_sectors();

/// n points evenly spaced on [lo, hi] (inclusive); n = 1 gives lo.
std::vector<double> theta_grid(double lo, double hi, int n);

/// Default sweep grid: 64 points on [pi/2, 0.97 pi].
std::vector<double> default_theta_grid();

/// Bound states for every theta and Hamiltonian sector; rows ordered by (theta, sector order, index).
BoundStateTable sweep(const std::vector<double>& thetas, const std::vector<SectorLabel>& sectors,
                      const QuadratureRule& rule, double margin = skeleton::kDefaultMargin);

/// Lowest eigenvalue of the discretized weighted odd operator.
double tilde_lowest(Angle theta, const QuadratureRule& rule);

/// Angle where the lowest tilde eigenvalue crosses -1, by bisection.
/// Throws BracketError without a sign change, NumericalError if monotonicity fails.
CriticalAngleResult critical_angle(const QuadratureRule& rule, double lo = 0.5 * std::numbers::pi,
                                   double hi = 0.97 * std::numbers::pi);

/// d/dtheta of the lowest tilde eigenvalue at 2 pi/3 from the analytic derivative kernel
/// paired with the exact threshold eigenvector.
FeynmanHellmann fh_derivative(const QuadratureRule& rule);

/// Same slope from central differences of the discretized eigenvalue.
double fh_finite_difference(const QuadratureRule& rule, double step = 1e-4);

/// Unit directions of the two wires; A1 . A2 = cos theta, mirror images under x -> -x.
std::array<Eigen::Vector2d, 2> wire_directions(Angle theta);

/// Free Green's function of -Delta/2 + k^2 in the plane, K0(sqrt2 k r) / pi.
double green_function(double k, double r);

/// Psi = R_0(-k^2) tau^* phi from a scaled skeleton eigenvector phi sampled on the
/// half-line rule (momentum space, k = 1 frame). Normalised to max |Psi| = 1.
WavefunctionGrid reconstruct(Angle theta, SectorLabel hamiltonian_sector, double k, const std::vector<double>& phi,
                             const QuadratureRule& rule, const GridSpec& grid);

/// Reflection defects for a grid symmetric about both axes.
SymmetryError symmetry_error(const WavefunctionGrid& grid);

}  // namespace scissor
}  // namespace skel
