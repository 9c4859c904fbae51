#include "skel/scissor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "parallel.hpp"
#include "skel/eigensolve.hpp"
#include "skel/errors.hpp"
#include "skel/specfun.hpp"

namespace skel {

std::vector<BoundStateRow> BoundStateTable::select(double theta, SectorLabel sector) const {
  std::vector<BoundStateRow> out;
  for (const auto& r : rows) {
    if (r.theta == theta && r.sector == sector) out.push_back(r);
  }
  return out;
}

namespace scissor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiOverThree = 2.0 * kPi / 3.0;

// Points closer than this (in units of 1/k) to a wire are flagged: the transform
// integrand then decays too slowly in p for the rule to resolve it.
constexpr double kNearWire = 0.05;

}  // namespace

SectorLabel skeleton_sector(SectorLabel h) { return SectorLabel::make(h.alpha * h.beta, h.beta); }

std::vector<SectorLabel> all_sectors() { return {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}}; }

std::vector<double> theta_grid(double lo, double hi, int n) {
  if (n < 1) throw ContractError("theta_grid: need at least one point");
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

std::vector<double> default_theta_grid() { return theta_grid(0.5 * kPi, 0.97 * kPi, 64); }

BoundStateTable sweep(const std::vector<double>& thetas, const std::vector<SectorLabel>& sectors,
                      const QuadratureRule& rule, double margin) {
  for (double t : thetas) {
    if (!(t >= 0.5 * kPi) || !(t < kPi)) throw ContractError("sweep: theta must lie in [pi/2, pi)");
  }
  std::vector<std::vector<BoundStateRow>> per_theta(thetas.size());
  detail::parallel_for(thetas.size(), [&](std::size_t i) {
    const Angle th{thetas[i]};
    for (const SectorLabel h : sectors) {
      const SectorLabel s = skeleton_sector(h);
      const auto states = skeleton::bound_states(skeleton::build_sector(th, s.alpha, s.beta, rule), margin);
      int index = 0;
      for (const auto& st : states) {
        per_theta[i].push_back({th.radians, h, index++, st.k, -st.k * st.k, st.refinement_error});
      }
    }
  });
  BoundStateTable table;
  for (auto& rows : per_theta) table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  return table;
}

double tilde_lowest(Angle theta, const QuadratureRule& rule) {
  return eigensolve::eigvalsh(skeleton::build_tilde(theta, rule).matrix)[0];
}

CriticalAngleResult critical_angle(const QuadratureRule& rule, double lo, double hi) {
  if (!(lo < hi)) throw ContractError("critical_angle: bracket must satisfy lo < hi");
  std::map<double, double> seen;
  auto f = [&](double t) {
    const double v = tilde_lowest(Angle{t}, rule) + 1.0;
    seen[t] = v;
    // The tracked eigenvalue must decrease with theta.
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : seen) {
      if (y > prev + 1e-9) throw NumericalError("critical_angle: lowest eigenvalue is not monotone in theta");
      prev = y;
    }
    return v;
  };
  double a = lo;
  double b = hi;
  const double fa = f(a);
  const double fb = f(b);
  if (!(fa > 0.0 && fb < 0.0)) throw BracketError("critical_angle: no crossing of -1 inside the bracket");
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (f(m) > 0.0 ? a : b) = m;
  }
  return {0.5 * (a + b), static_cast<int>(seen.size())};
}

FeynmanHellmann fh_derivative(const QuadratureRule& rule) {
  if (rule.domain != Domain::HalfLine) throw ContractError("fh_derivative: needs a half-line rule");
  const Angle th{kTwoPiOverThree};
  const std::size_t n = rule.size();
  // psi is the threshold eigenvector before the weight; chi = gap^{1/2} psi is the tilde one.
  std::vector<double> psi(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = rule.nodes[i];
    psi[i] = 1.0 / (p * (2.0 * p * p + 3.0));
    norm += rule.weights[i] * kernels::threshold_gap(p) * psi[i] * psi[i];
  }
  double pairing = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = rule.weights[i] * psi[i];
    double row = 0.5 * rule.weights[i] * psi[i] * kernels::dtheta_kernel_minus(th, rule.nodes[i], rule.nodes[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      row += rule.weights[j] * psi[j] * kernels::dtheta_kernel_minus(th, rule.nodes[i], rule.nodes[j]);
    }
    pairing += 2.0 * wi * row;
  }
  return {pairing / norm, -kPi / (2.0 * (6.0 - std::sqrt(3.0) * kPi))};
}

double fh_finite_difference(const QuadratureRule& rule, double step) {
  if (!(step > 0.0)) throw ContractError("fh_finite_difference: step must be positive");
  const double up = tilde_lowest(Angle{kTwoPiOverThree + step}, rule);
  const double down = tilde_lowest(Angle{kTwoPiOverThree - step}, rule);
  return (up - down) / (2.0 * step);
}

std::array<Eigen::Vector2d, 2> wire_directions(Angle theta) {
  const double s = std::sin(0.5 * theta.radians);
  const double c = std::cos(0.5 * theta.radians);
  return {Eigen::Vector2d(s, c), Eigen::Vector2d(-s, c)};
}

double green_function(double k, double r) {
  if (!(k > 0.0)) throw DomainError("green_function: k must be positive");
  if (!(r > 0.0)) throw DomainError("green_function: r must be positive");
  return specfun::bessel_k0(std::numbers::sqrt2 * k * r) / kPi;
}

WavefunctionGrid reconstruct(Angle theta, SectorLabel h, double k, const std::vector<double>& phi,
                             const QuadratureRule& rule, const GridSpec& spec) {
  kernels::require_regular(theta);
  if (rule.domain != Domain::HalfLine) throw ContractError("reconstruct: needs a half-line rule");
  if (phi.size() != rule.size()) throw ContractError("reconstruct: phi must be sampled on the rule nodes");
  if (!(k > 0.0)) throw DomainError("reconstruct: k must be positive");
  if (spec.nx < 1 || spec.ny < 1) throw ContractError("reconstruct: empty grid");
  const SectorLabel s = skeleton_sector(h);

  WavefunctionGrid g;
  g.theta = theta.radians;
  g.sector = h;
  g.k = k;
  auto axis = [](double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
  };
  g.xs = axis(spec.x_min, spec.x_max, spec.nx);
  g.ys = axis(spec.y_min, spec.y_max, spec.ny);
  g.values.assign(g.xs.size() * g.ys.size(), 0.0);
  g.degraded.assign(g.values.size(), 0);

  const auto dirs = wire_directions(theta);
  const std::array<Eigen::Vector2d, 2> normals{Eigen::Vector2d(-dirs[0].y(), dirs[0].x()),
                                               Eigen::Vector2d(-dirs[1].y(), dirs[1].x())};
  const std::array<double, 2> coupling{1.0, static_cast<double>(s.beta)};
  const std::size_t n = rule.size();
  std::vector<double> amp(n);
  std::vector<double> decay(n);
  for (std::size_t j = 0; j < n; ++j) {
    decay[j] = std::sqrt(rule.nodes[j] * rule.nodes[j] + 2.0);
    amp[j] = rule.weights[j] * phi[j] / decay[j];
  }

  detail::parallel_for(g.ys.size(), [&](std::size_t iy) {
    for (std::size_t ix = 0; ix < g.xs.size(); ++ix) {
      const Eigen::Vector2d x(g.xs[ix], g.ys[iy]);
      double psi = 0.0;
      bool near = false;
      for (int w = 0; w < 2; ++w) {
        const double a = k * x.dot(dirs[w]);
        const double d = k * std::abs(x.dot(normals[w]));
        near = near || d < kNearWire;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const double ph = a * rule.nodes[j];
          acc += amp[j] * (s.alpha > 0 ? std::cos(ph) : std::sin(ph)) * std::exp(-d * decay[j]);
        }
        psi += coupling[w] * acc;
      }
      g.values[iy * g.xs.size() + ix] = psi;
      g.degraded[iy * g.xs.size() + ix] = near ? 1 : 0;
    }
  });

  double peak = 0.0;
  for (double v : g.values) {
    if (std::abs(v) > std::abs(peak)) peak = v;
  }
  if (peak == 0.0) throw NumericalError("reconstruct: wavefunction vanishes on the grid");
  for (double& v : g.values) v /= peak;
  return g;
}

SymmetryError symmetry_error(const WavefunctionGrid& g) {
  const std::size_t nx = g.xs.size();
  const std::size_t ny = g.ys.size();
  const double tol = 1e-12 * (1.0 + std::abs(g.xs.back()) + std::abs(g.ys.back()));
  for (std::size_t i = 0; i < nx; ++i) {
    if (std::abs(g.xs[i] + g.xs[nx - 1 - i]) > tol) throw ContractError("symmetry_error: x axis not symmetric");
  }
  for (std::size_t i = 0; i < ny; ++i) {
    if (std::abs(g.ys[i] + g.ys[ny - 1 - i]) > tol) throw ContractError("symmetry_error: y axis not symmetric");
  }
  SymmetryError e;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double v = g.at(ix, iy);
      e.x_reflection = std::max(e.x_reflection, std::abs(g.at(nx - 1 - ix, iy) - g.sector.beta * v));
      e.y_reflection = std::max(e.y_reflection, std::abs(g.at(ix, ny - 1 - iy) - g.sector.alpha * v));
    }
  }
  return e;
}

}  // namespace scissor
}  // namespace skel
