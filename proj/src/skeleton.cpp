#include "skel/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "skel/eigensolve.hpp"
#include "skel/errors.hpp"
#include "parallel.hpp"

namespace skel {

namespace {

constexpr double kPi = std::numbers::pi;

// Mutual angle of two directions at polar angles a and b, in [0, pi].
double mutual_angle(double a, double b) { return std::acos(std::clamp(std::cos(a - b), -1.0, 1.0)); }

void require_halfline(const QuadratureRule& rule, const char* who) {
  if (rule.domain != Domain::HalfLine) throw ContractError(std::string(who) + ": needs a half-line rule");
}

QuadratureRule refined(const QuadratureRule& rule) {
  const int n = static_cast<int>(rule.size());
  int m = 2 * n;
  if (m > quadrature::kMaxNodes) m = n + n / 2 <= quadrature::kMaxNodes ? n + n / 2 : n - n / 4;
  return quadrature::halfline_rule(m, rule.scale);
}

}  // namespace

void WireAngles::validate() const {
  for (double t : {theta12, theta23, theta13}) {
    if (!(t > 0.0) || !(t < kPi)) throw ContractError("wire angles must lie in (0, pi)");
  }
  // Place A1 at 0 and A2 at theta12; A3 sits at +-theta23 from A2.
  const double c1 = mutual_angle(0.0, theta12 + theta23);
  const double c2 = mutual_angle(0.0, theta12 - theta23);
  if (std::abs(c1 - theta13) > 1e-9 && std::abs(c2 - theta13) > 1e-9) {
    throw ContractError("wire angles are not realisable by three directions in the plane");
  }
}

namespace skeleton {

SectorOperator build_sector(Angle theta, int alpha, int beta, const QuadratureRule& rule) {
  require_halfline(rule, "build_sector");
  kernels::require_regular(theta);
  const SectorLabel label = SectorLabel::make(alpha, beta);
  const auto mult = quadrature::diag_multiplication([](double p) { return kernels::t0(1.0, p); }, rule);
  const auto kern = quadrature::nystrom(
      [&](double p, double q) { return kernels::t_parity(theta, alpha, p, q); }, rule);
  return {theta, label, quadrature::combine(mult, kern, static_cast<double>(beta))};
}

RayleighCheck apply_exact_vector(const DiscreteOperator& op, const std::function<double(double)>& phi) {
  std::vector<double> samples(op.rule.size());
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = phi(op.rule.nodes[i]);
  const Eigen::VectorXd v = quadrature::to_frame(op.rule, samples);
  const double nn = v.squaredNorm();
  if (!(nn > 0.0)) throw ContractError("apply_exact_vector: zero vector");
  const Eigen::VectorXd av = op.matrix * v;
  const double rho = v.dot(av) / nn;
  return {rho, (av - rho * v).norm() / std::sqrt(nn), nn};
}

DiscreteOperator build_tilde(Angle theta, const QuadratureRule& rule) {
  require_halfline(rule, "build_tilde");
  kernels::require_regular(theta);
  return quadrature::nystrom([&](double p, double q) { return kernels::tilde_kernel_minus(theta, p, q); }, rule);
}

std::vector<BoundState> bound_states(const SectorOperator& op, double margin) {
  if (!(margin > 0.0)) throw ContractError("bound_states: margin must be positive");
  require_halfline(op.op.rule, "bound_states");
  const double cut = SectorOperator::essential_edge + margin;

  const SpectralResult coarse = eigensolve::eigh(op.op.matrix);
  std::vector<BoundState> out;
  for (Eigen::Index j = coarse.eigenvalues.size() - 1; j >= 0 && coarse.eigenvalues[j] > cut; --j) {
    out.push_back({coarse.eigenvalues[j], 0.0, quadrature::deweight(op.op.rule, coarse.eigenvectors.col(j))});
  }
  if (out.empty()) return out;

  const SectorOperator fine = build_sector(op.theta, op.sector.alpha, op.sector.beta, refined(op.op.rule));
  const Eigen::VectorXd fine_values = eigensolve::eigvalsh(fine.op.matrix);
  for (auto& state : out) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < fine_values.size(); ++j) {
      if (fine_values[j] <= SectorOperator::essential_edge) continue;
      best = std::min(best, std::abs(fine_values[j] - state.k));
    }
    if (!(best <= 0.1 * margin)) {
      throw NumericalError("bound_states: eigenvalue not reproduced under refinement; margin below discretisation error");
    }
    state.refinement_error = best;
  }
  return out;
}

GeneralSkeleton build_general(double k, const WireAngles& angles, double lambda, const QuadratureRule& rule) {
  if (rule.domain != Domain::FullLine) throw ContractError("build_general: needs a full-line rule");
  if (!(k > kernels::kEssentialEdge)) throw ContractError("build_general: k must exceed 2^{-1/2}");
  if (!(lambda >= -1.0)) throw ContractError("build_general: lambda must be >= -1");
  if (lambda != 0.0 && std::abs(lambda) < 1e-12) throw ContractError("build_general: |lambda| too small to invert");

  GeneralSkeleton g;
  g.k = k;
  g.angles = angles;
  g.lambda = lambda;
  g.blocks = lambda == 0.0 ? 2 : 3;
  g.outside_proof_range = lambda < 0.0;
  if (g.blocks == 3) {
    angles.validate();
  } else if (!(angles.theta12 > 0.0 && angles.theta12 < kPi)) {
    throw ContractError("build_general: theta12 must lie in (0, pi)");
  }

  const auto n = static_cast<Eigen::Index>(rule.size());
  const double diag_shift[3] = {-1.0, -1.0, g.blocks == 3 ? 1.0 / lambda : 0.0};
  auto angle_of = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    if (i == 0 && j == 1) return angles.theta12;
    if (i == 1 && j == 2) return angles.theta23;
    return angles.theta13;
  };

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g.blocks * n, g.blocks * n);
  for (int b = 0; b < g.blocks; ++b) {
    for (Eigen::Index i = 0; i < n; ++i) {
      s(b * n + i, b * n + i) = diag_shift[b] + kernels::t0(k, rule.nodes[static_cast<std::size_t>(i)]);
    }
    for (int c = b + 1; c < g.blocks; ++c) {
      const Angle th{angle_of(b, c)};
      const auto off = quadrature::nystrom([&](double p, double q) { return kernels::t_theta(th, k, p, q); }, rule);
      s.block(b * n, c * n, n, n) = off.matrix;
      s.block(c * n, b * n, n, n) = off.matrix.transpose();
    }
  }
  g.op = DiscreteOperator{std::move(s), rule, OperatorKind::Sum};
  return g;
}

namespace {

struct KSample {
  double k;
  SpectralResult spectrum;
  Eigen::Index negative;
};

Eigen::Index count_negative(const Eigen::VectorXd& values) {
  return static_cast<Eigen::Index>((values.array() < 0.0).count());
}

// Tracked branches (by eigenvector overlap) whose eigenvalue changes sign between
// two samples; returns -1 when the assignment is ambiguous.
int tracked_sign_changes(const KSample& a, const KSample& b, double window) {
  int changes = 0;
  const Eigen::MatrixXd overlap = (a.spectrum.eigenvectors.transpose() * b.spectrum.eigenvectors).cwiseAbs();
  for (Eigen::Index i = 0; i < a.spectrum.eigenvalues.size(); ++i) {
    if (std::abs(a.spectrum.eigenvalues[i]) > window) continue;
    Eigen::Index m = 0;
    const double best = overlap.row(i).maxCoeff(&m);
    if (best < 0.5) return -1;
    if ((a.spectrum.eigenvalues[i] >= 0.0) != (b.spectrum.eigenvalues[m] >= 0.0)) ++changes;
  }
  return changes;
}

// Distance from 0 to the continuous spectrum of S(k): bands [-1, -1 + 1/(sqrt2 k)]
// and, with a third wire, [1/lambda, 1/lambda + 1/(sqrt2 k)].
double essential_gap(double k, double lambda) {
  const double width = 1.0 / (std::numbers::sqrt2 * k);
  auto dist = [&](double lo) { return lo > 0.0 ? lo : (lo + width < 0.0 ? -(lo + width) : 0.0); };
  double gap = dist(-1.0);
  if (lambda != 0.0) gap = std::min(gap, dist(1.0 / lambda));
  return gap;
}

}  // namespace

ZeroCrossingResult zero_crossings(const WireAngles& angles, double lambda, const QuadratureRule& rule,
                                  double k_lo, double k_hi, int k_steps) {
  if (!(k_lo > kernels::kEssentialEdge) || !(k_hi > k_lo)) {
    throw ContractError("zero_crossings: k range must satisfy 2^{-1/2} < k_lo < k_hi");
  }
  if (k_steps < 1) throw ContractError("zero_crossings: need at least one k step");

  auto sample = [&](double k) {
    const GeneralSkeleton g = build_general(k, angles, lambda, rule);
    SpectralResult r = eigensolve::eigh(g.op.matrix);
    const Eigen::Index neg = count_negative(r.eigenvalues);
    return KSample{k, std::move(r), neg};
  };
  auto ordered_value = [&](double k, Eigen::Index idx) {
    return eigensolve::eigvalsh(build_general(k, angles, lambda, rule).op.matrix)[idx];
  };

  ZeroCrossingResult result;
  std::vector<double> roots;
  // Grid samples are independent; brackets are then walked in k order.
  std::vector<KSample> grid(static_cast<std::size_t>(k_steps) + 1);
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    grid[i] = sample(k_lo + (k_hi - k_lo) * static_cast<double>(i) / static_cast<double>(k_steps));
  });
  for (std::size_t step = 1; step < grid.size(); ++step) {
    const KSample& left = grid[step - 1];
    const KSample& right = grid[step];
    const Eigen::Index delta = right.negative - left.negative;
    const int tracked = tracked_sign_changes(left, right, 0.5 * essential_gap(left.k, lambda));
    if (tracked < 0 || tracked != std::abs(delta)) {
      if (tracked != 0 || delta != 0) result.unresolved.push_back({left.k, right.k});
    } else if (delta != 0) {
      const Eigen::Index first = std::min(left.negative, right.negative);
      const Eigen::Index last = std::max(left.negative, right.negative);
      for (Eigen::Index idx = first; idx < last; ++idx) {
        // Illinois regula falsi on the idx-th ordered eigenvalue, which is continuous in k.
        double a = left.k;
        double b = right.k;
        double fa = left.spectrum.eigenvalues[idx];
        double fb = right.spectrum.eigenvalues[idx];
        double root = 0.5 * (a + b);
        int side = 0;
        for (int it = 0; it < 200; ++it) {
          root = (fa != fb) ? (a * fb - b * fa) / (fb - fa) : 0.5 * (a + b);
          if (!(root > a && root < b)) root = 0.5 * (a + b);
          const double fr = ordered_value(root, idx);
          if (std::abs(fr) < 1e-8 || (b - a) < 1e-14) break;
          if ((fr > 0.0) == (fa > 0.0)) {
            a = root;
            fa = fr;
            if (side == -1) fb *= 0.5;
            side = -1;
          } else {
            b = root;
            fb = fr;
            if (side == +1) fa *= 0.5;
            side = +1;
          }
        }
        roots.push_back(root);
      }
    }
  }

  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (!result.crossings.empty() && r - result.crossings.back().k < kClusterTolerance) {
      ++result.crossings.back().multiplicity;
    } else {
      result.crossings.push_back({r, -r * r, 1});
    }
  }
  return result;
}

}  // namespace skeleton
}  // namespace skel
