#include "skel/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "skel/errors.hpp"

namespace skel::eigensolve {

namespace {

struct RawDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

RawDecomposition jacobi(const Eigen::MatrixXd& input, bool want_vectors) {
  const Eigen::Index n = input.rows();
  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = want_vectors ? Eigen::MatrixXd::Identity(n, n) : Eigen::MatrixXd();
  const double threshold = 1e-12 * a.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (++sweep > kJacobiMaxSweeps) throw NumericalError("jacobi: no convergence after 30 sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p,q) (Rutishauser's stable form).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  RawDecomposition out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    if (want_vectors) out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

RawDecomposition tridiagonal(const Eigen::MatrixXd& a, bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: tridiagonal QR did not converge");
  RawDecomposition out;
  out.values = solver.eigenvalues();
  if (want_vectors) out.vectors = solver.eigenvectors();
  return out;
}

void fix_signs(Eigen::MatrixXd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index imax = 0;
    v.col(j).cwiseAbs().maxCoeff(&imax);
    if (v(imax, j) < 0.0) v.col(j) *= -1.0;
  }
}

}  // namespace

void require_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ContractError("eigh: matrix must be square");
  if (a.size() == 0) return;
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw ContractError("eigh: matrix is not symmetric");
}

SpectralResult eigh(const Eigen::MatrixXd& a, Method method) {
  require_symmetric(a);
  RawDecomposition raw = method == Method::Jacobi ? jacobi(a, true) : tridiagonal(a, true);
  fix_signs(raw.vectors);
  SpectralResult r;
  r.eigenvalues = std::move(raw.values);
  r.eigenvectors = std::move(raw.vectors);
  r.residuals.resize(r.eigenvalues.size());
  const Eigen::MatrixXd av = a * r.eigenvectors;
  for (Eigen::Index j = 0; j < r.eigenvalues.size(); ++j) {
    r.residuals[j] = (av.col(j) - r.eigenvalues[j] * r.eigenvectors.col(j)).norm();
  }
  return r;
}

Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& a, Method method) {
  require_symmetric(a);
  return method == Method::Jacobi ? jacobi(a, false).values : tridiagonal(a, false).values;
}

Eigenpair top_eigenpair(const Eigen::MatrixXd& a) {
  const SpectralResult r = eigh(a);
  const Eigen::Index last = r.eigenvalues.size() - 1;
  return {r.eigenvalues[last], r.eigenvectors.col(last)};
}

Eigenpair bottom_eigenpair(const Eigen::MatrixXd& a) {
  const SpectralResult r = eigh(a);
  return {r.eigenvalues[0], r.eigenvectors.col(0)};
}

double trace(const Eigen::MatrixXd& a) { return a.trace(); }

double frobenius(const Eigen::MatrixXd& a) { return a.norm(); }

double trace_norm(const Eigen::MatrixXd& a) { return eigvalsh(a).cwiseAbs().sum(); }

}  // namespace skel::eigensolve
