#include "rkfda/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rkfda {

KernelSpec KernelSpec::brownian() { return KernelSpec{}; }

KernelSpec KernelSpec::brownian_bridge(double horizon) {
  if (!(horizon > 0) || !std::isfinite(horizon)) throw InvalidArgument("bridge horizon must be positive");
  KernelSpec k;
  k.kind_ = Kind::BrownianBridge;
  k.horizon_ = horizon;
  return k;
}

KernelSpec KernelSpec::ornstein_uhlenbeck(double theta, double sigma2) {
  if (!(theta > 0) || !(sigma2 > 0)) throw InvalidArgument("OU parameters must be positive");
  KernelSpec k;
  k.kind_ = Kind::OrnsteinUhlenbeck;
  k.theta_ = theta;
  k.sigma2_ = sigma2;
  return k;
}

KernelSpec KernelSpec::empirical(Eigen::MatrixXd matrix, Grid grid) {
  if (matrix.rows() != matrix.cols() || static_cast<std::size_t>(matrix.rows()) != grid.size())
    throw InvalidArgument("empirical kernel matrix must be square and match the grid");
  KernelSpec k;
  k.kind_ = Kind::Empirical;
  k.matrix_ = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  k.grid_ = std::make_shared<const Grid>(std::move(grid));
  return k;
}

std::string KernelSpec::name() const {
  switch (kind_) {
    case Kind::Brownian: return "brownian";
    case Kind::BrownianBridge: return "bridge";
    case Kind::OrnsteinUhlenbeck: return "ou";
    case Kind::Empirical: return "empirical";
  }
  return "unknown";
}

double kernel_eval(const KernelSpec& spec, double s, double t) {
  switch (spec.kind()) {
    case KernelSpec::Kind::Brownian:
      return std::min(s, t);
    case KernelSpec::Kind::BrownianBridge:
      return std::min(s, t) - s * t / spec.horizon();
    case KernelSpec::Kind::OrnsteinUhlenbeck:
      return spec.sigma2() * std::exp(-spec.theta() * std::abs(s - t));
    case KernelSpec::Kind::Empirical: {
      const auto i = spec.grid().index_of(s);
      const auto j = spec.grid().index_of(t);
      if (!i || !j) throw InvalidArgument("empirical kernel queried off its grid");
      return spec.matrix()(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j));
    }
  }
  return 0.0;
}

Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const double> points) {
  const auto d = static_cast<Eigen::Index>(points.size());
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("gram points must be distinct");
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_eval(spec, points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

namespace {

// Cholesky that also rejects numerically zero pivots relative to the diagonal.
bool try_cholesky(const Eigen::MatrixXd& a, double pivot_tol, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(a);
  if (llt.info() != Eigen::Success) return false;
  const double scale = a.diagonal().maxCoeff();
  if (!(scale > 0)) return false;
  const Eigen::MatrixXd l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    if (!(l(i, i) * l(i, i) > pivot_tol * scale)) return false;
  return true;
}

}  // namespace

SpdSolution solve_spd(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs, const RidgePolicy& policy) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw InvalidArgument("solve_spd dimension mismatch");
  if (matrix.rows() == 0) return {Eigen::VectorXd(0), 0.0};
  if (!matrix.allFinite() || !rhs.allFinite()) throw SingularMatrix("non-finite entries in linear system");

  Eigen::LLT<Eigen::MatrixXd> llt;
  if (try_cholesky(matrix, policy.pivot_tol, llt)) return {llt.solve(rhs), 0.0};
  if (!policy.allow_ridge) throw SingularMatrix("matrix is not numerically positive definite");

  const double d = static_cast<double>(matrix.rows());
  double eps = policy.base_factor * matrix.trace() / d;
  if (!(eps > 0)) throw SingularMatrix("matrix has nonpositive trace");
  for (int attempt = 0; attempt < 2; ++attempt, eps *= policy.escalation) {
    Eigen::MatrixXd ridged = matrix;
    ridged.diagonal().array() += eps;
    if (try_cholesky(ridged, policy.pivot_tol, llt)) return {llt.solve(rhs), eps};
  }
  throw SingularMatrix("matrix is singular after ridge escalation");
}

double mahalanobis_psi(const Eigen::VectorXd& mean_vec, const Eigen::MatrixXd& gram_matrix,
                       const RidgePolicy& policy) {
  const SpdSolution sol = solve_spd(gram_matrix, mean_vec, policy);
  return std::max(0.0, mean_vec.dot(sol.x));
}

EigenSystem discretized_eigen(const KernelSpec& spec, const Grid& grid) {
  if (grid.size() < 2) throw InvalidArgument("eigen system needs a grid of at least 2 points");
  const double dt = grid.step();
  Eigen::MatrixXd k;
  if (spec.kind() == KernelSpec::Kind::Empirical) {
    if (!(spec.grid() == grid)) throw InvalidArgument("empirical kernel grid differs from requested grid");
    k = spec.matrix();
  } else {
    k = gram(spec, grid.points());
  }
  k = 0.5 * (k + k.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k * dt);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

  const Eigen::Index n = k.rows();
  EigenSystem out;
  out.grid = grid;
  out.weight = dt;
  out.eigenvalues.resize(n);
  out.eigenfunctions.resize(n, n);
  const double norm = 1.0 / std::sqrt(dt);
  // Eigen returns ascending order.
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = n - 1 - j;
    out.eigenvalues(j) = std::max(0.0, solver.eigenvalues()(src));
    Eigen::VectorXd phi = solver.eigenvectors().col(src) * norm;
    const double tiny = 1e-12 * phi.cwiseAbs().maxCoeff();
    for (Eigen::Index w = 0; w < n; ++w) {
      if (std::abs(phi(w)) > tiny) {
        if (phi(w) < 0) phi = -phi;
        break;
      }
    }
    out.eigenfunctions.col(j) = phi;
  }
  return out;
}

}  // namespace rkfda
