#pragma once

#include "rkfda/core.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>

namespace rkfda {

/// A covariance function K(s, t): one of the analytic families, or an
/// empirical matrix tabulated on a grid.
class KernelSpec {
 public:
  enum class Kind { Brownian, BrownianBridge, OrnsteinUhlenbeck, Empirical };

  static KernelSpec brownian();
  /// Bridge pinned at 0 and `horizon`: K(s, t) = min(s, t) - s t / T.
  static KernelSpec brownian_bridge(double horizon = 1.0);
  static KernelSpec ornstein_uhlenbeck(double theta = 1.0, double sigma2 = 1.0);
  static KernelSpec empirical(Eigen::MatrixXd matrix, Grid grid);

  Kind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  double theta() const { return theta_; }
  double sigma2() const { return sigma2_; }
  bool is_analytic() const { return kind_ != Kind::Empirical; }
  const Eigen::MatrixXd& matrix() const { return *matrix_; }
  const Grid& grid() const { return *grid_; }

  std::string name() const;

 private:
  Kind kind_ = Kind::Brownian;
  double horizon_ = 1.0;
  double theta_ = 1.0;
  double sigma2_ = 1.0;
  std::shared_ptr<const Eigen::MatrixXd> matrix_;
  std::shared_ptr<const Grid> grid_;
};

double kernel_eval(const KernelSpec& spec, double s, double t);

/// Gram matrix K(t_i, t_j) at distinct points.
Eigen::MatrixXd gram(const KernelSpec& spec, std::span<const double> points);

/// Ridge escalation used by solve_spd. The first attempt is a plain Cholesky;
/// on failure eps = base_factor * trace / d is added to the diagonal, and if
/// that fails too it is multiplied once by `escalation`.
struct RidgePolicy {
  double base_factor = 1e-8;
  double escalation = 100.0;
  bool allow_ridge = true;
  /// A pivot L_ii^2 below pivot_tol * max diagonal counts as a failed factorization.
  double pivot_tol = 1e-12;
};

struct SpdSolution {
  Eigen::VectorXd x;
  double ridge = 0.0;
};

/// Solves (A + eps I) x = b for symmetric A, reporting the eps that was needed.
SpdSolution solve_spd(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs, const RidgePolicy& policy = {});

/// Squared Mahalanobis distance m^T K^{-1} m.
double mahalanobis_psi(const Eigen::VectorXd& mean_vec, const Eigen::MatrixXd& gram_matrix,
                       const RidgePolicy& policy = {});

/// Discretized Karhunen-Loeve system: eigenpairs of the Gram matrix scaled
/// by the grid step. Eigenfunctions are stored column-wise and satisfy
/// sum_w phi_i(t_w) phi_j(t_w) dt = delta_ij.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfunctions;
  Grid grid;
  double weight = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

EigenSystem discretized_eigen(const KernelSpec& spec, const Grid& grid);

}  // namespace rkfda
