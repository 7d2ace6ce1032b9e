#pragma once

#include "rkfda/estimate.hpp"
#include "rkfda/kernels.hpp"

#include <optional>
#include <variant>

namespace rkfda {

/// Covariance between grid points, tabulated once on the whole grid. Built
/// either from a known kernel (oracle selection) or from the pooled sample
/// covariance of a training set.
class CovarianceProvider {
 public:
  CovarianceProvider(Grid grid, Eigen::MatrixXd full);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& full() const { return full_; }
  Eigen::MatrixXd at(std::span<const std::size_t> indices) const { return submatrix(full_, indices); }
  Eigen::MatrixXd at_times(std::span<const double> points) const;

 private:
  Grid grid_;
  Eigen::MatrixXd full_;
};

CovarianceProvider oracle_gram_provider(const KernelSpec& kernel, const Grid& grid);
CovarianceProvider empirical_provider(const LabeledDataset& dataset);

struct EmpiricalMode {};

/// Known kernel; optionally also the true mean difference m1 - m0 on the grid.
struct OracleMode {
  KernelSpec kernel;
  std::optional<Eigen::VectorXd> mean_difference;
};

struct SelectionConfig {
  std::size_t d_max = 10;
  /// Minimum separation between selected times. Unset means one grid step.
  std::optional<double> delta;
  /// When the grid starts at t = 0, keep candidates at least delta away from
  /// it (the origin acts as an already-chosen point).
  bool exclude_origin = true;
  RidgePolicy ridge;
  /// Allowed grid indices; empty allows every index.
  std::vector<std::size_t> candidate_mask;
  /// Stop when the best candidate improves psi by less than rel_tol * psi.
  double rel_tol = 1e-10;
  std::variant<EmpiricalMode, OracleMode> mode = EmpiricalMode{};
};

/// m^T K^{-1} m at the given grid indices.
double psi_hat(std::span<const std::size_t> indices, const Eigen::VectorXd& mean_difference,
               const CovarianceProvider& cov, const RidgePolicy& policy = {});

/// Greedy forward maximization of psi: each step adds the admissible grid
/// point that maximizes psi of the enlarged set. Ties go to the smallest time.
SelectionResult greedy_select(const Eigen::VectorXd& mean_difference, const CovarianceProvider& cov,
                              const SelectionConfig& config);

/// Dispatches on config.mode: empirical uses the pooled covariance and the
/// sample mean difference; oracle uses the kernel Gram and the supplied mean
/// difference when given.
SelectionResult greedy_select(const LabeledDataset& dataset, const SelectionConfig& config);

/// Oracle selection with a known mean difference and no data at all.
SelectionResult greedy_select(const Grid& grid, const KernelSpec& kernel, const Eigen::VectorXd& mean_difference,
                              SelectionConfig config);

}  // namespace rkfda
