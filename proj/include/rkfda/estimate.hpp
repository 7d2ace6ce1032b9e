#pragma once

#include "rkfda/core.hpp"

namespace rkfda {

/// Per-class pointwise sample means on the grid and their difference.
struct ClassMoments {
  Curve m0_hat;
  Curve m1_hat;
  Curve m_hat;  // m1_hat - m0_hat
  std::size_t n0 = 0;
  std::size_t n1 = 0;

  Curve midpoint() const { return 0.5 * (m0_hat + m1_hat); }
};

ClassMoments class_moments(const LabeledDataset& dataset);

/// Pooled covariance on the whole grid: the SUM of the two per-class
/// covariance estimates, each with divisor n_r.
Eigen::MatrixXd pooled_cov_full(const LabeledDataset& dataset);

/// Pooled covariance restricted to grid indices.
Eigen::MatrixXd pooled_cov(const LabeledDataset& dataset, std::span<const std::size_t> indices);

/// Same, addressed by grid times.
Eigen::MatrixXd pooled_cov(const LabeledDataset& dataset, std::span<const double> points);

/// Rows/columns `indices` of a square matrix.
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& full, std::span<const std::size_t> indices);
Eigen::VectorXd subvector(const Eigen::VectorXd& full, std::span<const std::size_t> indices);

}  // namespace rkfda
