#pragma once

#include "rkfda/estimate.hpp"
#include "rkfda/kernels.hpp"
#include "rkfda/select.hpp"

#include <variant>

namespace rkfda {

/// Fisher linear rule on selected grid points:
/// label 1 iff alpha^T (x(t) - midpoint) - log((1-p)/p) > 0.
struct RkcModel {
  Grid grid;
  std::vector<std::size_t> indices;
  Eigen::VectorXd alphas;
  Eigen::VectorXd midpoint;
  double log_prior_odds = 0.0;

  double score(const Curve& x) const;
};

/// k nearest neighbours under the L2 quadrature distance sqrt(dt) * |x - y|.
struct KnnModel {
  Grid grid;
  Eigen::MatrixXd curves;
  std::vector<int> labels;
  std::size_t k = 1;
};

/// Centroid rule on the projection <x, psi_r>_{L2}:
/// label 1 iff (proj - c1)^2 - (proj - c0)^2 < 0.
struct CentroidModel {
  Grid grid;
  Curve psi;
  double centroid0 = 0.0;
  double centroid1 = 0.0;
  std::size_t r = 0;

  double projection(const Curve& x) const;
};

class TrainedClassifier {
 public:
  using Model = std::variant<RkcModel, KnnModel, CentroidModel>;

  explicit TrainedClassifier(Model model) : model_(std::move(model)) {}

  const Model& model() const { return model_; }
  const Grid& grid() const;
  std::string kind() const;

 private:
  Model model_;
};

/// Fisher rule at `indices` with alpha = K^{-1} m_hat. K is the pooled sample
/// covariance unless a covariance provider (e.g. a known kernel) is given.
TrainedClassifier train_rkc(const LabeledDataset& dataset, std::span<const std::size_t> indices,
                            const CovarianceProvider* cov = nullptr, const RidgePolicy& policy = {});
TrainedClassifier train_rkc_at(const LabeledDataset& dataset, std::span<const double> points,
                               const CovarianceProvider* cov = nullptr, const RidgePolicy& policy = {});

TrainedClassifier train_knn(const LabeledDataset& dataset, std::size_t k);

/// Number of eigenpairs of the pooled covariance above 1e-10 * theta_1.
std::size_t usable_components(const EigenSystem& eigen);

/// Centroid classifier using the PC-truncated psi_r = sum_{j<=r} mu_j / theta_j phi_j
/// estimated from the pooled covariance eigensystem.
TrainedClassifier train_centroid(const LabeledDataset& dataset, std::size_t r);

/// Same, reusing a precomputed eigensystem of the pooled covariance.
TrainedClassifier train_centroid(const LabeledDataset& dataset, const EigenSystem& eigen, std::size_t r);

int classify(const TrainedClassifier& classifier, const Curve& x);
std::vector<int> classify(const TrainedClassifier& classifier, const Eigen::MatrixXd& curves);

double error_rate(const TrainedClassifier& classifier, const LabeledDataset& test);

/// Misclassification rate of kNN for every k in `ks`, sharing one distance
/// computation. k values larger than the training size are reported as NaN.
std::vector<double> knn_error_rates(const LabeledDataset& train, const LabeledDataset& test,
                                    std::span<const std::size_t> ks);

}  // namespace rkfda
