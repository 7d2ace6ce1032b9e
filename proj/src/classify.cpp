#include "rkfda/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rkfda {

namespace {

void check_curve(const Grid& grid, const Curve& x) {
  if (static_cast<std::size_t>(x.size()) != grid.size()) throw InvalidArgument("curve does not match the training grid");
}

// Neighbour order for one query: by distance, then by training index.
std::vector<std::size_t> neighbour_order(const Eigen::VectorXd& dist2) {
  std::vector<std::size_t> order(static_cast<std::size_t>(dist2.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist2(static_cast<Eigen::Index>(a)) < dist2(static_cast<Eigen::Index>(b)); });
  return order;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& queries, const Eigen::MatrixXd& train) {
  Eigen::MatrixXd d(queries.rows(), train.rows());
  for (Eigen::Index i = 0; i < queries.rows(); ++i)
    d.row(i) = (train.rowwise() - queries.row(i)).rowwise().squaredNorm().transpose();
  return d;
}

int knn_vote(const std::vector<std::size_t>& order, const std::vector<int>& labels, std::size_t k) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < k; ++i) ones += static_cast<std::size_t>(labels[order[i]]);
  return 2 * ones > k ? 1 : 0;
}

}  // namespace

double RkcModel::score(const Curve& x) const {
  check_curve(grid, x);
  double s = 0.0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    s += alphas(e) * (x(static_cast<Eigen::Index>(indices[i])) - midpoint(e));
  }
  return s - log_prior_odds;
}

double CentroidModel::projection(const Curve& x) const {
  check_curve(grid, x);
  return grid.step() * psi.dot(x);
}

const Grid& TrainedClassifier::grid() const {
  return std::visit([](const auto& m) -> const Grid& { return m.grid; }, model_);
}

std::string TrainedClassifier::kind() const {
  if (std::holds_alternative<RkcModel>(model_)) return "rkc";
  if (std::holds_alternative<KnnModel>(model_)) return "knn";
  return "centroid";
}

TrainedClassifier train_rkc(const LabeledDataset& dataset, std::span<const std::size_t> indices,
                            const CovarianceProvider* cov, const RidgePolicy& policy) {
  if (indices.empty()) throw InvalidArgument("RK-C needs at least one selected point");
  for (std::size_t i : indices)
    if (i >= dataset.grid().size()) throw InvalidArgument("selected index outside the grid");
  if (dataset.count(0) < 2 || dataset.count(1) < 2)
    throw TrainingFailure("RK-C needs at least 2 training samples per class");
  const ClassMoments moments = class_moments(dataset);
  const Eigen::MatrixXd k = cov ? cov->at(indices) : pooled_cov(dataset, indices);
  RkcModel model;
  model.grid = dataset.grid();
  model.indices.assign(indices.begin(), indices.end());
  try {
    model.alphas = solve_spd(k, subvector(moments.m_hat, indices), policy).x;
  } catch (const SingularMatrix& e) {
    throw TrainingFailure(std::string("singular covariance at selected points: ") + e.what());
  }
  model.midpoint = subvector(moments.midpoint(), indices);
  const double p = class_prior(dataset);
  if (!(p > 0.0 && p < 1.0)) throw TrainingFailure("estimated prior is degenerate");
  model.log_prior_odds = log_prior_odds(p);
  return TrainedClassifier(std::move(model));
}

TrainedClassifier train_rkc_at(const LabeledDataset& dataset, std::span<const double> points,
                               const CovarianceProvider* cov, const RidgePolicy& policy) {
  const auto idx = dataset.grid().indices_of(points);
  return train_rkc(dataset, idx, cov, policy);
}

TrainedClassifier train_knn(const LabeledDataset& dataset, std::size_t k) {
  if (k < 1 || k > dataset.size()) throw InvalidArgument("kNN requires 1 <= k <= n");
  return TrainedClassifier(KnnModel{dataset.grid(), dataset.curves(), dataset.labels(), k});
}

std::size_t usable_components(const EigenSystem& eigen) {
  if (eigen.size() == 0 || !(eigen.eigenvalues(0) > 0)) return 0;
  const double floor = 1e-10 * eigen.eigenvalues(0);
  std::size_t r = 0;
  while (r < eigen.size() && eigen.eigenvalues(static_cast<Eigen::Index>(r)) > floor) ++r;
  return r;
}

TrainedClassifier train_centroid(const LabeledDataset& dataset, std::size_t r) {
  const EigenSystem eigen = discretized_eigen(KernelSpec::empirical(pooled_cov_full(dataset), dataset.grid()),
                                              dataset.grid());
  return train_centroid(dataset, eigen, r);
}

TrainedClassifier train_centroid(const LabeledDataset& dataset, const EigenSystem& eigen, std::size_t r) {
  if (r < 1 || r > usable_components(eigen)) throw InvalidArgument("truncation order exceeds the usable spectrum");
  if (!(eigen.grid == dataset.grid())) throw InvalidArgument("eigensystem grid differs from dataset grid");
  const ClassMoments moments = class_moments(dataset);
  const double dt = eigen.weight;
  Curve psi = Curve::Zero(static_cast<Eigen::Index>(dataset.grid().size()));
  for (std::size_t j = 0; j < r; ++j) {
    const auto e = static_cast<Eigen::Index>(j);
    const double mu = dt * eigen.eigenfunctions.col(e).dot(moments.m_hat);
    psi += (mu / eigen.eigenvalues(e)) * eigen.eigenfunctions.col(e);
  }
  CentroidModel model;
  model.grid = dataset.grid();
  model.psi = std::move(psi);
  model.r = r;
  model.centroid0 = model.projection(moments.m0_hat);
  model.centroid1 = model.projection(moments.m1_hat);
  return TrainedClassifier(std::move(model));
}

int classify(const TrainedClassifier& classifier, const Curve& x) {
  return std::visit(
      [&](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RkcModel>) {
          return m.score(x) > 0.0 ? 1 : 0;
        } else if constexpr (std::is_same_v<T, CentroidModel>) {
          const double proj = m.projection(x);
          const double d1 = proj - m.centroid1;
          const double d0 = proj - m.centroid0;
          return d1 * d1 - d0 * d0 < 0.0 ? 1 : 0;
        } else {
          check_curve(m.grid, x);
          const Eigen::VectorXd dist2 = (m.curves.rowwise() - x.transpose()).rowwise().squaredNorm();
          return knn_vote(neighbour_order(dist2), m.labels, m.k);
        }
      },
      classifier.model());
}

std::vector<int> classify(const TrainedClassifier& classifier, const Eigen::MatrixXd& curves) {
  std::vector<int> out(static_cast<std::size_t>(curves.rows()));
  for (Eigen::Index i = 0; i < curves.rows(); ++i) out[static_cast<std::size_t>(i)] = classify(classifier, Curve(curves.row(i).transpose()));
  return out;
}

double error_rate(const TrainedClassifier& classifier, const LabeledDataset& test) {
  if (test.empty()) throw InvalidArgument("error rate of an empty test set");
  if (!(test.grid() == classifier.grid())) throw InvalidArgument("test grid differs from training grid");
  const std::vector<int> predicted = classify(classifier, test.curves());
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < test.size(); ++i) wrong += predicted[i] != test.label(i);
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

std::vector<double> knn_error_rates(const LabeledDataset& train, const LabeledDataset& test,
                                    std::span<const std::size_t> ks) {
  if (test.empty()) throw InvalidArgument("error rate of an empty test set");
  if (!(test.grid() == train.grid())) throw InvalidArgument("test grid differs from training grid");
  const Eigen::MatrixXd dist2 = squared_distances(test.curves(), train.curves());
  std::vector<std::size_t> wrong(ks.size(), 0);
  for (Eigen::Index i = 0; i < dist2.rows(); ++i) {
    const auto order = neighbour_order(dist2.row(i).transpose());
    for (std::size_t q = 0; q < ks.size(); ++q) {
      if (ks[q] < 1 || ks[q] > train.size()) continue;
      wrong[q] += knn_vote(order, train.labels(), ks[q]) != test.label(static_cast<std::size_t>(i));
    }
  }
  std::vector<double> out(ks.size());
  for (std::size_t q = 0; q < ks.size(); ++q)
    out[q] = (ks[q] < 1 || ks[q] > train.size()) ? std::numeric_limits<double>::quiet_NaN()
                                                 : static_cast<double>(wrong[q]) / static_cast<double>(test.size());
  return out;
}

}  // namespace rkfda
