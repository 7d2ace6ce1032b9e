#include "rkfda/estimate.hpp"

namespace rkfda {

namespace {

Eigen::MatrixXd rows_of_class(const LabeledDataset& ds, int label) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ds.count(label)), static_cast<Eigen::Index>(ds.grid().size()));
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (ds.label(i) == label) out.row(r++) = ds.curves().row(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace

ClassMoments class_moments(const LabeledDataset& dataset) {
  ClassMoments m;
  m.n0 = dataset.count(0);
  m.n1 = dataset.count(1);
  if (m.n0 == 0 || m.n1 == 0) throw InvalidArgument("class moments need both classes present");
  const auto g = static_cast<Eigen::Index>(dataset.grid().size());
  m.m0_hat = Curve::Zero(g);
  m.m1_hat = Curve::Zero(g);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto row = dataset.curves().row(static_cast<Eigen::Index>(i)).transpose();
    if (dataset.label(i) == 0)
      m.m0_hat += row;
    else
      m.m1_hat += row;
  }
  m.m0_hat /= static_cast<double>(m.n0);
  m.m1_hat /= static_cast<double>(m.n1);
  m.m_hat = m.m1_hat - m.m0_hat;
  return m;
}

Eigen::MatrixXd pooled_cov_full(const LabeledDataset& dataset) {
  if (dataset.count(0) < 2 || dataset.count(1) < 2)
    throw InvalidArgument("pooled covariance needs at least 2 samples per class");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dataset.grid().size()),
                                              static_cast<Eigen::Index>(dataset.grid().size()));
  for (int label : {0, 1}) {
    Eigen::MatrixXd x = rows_of_class(dataset, label);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    out.noalias() += (x.transpose() * x) / static_cast<double>(x.rows());
  }
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& full, std::span<const std::size_t> indices) {
  const auto d = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = full(static_cast<Eigen::Index>(indices[static_cast<std::size_t>(i)]),
                       static_cast<Eigen::Index>(indices[static_cast<std::size_t>(j)]));
  return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& full, std::span<const std::size_t> indices) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = full(static_cast<Eigen::Index>(indices[i]));
  return out;
}

Eigen::MatrixXd pooled_cov(const LabeledDataset& dataset, std::span<const std::size_t> indices) {
  for (std::size_t i : indices)
    if (i >= dataset.grid().size()) throw InvalidArgument("grid index out of range");
  if (dataset.count(0) < 2 || dataset.count(1) < 2)
    throw InvalidArgument("pooled covariance needs at least 2 samples per class");
  const auto d = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int label : {0, 1}) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(dataset.count(label)), d);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (dataset.label(i) != label) continue;
      for (Eigen::Index c = 0; c < d; ++c)
        x(r, c) = dataset.curves()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(indices[static_cast<std::size_t>(c)]));
      ++r;
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    out.noalias() += (x.transpose() * x) / static_cast<double>(x.rows());
  }
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd pooled_cov(const LabeledDataset& dataset, std::span<const double> points) {
  const auto idx = dataset.grid().indices_of(points);
  return pooled_cov(dataset, idx);
}

}  // namespace rkfda
