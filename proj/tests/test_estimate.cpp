#include <doctest.h>

#include "rkfda/estimate.hpp"
#include "rkfda/simulate.hpp"
#include "support.hpp"

using namespace rkfda;

namespace {

// Two-pass brute-force pooled covariance.
Eigen::MatrixXd brute_pooled(const LabeledDataset& ds, const std::vector<std::size_t>& idx) {
  const std::size_t d = idx.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Eigen::Index(d), Eigen::Index(d));
  for (int label : {0, 1}) {
    std::vector<double> mean(d, 0.0);
    double n = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.label(i) != label) continue;
      n += 1;
      for (std::size_t a = 0; a < d; ++a) mean[a] += ds.curves()(Eigen::Index(i), Eigen::Index(idx[a]));
    }
    for (auto& v : mean) v /= n;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
          if (ds.label(i) != label) continue;
          s += (ds.curves()(Eigen::Index(i), Eigen::Index(idx[a])) - mean[a]) *
               (ds.curves()(Eigen::Index(i), Eigen::Index(idx[b])) - mean[b]);
        }
        out(Eigen::Index(a), Eigen::Index(b)) += s / n;
      }
  }
  return out;
}

}  // namespace

TEST_CASE("class_moments examples") {
  const Grid g = make_grid(2, 0, 1);
  const auto a = class_moments(testing::dataset(g, {{0, 0}, {2, 4}}, {0, 1}));
  CHECK(a.m_hat == Eigen::Vector2d(2, 4));
  const auto b = class_moments(testing::dataset(g, {{1, 1}, {3, 3}, {0, 0}, {0, 0}}, {1, 1, 0, 0}));
  CHECK(b.m_hat == Eigen::Vector2d(2, 2));
  CHECK(b.midpoint() == Eigen::Vector2d(1, 1));
  const auto c = class_moments(testing::dataset(g, {{1, 5}, {1, 5}, {2, 3}, {2, 3}}, {0, 1, 0, 1}));
  CHECK(c.m_hat == Eigen::Vector2d::Zero());
  CHECK_THROWS_AS(class_moments(testing::dataset(g, {{0, 0}, {1, 1}}, {1, 1})), InvalidArgument);
}

TEST_CASE("pooled_cov examples") {
  const Grid g = make_grid(2, 0, 1);
  const std::vector<std::size_t> first{0};
  const auto a = testing::dataset(g, {{0, 0}, {2, 0}, {0, 0}, {2, 0}}, {0, 0, 1, 1});
  CHECK(pooled_cov(a, first)(0, 0) == 2.0);
  const auto b = testing::dataset(g, {{0, 0}, {0, 0}, {0, 0}, {2, 0}}, {0, 0, 1, 1});
  CHECK(pooled_cov(b, first)(0, 0) == 1.0);
  const std::vector<double> at0{0.0};
  CHECK(pooled_cov(b, at0)(0, 0) == 1.0);
  const auto thin = testing::dataset(g, {{0, 0}, {0, 0}, {2, 0}}, {0, 1, 1});
  CHECK_THROWS_AS(pooled_cov(thin, first), InvalidArgument);
  CHECK_THROWS_AS(pooled_cov_full(thin), InvalidArgument);
}

TEST_CASE("property: pooled_cov matches a brute-force oracle and is PSD") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto ds = testing::random_dataset(seed, 6 + seed, 9);
    Rng rng(seed * 31);
    std::vector<std::size_t> idx;
    for (int k = 0; k < 3; ++k) idx.push_back(std::size_t(rng.uniform() * 9) % 9);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    const Eigen::MatrixXd got = pooled_cov(ds, idx);
    CHECK((got - brute_pooled(ds, idx)).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd full = pooled_cov_full(ds);
    CHECK((submatrix(full, idx) - got).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((full - full.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * full.trace());
  }
}

TEST_CASE("property: scaling curves scales moments") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = testing::random_dataset(seed, 20, 7);
    const double c = 0.3 + seed;
    const LabeledDataset scaled(ds.grid(), c * ds.curves(), ds.labels());
    CHECK((pooled_cov_full(scaled) - c * c * pooled_cov_full(ds)).cwiseAbs().maxCoeff() < 1e-9 * c * c);
    CHECK((class_moments(scaled).m_hat - c * class_moments(ds).m_hat).cwiseAbs().maxCoeff() < 1e-12 * c);
  }
}

TEST_CASE("pooled covariance of Brownian data is twice the kernel") {
  const Grid g = make_grid(11, 0, 1);
  const std::size_t n = 40000;
  Eigen::MatrixXd x{Eigen::Index(n), 11};
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed({99, i}));
    x.row(Eigen::Index(i)) = gen_process(ProcessSpec::brownian(), g, rng).transpose();
    labels[i] = int(i % 2);
  }
  const std::vector<double> pts{0.5, 1.0};
  const Eigen::MatrixXd k = pooled_cov(LabeledDataset(g, x, labels), pts) / 2;
  CHECK(std::abs(k(0, 1) - 0.5) < 0.02);
  CHECK(std::abs(k(0, 0) - 0.5) < 0.02);
  CHECK(std::abs(k(1, 1) - 1.0) < 0.02);
}
