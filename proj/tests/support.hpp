#pragma once

#include "rkfda/core.hpp"
#include "rkfda/random.hpp"

#include <vector>

namespace testing {

inline rkfda::LabeledDataset dataset(const rkfda::Grid& grid, const std::vector<std::vector<double>>& rows,
                                     const std::vector<int>& labels,
                                     rkfda::PriorMode prior = rkfda::PriorMode::fixed(0.5)) {
  Eigen::MatrixXd m{Eigen::Index(rows.size()), Eigen::Index(grid.size())};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) m(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  return rkfda::LabeledDataset(grid, m, labels, prior);
}

/// Gaussian curves with class-dependent shift on a small grid.
inline rkfda::LabeledDataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t g, double shift = 1.0) {
  rkfda::Rng rng(seed);
  const auto grid = rkfda::make_grid(g, 0.0, 1.0);
  Eigen::MatrixXd m{Eigen::Index(n), Eigen::Index(g)};
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i % 2 == 0 ? 0 : 1;
    double walk = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
      walk += rng.normal();
      m(Eigen::Index(i), Eigen::Index(j)) = walk + (labels[i] ? shift * std::sin(3.0 * double(j) / double(g)) : 0.0);
    }
  }
  return rkfda::LabeledDataset(grid, m, labels);
}

/// Sorted distinct times in (0, 1].
inline std::vector<double> random_times(rkfda::Rng& rng, std::size_t d) {
  std::vector<double> t;
  while (t.size() < d) {
    const double v = 0.02 + 0.98 * rng.uniform();
    bool ok = true;
    for (double u : t) ok = ok && std::abs(u - v) > 1e-3;
    if (ok) t.push_back(v);
  }
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace testing
