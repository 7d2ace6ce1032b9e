#include "rkfda/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rkfda {

CovarianceProvider::CovarianceProvider(Grid grid, Eigen::MatrixXd full) : grid_(std::move(grid)), full_(std::move(full)) {
  if (full_.rows() != full_.cols() || static_cast<std::size_t>(full_.rows()) != grid_.size())
    throw InvalidArgument("covariance provider matrix must match the grid");
}

Eigen::MatrixXd CovarianceProvider::at_times(std::span<const double> points) const {
  const auto idx = grid_.indices_of(points);
  return at(idx);
}

CovarianceProvider oracle_gram_provider(const KernelSpec& kernel, const Grid& grid) {
  if (!kernel.is_analytic()) return CovarianceProvider(grid, kernel.matrix());
  return CovarianceProvider(grid, gram(kernel, grid.points()));
}

CovarianceProvider empirical_provider(const LabeledDataset& dataset) {
  return CovarianceProvider(dataset.grid(), pooled_cov_full(dataset));
}

double psi_hat(std::span<const std::size_t> indices, const Eigen::VectorXd& mean_difference,
               const CovarianceProvider& cov, const RidgePolicy& policy) {
  return mahalanobis_psi(subvector(mean_difference, indices), cov.at(indices), policy);
}

SelectionResult greedy_select(const Eigen::VectorXd& mean_difference, const CovarianceProvider& cov,
                              const SelectionConfig& config) {
  const Grid& grid = cov.grid();
  if (static_cast<std::size_t>(mean_difference.size()) != grid.size())
    throw InvalidArgument("mean difference length differs from grid size");
  const double step = grid.step();
  const double delta = config.delta.value_or(step);
  if (delta < step * (1.0 - 1e-9)) throw InvalidArgument("delta must be at least one grid step");

  std::vector<std::size_t> candidates = config.candidate_mask;
  if (candidates.empty()) {
    candidates.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) candidates[i] = i;
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (!candidates.empty() && candidates.back() >= grid.size()) throw InvalidArgument("candidate index out of range");
  if (config.d_max < 1 || config.d_max > candidates.size())
    throw InvalidArgument("d_max must lie between 1 and the number of candidates");

  const double slack = 1e-9 * step;
  const bool origin_fence = config.exclude_origin && std::abs(grid.t_min()) <= slack;
  auto admissible = [&](std::size_t c, const std::vector<std::size_t>& chosen) {
    if (origin_fence && grid[c] < delta - slack) return false;
    for (std::size_t s : chosen)
      if (std::abs(grid[c] - grid[s]) < delta - slack) return false;
    return true;
  };

  SelectionResult result;
  std::vector<std::size_t> trial;
  double current = 0.0;
  while (result.size() < config.d_max) {
    double best = -std::numeric_limits<double>::infinity();
    std::optional<std::size_t> best_idx;
    bool any_admissible = false;
    trial = result.indices;
    trial.push_back(0);
    for (std::size_t c : candidates) {
      if (!admissible(c, result.indices)) continue;
      any_admissible = true;
      trial.back() = c;
      double value;
      try {
        value = psi_hat(trial, mean_difference, cov, config.ridge);
      } catch (const SingularMatrix&) {
        continue;
      }
      if (value > best) {
        best = value;
        best_idx = c;
      }
    }
    if (!best_idx) {
      if (result.indices.empty() && !any_admissible)
        throw InvalidArgument("no admissible candidate for the first selection step");
      if (result.indices.empty()) throw SingularMatrix("covariance is singular at every candidate");
      break;
    }
    if (!result.indices.empty() && best - current < config.rel_tol * current) break;
    result.indices.push_back(*best_idx);
    result.points.push_back(grid[*best_idx]);
    result.psi_trace.push_back(best);
    current = best;
  }
  return result;
}

SelectionResult greedy_select(const LabeledDataset& dataset, const SelectionConfig& config) {
  if (std::holds_alternative<EmpiricalMode>(config.mode)) {
    const ClassMoments moments = class_moments(dataset);
    return greedy_select(moments.m_hat, empirical_provider(dataset), config);
  }
  const auto& oracle = std::get<OracleMode>(config.mode);
  const CovarianceProvider cov = oracle_gram_provider(oracle.kernel, dataset.grid());
  if (oracle.mean_difference) return greedy_select(*oracle.mean_difference, cov, config);
  return greedy_select(class_moments(dataset).m_hat, cov, config);
}

SelectionResult greedy_select(const Grid& grid, const KernelSpec& kernel, const Eigen::VectorXd& mean_difference,
                              SelectionConfig config) {
  config.mode = OracleMode{kernel, mean_difference};
  return greedy_select(mean_difference, oracle_gram_provider(kernel, grid), config);
}

}  // namespace rkfda
