#include "rkfda/rkhs.hpp"

#include <algorithm>
#include <cmath>

namespace rkfda {

FiniteExpansionMean::FiniteExpansionMean(std::vector<double> pts, Eigen::VectorXd a, KernelSpec k)
    : points(std::move(pts)), alphas(std::move(a)), kernel(std::move(k)) {
  if (points.empty()) throw InvalidArgument("finite expansion needs at least one point");
  if (static_cast<std::size_t>(alphas.size()) != points.size())
    throw InvalidArgument("expansion points and coefficients differ in length");
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("expansion points must be distinct");
  if (!alphas.allFinite()) throw InvalidArgument("expansion coefficients must be finite");
}

double FiniteExpansionMean::operator()(double t) const {
  double v = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) v += alphas(static_cast<Eigen::Index>(i)) * kernel_eval(kernel, t, points[i]);
  return v;
}

Eigen::VectorXd FiniteExpansionMean::at(std::span<const double> times) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) out(static_cast<Eigen::Index>(i)) = (*this)(times[i]);
  return out;
}

Eigen::VectorXd alphas_from_mean(const Eigen::VectorXd& mean_vec, const Eigen::MatrixXd& gram_matrix,
                                 const RidgePolicy& policy) {
  return solve_spd(gram_matrix, mean_vec, policy).x;
}

FiniteExpansionMean expansion_from_values(const KernelSpec& kernel, std::vector<double> points,
                                          const Eigen::VectorXd& values, const RidgePolicy& policy) {
  const Eigen::MatrixXd k = gram(kernel, points);
  Eigen::VectorXd a = alphas_from_mean(values, k, policy);
  return FiniteExpansionMean(std::move(points), std::move(a), kernel);
}

double rkhs_norm_sq(const FiniteExpansionMean& mean) {
  const Eigen::MatrixXd k = gram(mean.kernel, mean.points);
  return std::max(0.0, mean.alphas.dot(k * mean.alphas));
}

double bayes_discriminant(const Eigen::VectorXd& x_at_points, const FiniteExpansionMean& mean,
                          const Eigen::VectorXd& m0_at_points, const Eigen::VectorXd& m1_at_points, double p) {
  const auto d = static_cast<Eigen::Index>(mean.size());
  if (x_at_points.size() != d || m0_at_points.size() != d || m1_at_points.size() != d)
    throw InvalidArgument("discriminant vectors must match the expansion size");
  const double offset = log_prior_odds(p);
  return mean.alphas.dot(x_at_points - 0.5 * (m0_at_points + m1_at_points)) - offset;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bayes_error(double norm_k, double p) {
  if (!(norm_k > 0) || !std::isfinite(norm_k)) throw InvalidArgument("bayes_error needs a positive RKHS norm");
  const double a = log_prior_odds(p);
  return (1.0 - p) * normal_cdf(-norm_k / 2.0 - a / norm_k) + p * normal_cdf(-norm_k / 2.0 + a / norm_k);
}

std::vector<TruncatedProblem> truncation_sequence(std::span<const double> mu, const EigenSystem& eigen,
                                                  std::size_t r_max) {
  if (r_max == 0) throw InvalidArgument("truncation order must be positive");
  if (r_max > eigen.size() || r_max > mu.size())
    throw InvalidArgument("truncation order exceeds available eigenpairs");
  std::vector<TruncatedProblem> out;
  out.reserve(r_max);
  double norm_sq = 0.0;
  for (std::size_t r = 1; r <= r_max; ++r) {
    const double theta = eigen.eigenvalues(static_cast<Eigen::Index>(r - 1));
    if (!(theta > 0)) throw InvalidArgument("zero eigenvalue in truncation sequence");
    norm_sq += mu[r - 1] * mu[r - 1] / theta;
    if (!(norm_sq > 0)) throw InvalidArgument("truncated mean has zero RKHS norm");
    out.push_back({r, norm_sq, bayes_error(std::sqrt(norm_sq), 0.5)});
  }
  return out;
}

}  // namespace rkfda
