#pragma once

#include "rkfda/kernels.hpp"

#include <vector>

namespace rkfda {

/// m(.) = sum_i alpha_i K(., t_i).
struct FiniteExpansionMean {
  std::vector<double> points;
  Eigen::VectorXd alphas;
  KernelSpec kernel;

  FiniteExpansionMean(std::vector<double> points, Eigen::VectorXd alphas, KernelSpec kernel);

  double operator()(double t) const;
  Eigen::VectorXd at(std::span<const double> times) const;
  std::size_t size() const { return points.size(); }
};

/// Coefficients alpha with K alpha = m at the expansion points.
Eigen::VectorXd alphas_from_mean(const Eigen::VectorXd& mean_vec, const Eigen::MatrixXd& gram_matrix,
                                 const RidgePolicy& policy = {});

/// Projects an arbitrary mean known at `points` onto span{K(., t_i)}.
FiniteExpansionMean expansion_from_values(const KernelSpec& kernel, std::vector<double> points,
                                          const Eigen::VectorXd& values, const RidgePolicy& policy = {});

/// ||m||_K^2 = alpha^T K alpha.
double rkhs_norm_sq(const FiniteExpansionMean& mean);

/// Log-score of the optimal rule for a finite-expansion mean difference:
///   sum_i alpha_i (x(t_i) - (m0(t_i) + m1(t_i)) / 2) - log((1 - p) / p).
/// The predicted label is 1 iff the score is strictly positive.
double bayes_discriminant(const Eigen::VectorXd& x_at_points, const FiniteExpansionMean& mean,
                          const Eigen::VectorXd& m0_at_points, const Eigen::VectorXd& m1_at_points, double p);

inline int label_from_score(double score) { return score > 0.0 ? 1 : 0; }

/// Standard normal CDF through erfc.
double normal_cdf(double x);

/// Closed-form Bayes error for Gaussian classes whose means differ by m with
/// ||m||_K = norm_k and prior p = P(Y = 1). As norm_k -> 0 with p = 1/2 the
/// limit is 1/2; that degenerate case is rejected rather than returned.
double bayes_error(double norm_k, double p);

struct TruncatedProblem {
  std::size_t r = 0;
  double norm_sq = 0.0;
  double bayes_error = 0.0;
};

/// Approximating problems obtained by keeping the first r Karhunen-Loeve
/// coordinates: ||m_r||^2 = sum_{j<=r} mu_j^2 / theta_j.
std::vector<TruncatedProblem> truncation_sequence(std::span<const double> mu, const EigenSystem& eigen,
                                                  std::size_t r_max);

}  // namespace rkfda
