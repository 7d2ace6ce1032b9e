#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rkfda {

// Error taxonomy. The CLI maps these onto exit codes (usage 2, parse 3,
// numeric 4).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public NumericError {
 public:
  using NumericError::NumericError;
};

class TrainingFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using Curve = Eigen::VectorXd;

/// Equispaced sampling times shared by every curve of a dataset.
class Grid {
 public:
  Grid() = default;

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const { return points_; }
  double t_min() const { return points_.front(); }
  double t_max() const { return points_.back(); }
  double step() const { return points_[1] - points_[0]; }

  /// Index of the grid point equal to t (within 1e-9 of a step), if any.
  std::optional<std::size_t> index_of(double t) const;
  /// Index of the grid point closest to t; t is clamped to the grid range.
  std::size_t nearest_index(double t) const;
  std::vector<std::size_t> indices_of(std::span<const double> times) const;

  bool operator==(const Grid& other) const { return points_ == other.points_; }

  friend Grid make_grid(std::size_t count, double t_min, double t_max);

 private:
  std::vector<double> points_;
};

/// Equispaced grid with both endpoints included.
Grid make_grid(std::size_t count, double t_min, double t_max);

/// Validates that `points` are strictly increasing and equispaced within
/// `rel_tol` of the first step, then returns the exact grid on the same range.
Grid grid_from_points(std::span<const double> points, double rel_tol = 1e-9);

struct PriorMode {
  bool estimated = false;
  double p = 0.5;

  static PriorMode fixed(double p);
  static PriorMode estimate() { return {true, 0.5}; }
};

/// Discretized curves (one per row) with 0/1 labels on a common grid.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(Grid grid, Eigen::MatrixXd curves, std::vector<int> labels,
                 PriorMode prior = PriorMode::fixed(0.5));

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& curves() const { return curves_; }
  const std::vector<int>& labels() const { return labels_; }
  const PriorMode& prior() const { return prior_; }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  Curve curve(std::size_t i) const { return curves_.row(static_cast<Eigen::Index>(i)).transpose(); }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t count(int label) const;

  LabeledDataset with_prior(PriorMode prior) const;

 private:
  Grid grid_;
  Eigen::MatrixXd curves_;
  std::vector<int> labels_;
  PriorMode prior_;
};

/// p = P(Y = 1): the configured value or n1/n.
double class_prior(const LabeledDataset& dataset);

/// Log prior odds log((1-p)/p) used as the discriminant offset.
double log_prior_odds(double p);

struct SelectionResult {
  std::vector<double> points;
  std::vector<std::size_t> indices;
  std::vector<double> psi_trace;

  std::size_t size() const { return points.size(); }
  /// The first d selected points (greedy prefix).
  SelectionResult prefix(std::size_t d) const;
};

}  // namespace rkfda
