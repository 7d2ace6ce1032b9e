#include "rkfda/core.hpp"

#include <algorithm>
#include <cmath>

namespace rkfda {

Grid make_grid(std::size_t count, double t_min, double t_max) {
  if (count < 2) throw InvalidArgument("grid needs at least 2 points");
  if (!std::isfinite(t_min) || !std::isfinite(t_max)) throw InvalidArgument("grid bounds must be finite");
  if (!(t_min < t_max)) throw InvalidArgument("grid requires t_min < t_max");
  Grid g;
  g.points_.resize(count);
  const double span = t_max - t_min;
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g.points_[i] = t_min + span * (static_cast<double>(i) / last);
  g.points_.back() = t_max;
  return g;
}

Grid grid_from_points(std::span<const double> points, double rel_tol) {
  if (points.size() < 2) throw InvalidArgument("grid needs at least 2 points");
  for (double t : points)
    if (!std::isfinite(t)) throw InvalidArgument("grid times must be finite");
  const double step = points[1] - points[0];
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = points[i] - points[i - 1];
    if (!(d > 0)) throw InvalidArgument("grid times must be strictly increasing");
    if (std::abs(d - step) > rel_tol * step) throw InvalidArgument("grid times are not equispaced");
  }
  return make_grid(points.size(), points.front(), points.back());
}

std::optional<std::size_t> Grid::index_of(double t) const {
  const std::size_t i = nearest_index(t);
  if (std::abs(points_[i] - t) <= 1e-9 * step()) return i;
  return std::nullopt;
}

std::size_t Grid::nearest_index(double t) const {
  const double pos = (t - t_min()) / step();
  const double r = std::round(pos);
  if (r <= 0) return 0;
  return std::min(static_cast<std::size_t>(r), size() - 1);
}

std::vector<std::size_t> Grid::indices_of(std::span<const double> times) const {
  std::vector<std::size_t> out;
  out.reserve(times.size());
  for (double t : times) {
    auto i = index_of(t);
    if (!i) throw InvalidArgument("time " + std::to_string(t) + " is not a grid point");
    out.push_back(*i);
  }
  return out;
}

PriorMode PriorMode::fixed(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("fixed prior must lie in (0, 1)");
  return {false, p};
}

LabeledDataset::LabeledDataset(Grid grid, Eigen::MatrixXd curves, std::vector<int> labels, PriorMode prior)
    : grid_(std::move(grid)), curves_(std::move(curves)), labels_(std::move(labels)), prior_(prior) {
  if (static_cast<std::size_t>(curves_.rows()) != labels_.size())
    throw InvalidArgument("curves and labels differ in length");
  if (!labels_.empty() && static_cast<std::size_t>(curves_.cols()) != grid_.size())
    throw InvalidArgument("curve length differs from grid size");
  for (int y : labels_)
    if (y != 0 && y != 1) throw InvalidArgument("labels must be 0 or 1");
  if (!curves_.allFinite()) throw InvalidArgument("curve values must be finite");
}

std::size_t LabeledDataset::count(int label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

LabeledDataset LabeledDataset::with_prior(PriorMode prior) const {
  LabeledDataset copy = *this;
  copy.prior_ = prior;
  return copy;
}

double class_prior(const LabeledDataset& dataset) {
  if (dataset.empty()) throw InvalidArgument("class prior of an empty dataset");
  if (!dataset.prior().estimated) return dataset.prior().p;
  return static_cast<double>(dataset.count(1)) / static_cast<double>(dataset.size());
}

double log_prior_odds(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("prior must lie in (0, 1)");
  return std::log((1.0 - p) / p);
}

SelectionResult SelectionResult::prefix(std::size_t d) const {
  d = std::min(d, size());
  SelectionResult out;
  out.points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(d));
  out.indices.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(d));
  out.psi_trace.assign(psi_trace.begin(), psi_trace.begin() + static_cast<std::ptrdiff_t>(d));
  return out;
}

}  // namespace rkfda
