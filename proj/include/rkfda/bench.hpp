#pragma once

#include "rkfda/simulate.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rkfda {

enum class Method { RkC, RkBC, Knn, Centroid };

std::string method_name(Method m);
Method parse_method(const std::string& name);

/// Train/validation/test protocol with repeated runs.
struct ExperimentPlan {
  std::vector<std::string> models;
  std::vector<std::size_t> sizes;
  std::size_t runs = 50;
  std::size_t test_size = 1000;
  std::size_t validation_size = 200;
  std::size_t grid_count = 100;
  std::vector<Method> methods{Method::RkC, Method::RkBC, Method::Knn, Method::Centroid};
  std::size_t d_max = 10;
  std::vector<std::size_t> knn_ks{1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21};
  std::size_t centroid_r_max = 20;
  std::uint64_t seed = 1;
  /// Worker count; 0 means RKFDA_THREADS or the hardware concurrency.
  std::size_t threads = 0;
  /// Selections counted in the histograms (first k points of each run).
  std::size_t histogram_d = 6;
  /// Optional catalog path; empty uses the built-in catalog.
  std::string catalog;

  void validate() const;
};

/// Plain-text "key = value" plan, '#' comments; list values are comma separated.
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan parse_plan_file(const std::string& path);

struct ReportRow {
  std::string model;
  std::size_t n = 0;
  Method method = Method::RkC;
  std::size_t runs = 0;
  double mean_accuracy = 0.0;
  double sd_accuracy = 0.0;
  /// Mean validated number of variables (RK methods only; NaN otherwise).
  double mean_d = 0.0;
  std::size_t failed_runs = 0;
  double wall_seconds = 0.0;
};

struct SelectionHistogram {
  std::string model;
  std::size_t n = 0;
  Method method = Method::RkC;
  Grid grid;
  std::vector<std::size_t> counts;
};

struct RunReport {
  std::vector<ReportRow> rows;
  std::vector<SelectionHistogram> histograms;
};

/// Runs every (model, n, method) cell; each run draws independent training,
/// validation and test sets from streams keyed by (seed, model, n, run).
RunReport run_experiment(const ExperimentPlan& plan, const std::vector<ModelSpec>& catalog);
RunReport run_experiment(const ExperimentPlan& plan);

struct RecoveryHistogram {
  Grid grid;
  std::vector<std::size_t> counts;
  /// Per run, how many relevant times had a selected point within tolerance.
  std::vector<std::size_t> matches;
  std::size_t relevant_count = 0;

  /// Fraction of runs matching at least `k` relevant times.
  double fraction_matching(std::size_t k) const;
};

/// Selection frequencies of RK-VS's first d points over R runs, and how well
/// each run recovers the model's relevant times (within `tolerance_steps`
/// grid steps).
RecoveryHistogram variable_recovery_histogram(const ModelSpec& model, std::size_t n, std::size_t runs, std::size_t d,
                                              std::uint64_t seed, std::size_t grid_count = 100,
                                              std::size_t tolerance_steps = 2, std::size_t threads = 0);

/// Worker count from an explicit request, RKFDA_THREADS, or the hardware.
std::size_t resolve_threads(std::size_t requested);

/// Runs task(i) for i in [0, count) on a pool of `threads` workers.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task);

}  // namespace rkfda
