#include "rkfda/bench.hpp"

#include "rkfda/classify.hpp"
#include "rkfda/select.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace rkfda {

std::string method_name(Method m) {
  switch (m) {
    case Method::RkC: return "RK-C";
    case Method::RkBC: return "RK_B-C";
    case Method::Knn: return "kNN";
    case Method::Centroid: return "Centroid";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::RkC, Method::RkBC, Method::Knn, Method::Centroid})
    if (method_name(m) == name) return m;
  throw InvalidArgument("unknown method '" + name + "'");
}

void ExperimentPlan::validate() const {
  if (models.empty()) throw InvalidArgument("plan lists no models");
  if (sizes.empty()) throw InvalidArgument("plan lists no sample sizes");
  if (methods.empty()) throw InvalidArgument("plan lists no methods");
  if (runs < 1) throw InvalidArgument("plan needs at least one run");
  if (test_size < 1 || validation_size < 1) throw InvalidArgument("test and validation sizes must be positive");
  if (grid_count < 2) throw InvalidArgument("grid_count must be at least 2");
  if (d_max < 1) throw InvalidArgument("d_max must be positive");
  for (std::size_t n : sizes)
    if (n < 4) throw InvalidArgument("training size must be at least 4");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& v, std::size_t line) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a nonnegative integer, got '" + v + "'", line);
  try {
    return std::stoull(v);
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range: '" + v + "'", line);
  }
}

}  // namespace

ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "models") {
      plan.models = split_list(value);
    } else if (key == "sizes") {
      plan.sizes.clear();
      for (const auto& v : split_list(value)) plan.sizes.push_back(parse_uint(v, lineno));
    } else if (key == "methods") {
      plan.methods.clear();
      try {
        for (const auto& v : split_list(value)) plan.methods.push_back(parse_method(v));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), lineno);
      }
    } else if (key == "knn_ks") {
      plan.knn_ks.clear();
      for (const auto& v : split_list(value)) plan.knn_ks.push_back(parse_uint(v, lineno));
    } else if (key == "runs") {
      plan.runs = parse_uint(value, lineno);
    } else if (key == "test_size") {
      plan.test_size = parse_uint(value, lineno);
    } else if (key == "validation_size") {
      plan.validation_size = parse_uint(value, lineno);
    } else if (key == "grid_count") {
      plan.grid_count = parse_uint(value, lineno);
    } else if (key == "d_max") {
      plan.d_max = parse_uint(value, lineno);
    } else if (key == "centroid_r_max") {
      plan.centroid_r_max = parse_uint(value, lineno);
    } else if (key == "seed") {
      plan.seed = parse_uint(value, lineno);
    } else if (key == "threads") {
      plan.threads = parse_uint(value, lineno);
    } else if (key == "histogram_d") {
      plan.histogram_d = parse_uint(value, lineno);
    } else if (key == "catalog") {
      plan.catalog = value;
    } else {
      throw ParseError("unknown plan key '" + key + "'", lineno);
    }
  }
  try {
    plan.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), 0);
  }
  return plan;
}

ExperimentPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open plan " + path, 0);
  return parse_plan(in);
}

std::size_t resolve_threads(std::size_t requested) {
  std::size_t n = requested;
  std::size_t cap = 0;
  if (const char* env = std::getenv("RKFDA_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = v;
  }
  if (n == 0) n = cap ? cap : std::max(1u, std::thread::hardware_concurrency());
  else if (cap) n = std::min(n, cap);
  return std::max<std::size_t>(1, n);
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task) {
  threads = std::min(std::max<std::size_t>(1, threads), std::max<std::size_t>(1, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

struct MethodOutcome {
  bool ok = false;
  double accuracy = 0.0;
  double chosen_d = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::vector<std::size_t> selected;
};

struct RunSplits {
  LabeledDataset train;
  LabeledDataset validation;
  LabeledDataset test;
};

RunSplits make_splits(const ModelSpec& model, std::size_t n, std::size_t run, const ExperimentPlan& plan,
                      const Grid& grid) {
  const std::uint64_t base = derive_seed({plan.seed, hash_string(model.id), n, run});
  return {gen_model_dataset(model, n, grid, derive_seed({base, 0})).with_prior(PriorMode::fixed(0.5)),
          gen_model_dataset(model, plan.validation_size, grid, derive_seed({base, 1})).with_prior(PriorMode::fixed(0.5)),
          gen_model_dataset(model, plan.test_size, grid, derive_seed({base, 2})).with_prior(PriorMode::fixed(0.5))};
}

// Greedy sequence once, Fisher rules on each prefix, d by validation
// (smallest d on ties).
MethodOutcome run_rk(const RunSplits& s, const ModelSpec& model, const ExperimentPlan& plan, bool oracle) {
  const Grid& grid = s.train.grid();
  SelectionConfig cfg;
  cfg.candidate_mask = candidate_mask(model, grid);
  cfg.d_max = std::min(plan.d_max, cfg.candidate_mask.size());
  std::optional<CovarianceProvider> brownian;
  if (oracle) {
    cfg.mode = OracleMode{KernelSpec::brownian(), std::nullopt};
    brownian = oracle_gram_provider(KernelSpec::brownian(), grid);
  }
  const SelectionResult sel = greedy_select(s.train, cfg);
  const CovarianceProvider* cov = brownian ? &*brownian : nullptr;

  double best_err = std::numeric_limits<double>::infinity();
  std::size_t best_d = 0;
  for (std::size_t d = 1; d <= sel.size(); ++d) {
    std::span<const std::size_t> idx(sel.indices.data(), d);
    double err;
    try {
      err = error_rate(train_rkc(s.train, idx, cov, cfg.ridge), s.validation);
    } catch (const TrainingFailure&) {
      continue;
    }
    if (err < best_err) {
      best_err = err;
      best_d = d;
    }
  }
  if (best_d == 0) throw TrainingFailure("no trainable prefix of the selection");
  std::span<const std::size_t> idx(sel.indices.data(), best_d);
  MethodOutcome out;
  out.ok = true;
  out.accuracy = 1.0 - error_rate(train_rkc(s.train, idx, cov, cfg.ridge), s.test);
  out.chosen_d = static_cast<double>(best_d);
  out.selected = sel.indices;
  return out;
}

MethodOutcome run_knn(const RunSplits& s, const ExperimentPlan& plan) {
  const std::vector<double> val = knn_error_rates(s.train, s.validation, plan.knn_ks);
  std::size_t best_k = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < plan.knn_ks.size(); ++q)
    if (!std::isnan(val[q]) && (val[q] < best_err || (val[q] == best_err && plan.knn_ks[q] < best_k))) {
      best_err = val[q];
      best_k = plan.knn_ks[q];
    }
  if (best_k == 0) throw TrainingFailure("no admissible k");
  const std::size_t ks[] = {best_k};
  MethodOutcome out;
  out.ok = true;
  out.accuracy = 1.0 - knn_error_rates(s.train, s.test, ks).front();
  return out;
}

MethodOutcome run_centroid(const RunSplits& s, const ExperimentPlan& plan) {
  const EigenSystem eigen =
      discretized_eigen(KernelSpec::empirical(pooled_cov_full(s.train), s.train.grid()), s.train.grid());
  const std::size_t r_max = std::min(plan.centroid_r_max, usable_components(eigen));
  if (r_max == 0) throw TrainingFailure("pooled covariance has no usable spectrum");
  double best_err = std::numeric_limits<double>::infinity();
  std::size_t best_r = 0;
  for (std::size_t r = 1; r <= r_max; ++r) {
    const double err = error_rate(train_centroid(s.train, eigen, r), s.validation);
    if (err < best_err) {
      best_err = err;
      best_r = r;
    }
  }
  MethodOutcome out;
  out.ok = true;
  out.accuracy = 1.0 - error_rate(train_centroid(s.train, eigen, best_r), s.test);
  return out;
}

MethodOutcome run_method(Method m, const RunSplits& s, const ModelSpec& model, const ExperimentPlan& plan) {
  const auto start = std::chrono::steady_clock::now();
  MethodOutcome out;
  try {
    switch (m) {
      case Method::RkC: out = run_rk(s, model, plan, false); break;
      case Method::RkBC: out = run_rk(s, model, plan, true); break;
      case Method::Knn: out = run_knn(s, plan); break;
      case Method::Centroid: out = run_centroid(s, plan); break;
    }
  } catch (const NumericError&) {
    out = MethodOutcome{};
  } catch (const InvalidArgument&) {
    out = MethodOutcome{};
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

RunReport run_experiment(const ExperimentPlan& plan, const std::vector<ModelSpec>& catalog) {
  plan.validate();
  std::vector<const ModelSpec*> models;
  for (const auto& id : plan.models) models.push_back(&find_model(catalog, id));
  const Grid grid = make_grid(plan.grid_count, 0.0, 1.0);

  const std::size_t cells = models.size() * plan.sizes.size();
  const std::size_t tasks = cells * plan.runs;
  // outcomes[task][method]
  std::vector<std::vector<MethodOutcome>> outcomes(tasks);
  parallel_for(tasks, resolve_threads(plan.threads), [&](std::size_t task) {
    const std::size_t cell = task / plan.runs;
    const std::size_t run = task % plan.runs;
    const ModelSpec& model = *models[cell / plan.sizes.size()];
    const std::size_t n = plan.sizes[cell % plan.sizes.size()];
    const RunSplits splits = make_splits(model, n, run, plan, grid);
    std::vector<MethodOutcome> res;
    for (Method m : plan.methods) res.push_back(run_method(m, splits, model, plan));
    outcomes[task] = std::move(res);
  });

  RunReport report;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const ModelSpec& model = *models[cell / plan.sizes.size()];
    const std::size_t n = plan.sizes[cell % plan.sizes.size()];
    for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
      const Method method = plan.methods[mi];
      ReportRow row;
      row.model = model.id;
      row.n = n;
      row.method = method;
      const bool rk = method == Method::RkC || method == Method::RkBC;
      SelectionHistogram hist{model.id, n, method, grid, std::vector<std::size_t>(grid.size(), 0)};
      double sum = 0.0, sum_sq = 0.0, sum_d = 0.0;
      for (std::size_t run = 0; run < plan.runs; ++run) {
        const MethodOutcome& o = outcomes[cell * plan.runs + run][mi];
        row.wall_seconds += o.seconds;
        if (!o.ok) {
          ++row.failed_runs;
          continue;
        }
        ++row.runs;
        sum += o.accuracy;
        sum_sq += o.accuracy * o.accuracy;
        if (rk) sum_d += o.chosen_d;
        for (std::size_t k = 0; k < std::min(plan.histogram_d, o.selected.size()); ++k) ++hist.counts[o.selected[k]];
      }
      const double cnt = static_cast<double>(row.runs);
      row.mean_accuracy = row.runs ? sum / cnt : std::numeric_limits<double>::quiet_NaN();
      row.sd_accuracy = row.runs > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / cnt) / (cnt - 1.0))) : 0.0;
      row.mean_d = rk && row.runs ? sum_d / cnt : std::numeric_limits<double>::quiet_NaN();
      report.rows.push_back(row);
      if (rk) report.histograms.push_back(std::move(hist));
    }
  }
  return report;
}

RunReport run_experiment(const ExperimentPlan& plan) {
  if (plan.catalog.empty()) return run_experiment(plan, builtin_catalog());
  return run_experiment(plan, parse_catalog_file(plan.catalog));
}

double RecoveryHistogram::fraction_matching(std::size_t k) const {
  if (matches.empty()) return 0.0;
  const auto hits = std::count_if(matches.begin(), matches.end(), [k](std::size_t m) { return m >= k; });
  return static_cast<double>(hits) / static_cast<double>(matches.size());
}

RecoveryHistogram variable_recovery_histogram(const ModelSpec& model, std::size_t n, std::size_t runs, std::size_t d,
                                              std::uint64_t seed, std::size_t grid_count,
                                              std::size_t tolerance_steps, std::size_t threads) {
  if (runs < 1 || d < 1) throw InvalidArgument("histogram needs runs >= 1 and d >= 1");
  RecoveryHistogram h;
  h.grid = make_grid(grid_count, 0.0, 1.0);
  h.counts.assign(grid_count, 0);
  h.relevant_count = model.relevant.size();
  std::vector<std::vector<std::size_t>> selections(runs);
  parallel_for(runs, resolve_threads(threads), [&](std::size_t run) {
    const std::uint64_t base = derive_seed({seed, hash_string(model.id), n, run});
    const LabeledDataset train = gen_model_dataset(model, n, h.grid, derive_seed({base, 0}));
    SelectionConfig cfg;
    cfg.candidate_mask = candidate_mask(model, h.grid);
    cfg.d_max = std::min(d, cfg.candidate_mask.size());
    try {
      selections[run] = greedy_select(train, cfg).indices;
    } catch (const NumericError&) {
    } catch (const InvalidArgument&) {
    }
  });
  const double tol = static_cast<double>(tolerance_steps) * h.grid.step() * (1.0 + 1e-9);
  for (const auto& sel : selections) {
    for (std::size_t i : sel) ++h.counts[i];
    std::size_t matched = 0;
    for (double t : model.relevant)
      if (std::any_of(sel.begin(), sel.end(), [&](std::size_t i) { return std::abs(h.grid[i] - t) <= tol; })) ++matched;
    h.matches.push_back(matched);
  }
  return h;
}

}  // namespace rkfda
