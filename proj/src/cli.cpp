#include "rkfda/cli.hpp"

#include "rkfda/bench.hpp"
#include "rkfda/classify.hpp"
#include "rkfda/io.hpp"
#include "rkfda/rkhs.hpp"
#include "rkfda/select.hpp"
#include "rkfda/simulate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rkfda {

namespace {

struct KernelArgs {
  std::string name;
  double theta = 1.0;
  double sigma2 = 1.0;
  double horizon = 1.0;
};

void add_kernel_options(CLI::App* cmd, KernelArgs& k, bool required) {
  auto* opt = cmd->add_option("--kernel", k.name, "brownian | bridge | ou")
                  ->check(CLI::IsMember({"brownian", "bridge", "ou"}));
  if (required) opt->required();
  cmd->add_option("--theta", k.theta, "OU mean reversion rate");
  cmd->add_option("--sigma2", k.sigma2, "OU stationary variance");
  cmd->add_option("--horizon", k.horizon, "bridge end time");
}

KernelSpec make_kernel(const KernelArgs& k) {
  if (k.name == "bridge") return KernelSpec::brownian_bridge(k.horizon);
  if (k.name == "ou") return KernelSpec::ornstein_uhlenbeck(k.theta, k.sigma2);
  return KernelSpec::brownian();
}

PriorMode parse_prior(const std::string& text) {
  if (text == "estimate") return PriorMode::estimate();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidArgument("--prior must be a probability or 'estimate'");
  return PriorMode::fixed(p);
}

template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + path, 0);
  write(file);
  if (!file) throw ParseError("failed writing " + path, 0);
}

struct Options {
  // simulate
  std::string model_id, catalog, out;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::size_t grid = 100;
  double t_max = 1.0;
  // select / train / predict
  std::string data;
  std::size_t d_max = 10;
  std::optional<double> delta;
  KernelArgs kernel;
  std::string method = "rkc";
  std::size_t d = 5, k = 5, r = 3;
  std::string prior = "0.5";
  std::string model_path;
  // bayes
  std::optional<double> norm;
  double p = 0.5;
  std::vector<double> points, alphas;
  // eigen
  std::size_t top = 5;
  // bench
  std::string plan, hist_dir;
  std::size_t threads = 0;
};

int run_simulate(const Options& o, std::ostream& out) {
  const auto catalog = o.catalog.empty() ? builtin_catalog() : parse_catalog_file(o.catalog);
  const ModelSpec& model = find_model(catalog, o.model_id);
  const Grid grid = make_grid(o.grid, 0.0, o.t_max);
  const LabeledDataset ds = gen_model_dataset(model, o.n, grid, o.seed);
  with_output(o.out, out, [&](std::ostream& s) { write_dataset(s, ds); });
  return kExitOk;
}

SelectionConfig selection_config(const Options& o, std::size_t d_max) {
  SelectionConfig cfg;
  cfg.d_max = d_max;
  cfg.delta = o.delta;
  if (!o.kernel.name.empty()) cfg.mode = OracleMode{make_kernel(o.kernel), std::nullopt};
  return cfg;
}

int run_select(const Options& o, std::ostream& out) {
  const LabeledDataset ds = read_dataset_file(o.data);
  write_selection(out, greedy_select(ds, selection_config(o, o.d_max)));
  return kExitOk;
}

int run_train(const Options& o, std::ostream& out) {
  const LabeledDataset ds = read_dataset_file(o.data, parse_prior(o.prior));
  std::optional<TrainedClassifier> clf;
  if (o.method == "rkc") {
    const SelectionResult sel = greedy_select(ds, selection_config(o, o.d));
    clf = train_rkc(ds, sel.indices);
  } else if (o.method == "rkb") {
    Options brownian = o;
    brownian.kernel.name = "brownian";
    const SelectionResult sel = greedy_select(ds, selection_config(brownian, o.d));
    const CovarianceProvider cov = oracle_gram_provider(KernelSpec::brownian(), ds.grid());
    clf = train_rkc(ds, sel.indices, &cov);
  } else if (o.method == "knn") {
    clf = train_knn(ds, o.k);
  } else {
    clf = train_centroid(ds, o.r);
  }
  with_output(o.model_path, out, [&](std::ostream& s) { write_classifier(s, *clf); });
  return kExitOk;
}

int run_predict(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.model_path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + o.model_path, 0);
  const TrainedClassifier clf = read_classifier(in);
  const LabeledDataset ds = read_dataset_file(o.data);
  if (!(ds.grid() == clf.grid())) throw InvalidArgument("dataset grid differs from the model grid");
  const std::vector<int> pred = classify(clf, ds.curves());
  std::size_t wrong = 0;
  out << "row,label,predicted\n";
  for (std::size_t i = 0; i < pred.size(); ++i) {
    out << (i + 1) << ',' << ds.label(i) << ',' << pred[i] << '\n';
    wrong += pred[i] != ds.label(i);
  }
  err << "error_rate " << format_double(pred.empty() ? 0.0 : double(wrong) / double(pred.size())) << '\n';
  return kExitOk;
}

int run_bayes(const Options& o, std::ostream& out) {
  double norm = 0.0;
  if (o.norm) {
    if (!o.points.empty() || !o.alphas.empty()) throw InvalidArgument("use either --norm or --points/--alphas");
    norm = *o.norm;
  } else {
    if (o.kernel.name.empty() || o.points.empty()) throw InvalidArgument("bayes needs --norm or --kernel --points --alphas");
    if (o.points.size() != o.alphas.size()) throw InvalidArgument("--points and --alphas differ in length");
    const FiniteExpansionMean mean(o.points, Eigen::Map<const Eigen::VectorXd>(o.alphas.data(), Eigen::Index(o.alphas.size())),
                                   make_kernel(o.kernel));
    norm = std::sqrt(rkhs_norm_sq(mean));
  }
  out << std::fixed << std::setprecision(6) << bayes_error(norm, o.p) << '\n';
  return kExitOk;
}

int run_eigen(const Options& o, std::ostream& out) {
  const Grid grid = make_grid(o.grid, 0.0, o.t_max);
  const EigenSystem eig = discretized_eigen(make_kernel(o.kernel), grid);
  const std::size_t top = std::min(o.top, eig.size());
  out << "j,theta,t,phi\n";
  for (std::size_t j = 0; j < top; ++j)
    for (std::size_t i = 0; i < grid.size(); ++i)
      out << (j + 1) << ',' << format_double(eig.eigenvalues(Eigen::Index(j))) << ',' << format_double(grid[i]) << ','
          << format_double(eig.eigenfunctions(Eigen::Index(i), Eigen::Index(j))) << '\n';
  return kExitOk;
}

int run_bench(const Options& o, std::ostream& out) {
  ExperimentPlan plan = parse_plan_file(o.plan);
  if (o.threads) plan.threads = o.threads;
  const RunReport report = run_experiment(plan);
  with_output(o.out, out, [&](std::ostream& s) { write_report(s, report); });
  if (!o.hist_dir.empty()) {
    std::filesystem::create_directories(o.hist_dir);
    for (const auto& h : report.histograms) {
      std::string method = method_name(h.method);
      for (char& c : method)
        if (c == '-') c = '_';
      const auto path = std::filesystem::path(o.hist_dir) /
                        ("hist_" + h.model + "_n" + std::to_string(h.n) + "_" + method + ".csv");
      with_output(path.string(), out, [&](std::ostream& s) { write_histogram(s, h.grid, h.counts); });
    }
  }
  return kExitOk;
}

int fail(std::ostream& err, int code, const std::string& kind, const std::string& what) {
  err << what << '\n' << "error: " << kind << '\n';
  return code;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Functional data classification with RKHS variable selection", "rkfda"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "draw a labeled dataset from a catalog model");
  sim->add_option("--model", o.model_id, "model id")->required();
  sim->add_option("--n", o.n, "number of curves");
  sim->add_option("--seed", o.seed, "random seed");
  sim->add_option("--grid", o.grid, "grid points on [0, t-max]")->check(CLI::Range(2, 1000000));
  sim->add_option("--t-max", o.t_max, "grid end time");
  sim->add_option("--catalog", o.catalog, "model catalog file (default: built-in)");
  sim->add_option("--out", o.out, "output CSV (default: stdout)");

  auto* sel = app.add_subcommand("select", "greedy RKHS variable selection");
  sel->add_option("--data", o.data, "dataset CSV")->required();
  sel->add_option("--d-max", o.d_max, "maximum number of points");
  sel->add_option("--delta", o.delta, "minimum separation between points");
  add_kernel_options(sel, o.kernel, false);

  auto* train = app.add_subcommand("train", "fit a classifier and write a model file");
  train->add_option("--data", o.data, "training CSV")->required();
  train->add_option("--method", o.method, "rkc | rkb | knn | centroid")
      ->check(CLI::IsMember({"rkc", "rkb", "knn", "centroid"}));
  train->add_option("--d", o.d, "selected points (rkc, rkb)");
  train->add_option("--delta", o.delta, "minimum separation (rkc, rkb)");
  train->add_option("--k", o.k, "neighbours (knn)");
  train->add_option("--r", o.r, "components (centroid)");
  train->add_option("--prior", o.prior, "P(Y = 1) or 'estimate'");
  train->add_option("--out", o.model_path, "model file (default: stdout)");

  auto* predict = app.add_subcommand("predict", "classify a dataset with a model file");
  predict->add_option("--model", o.model_path, "model file")->required();
  predict->add_option("--data", o.data, "dataset CSV")->required();

  auto* bayes = app.add_subcommand("bayes", "closed-form Bayes error");
  bayes->add_option("--norm", o.norm, "RKHS norm of the mean difference");
  bayes->add_option("--p", o.p, "P(Y = 1)");
  add_kernel_options(bayes, o.kernel, false);
  bayes->add_option("--points", o.points, "expansion points")->delimiter(',');
  bayes->add_option("--alphas", o.alphas, "expansion coefficients")->delimiter(',');

  auto* eigen = app.add_subcommand("eigen", "discretized Karhunen-Loeve eigenpairs");
  add_kernel_options(eigen, o.kernel, true);
  eigen->add_option("--grid", o.grid, "grid points on [0, t-max]")->check(CLI::Range(2, 100000));
  eigen->add_option("--t-max", o.t_max, "grid end time");
  eigen->add_option("--top", o.top, "number of eigenpairs");

  auto* bench = app.add_subcommand("bench", "run a benchmark plan");
  bench->add_option("--plan", o.plan, "plan file")->required();
  bench->add_option("--out", o.out, "report CSV (default: stdout)");
  bench->add_option("--hist-dir", o.hist_dir, "directory for selection histograms");
  bench->add_option("--threads", o.threads, "worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return fail(err, kExitUsage, "usage", e.what());
  }

  try {
    if (sim->parsed()) return run_simulate(o, out);
    if (sel->parsed()) return run_select(o, out);
    if (train->parsed()) return run_train(o, out);
    if (predict->parsed()) return run_predict(o, out, err);
    if (bayes->parsed()) return run_bayes(o, out);
    if (eigen->parsed()) return run_eigen(o, out);
    return run_bench(o, out);
  } catch (const ParseError& e) {
    return fail(err, kExitParse, "parse", e.what());
  } catch (const NumericError& e) {
    return fail(err, kExitNumeric, "numeric", e.what());
  } catch (const InvalidArgument& e) {
    return fail(err, kExitUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(err, kExitNumeric, "numeric", e.what());
  }
}

}  // namespace rkfda
