#pragma once

#include "rkfda/core.hpp"
#include "rkfda/random.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rkfda {

/// Mean trend added to a noise process.
struct TrendSpec {
  enum class Kind { Zero, Linear, RandomSlope, Peak, Hillside, Sum };

  Kind kind = Kind::Zero;
  double slope = 0.0;        // Linear c; RandomSlope sd
  int level = 1;             // Peak m
  double position = 1.0;     // Peak k (the catalog uses k = 1.25 once)
  double coefficient = 1.0;  // Peak coefficient
  double t0 = 0.0;           // Hillside start
  double rate = 0.0;         // Hillside b
  std::vector<TrendSpec> terms;

  static TrendSpec zero() { return {}; }
  static TrendSpec linear(double c);
  static TrendSpec random_slope(double sd);
  static TrendSpec peak(int m, double k, double coefficient = 1.0);
  static TrendSpec hillside(double t0, double b);
  static TrendSpec sum(std::vector<TrendSpec> terms);
};

/// Integrated Haar function Phi_{m,k}(t): a tent of height sqrt(2^{m-1}) / 2^m
/// supported on [(2k-2)/2^m, 2k/2^m].
double peak_function(int m, double k, double t);

/// Closed-form evaluation. A random slope evaluates to its expectation (zero);
/// use realize_trend to draw it.
double trend_eval(const TrendSpec& spec, double t);

/// Replaces every random slope by a drawn N(0, sd^2) slope.
TrendSpec realize_trend(const TrendSpec& spec, Rng& rng);

Curve trend_on_grid(const TrendSpec& spec, const Grid& grid);

struct ProcessSpec {
  enum class Kind { Brownian, Bridge, OrnsteinUhlenbeck, SmoothedBrownian };

  Kind kind = Kind::Brownian;
  double theta = 1.0;
  double sigma2 = 1.0;
  double bandwidth = 0.05;

  static ProcessSpec brownian() { return {}; }
  static ProcessSpec bridge() { return {Kind::Bridge}; }
  static ProcessSpec ornstein_uhlenbeck(double theta = 1.0, double sigma2 = 1.0);
  static ProcessSpec smoothed_brownian(double bandwidth);

  std::string name() const;
};

inline constexpr double kSmoothBandwidth = 0.05;        // sB
inline constexpr double kExtraSmoothBandwidth = 0.10;   // ssB

/// Draws one trajectory with the exact finite-dimensional law on the grid.
Curve gen_process(const ProcessSpec& spec, const Grid& grid, Rng& rng);

/// One mixture component: weight, noise process, trend.
struct Component {
  double weight = 1.0;
  ProcessSpec process;
  TrendSpec trend;
};

/// coef * f(X_j) in a logistic link, where X_j is the catalog's j-th variable.
struct LinkTerm {
  enum class Func { Identity, Abs, Power, Inverse };
  double coefficient = 0.0;
  Func func = Func::Identity;
  double index = 0.0;
  double power = 1.0;
};

struct ModelSpec {
  enum class Type { Conditional, Logistic };

  std::string id;
  Type type = Type::Conditional;
  double prior = 0.5;
  std::vector<Component> class0;
  std::vector<Component> class1;
  Component marginal;
  std::vector<LinkTerm> link;
  /// Times at which the optimal rule depends on the trajectory.
  std::vector<double> relevant;
  bool exclude_endpoints = false;
  /// Catalog variable X_j sits at t_min + (j / index_scale) (t_max - t_min).
  double index_scale = 100.0;
};

/// Grid index of catalog variable X_j.
std::size_t variable_index(const ModelSpec& model, const Grid& grid, double j);

/// Link value psi(x) for a logistic model.
double link_value(const ModelSpec& model, const Grid& grid, const Curve& x);

struct GeneratedSample {
  Curve curve;
  int label = 0;
  std::size_t component = 0;
};

/// One labeled draw. Conditional models draw Y ~ Bernoulli(p), then a mixture
/// component of that class, then the trajectory; logistic models draw the
/// trajectory from the marginal and then Y ~ Bernoulli(eta(x)).
GeneratedSample draw_sample(const ModelSpec& model, const Grid& grid, Rng& rng);

/// n draws; curve i uses the stream derive_seed({seed, i}).
LabeledDataset gen_model_dataset(const ModelSpec& model, std::size_t n, const Grid& grid, std::uint64_t seed);

/// Grid indices admissible for selection under this model (drops the
/// endpoints for bridge-type models).
std::vector<std::size_t> candidate_mask(const ModelSpec& model, const Grid& grid);

// Catalog files: one block per model.
//
//   model G2
//     class0 1 brownian : linear 1
//     class1 1 brownian : zero
//     relevant 1
//   end
//
// Component lines are "<class0|class1> <weight> <process> : <trend>" or
// "marginal <process> : <trend>". Processes: brownian, bridge,
// ou <theta> <sigma2>, sb, ssb, smooth <bandwidth>. Trends are '+'-joined
// terms: zero, linear <c>, slope <sd>, peak <m> <k> <coef>, hillside <t0> <b>.
// Logistic links are "term <coef> <id|abs|pow|inv> <j> [power]" lines.
// Other keys: prior <p>, relevant <t...>, exclude_endpoints, index_scale <s>.
std::vector<ModelSpec> parse_catalog(std::istream& in);
std::vector<ModelSpec> parse_catalog_file(const std::string& path);

/// The catalog compiled in from data/models.catalog.
const std::vector<ModelSpec>& builtin_catalog();

const ModelSpec& find_model(const std::vector<ModelSpec>& catalog, const std::string& id);

}  // namespace rkfda
