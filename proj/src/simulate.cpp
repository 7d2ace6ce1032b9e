#include "rkfda/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace rkfda {

TrendSpec TrendSpec::linear(double c) {
  TrendSpec t;
  t.kind = Kind::Linear;
  t.slope = c;
  return t;
}

TrendSpec TrendSpec::random_slope(double sd) {
  if (!(sd >= 0)) throw InvalidArgument("random slope sd must be nonnegative");
  TrendSpec t;
  t.kind = Kind::RandomSlope;
  t.slope = sd;
  return t;
}

TrendSpec TrendSpec::peak(int m, double k, double coefficient) {
  if (m < 1 || m > 30) throw InvalidArgument("peak level m must lie in [1, 30]");
  if (!(k >= 1.0 && k <= std::ldexp(1.0, m - 1))) throw InvalidArgument("peak position k must lie in [1, 2^(m-1)]");
  TrendSpec t;
  t.kind = Kind::Peak;
  t.level = m;
  t.position = k;
  t.coefficient = coefficient;
  return t;
}

TrendSpec TrendSpec::hillside(double t0, double b) {
  TrendSpec t;
  t.kind = Kind::Hillside;
  t.t0 = t0;
  t.rate = b;
  return t;
}

TrendSpec TrendSpec::sum(std::vector<TrendSpec> terms) {
  TrendSpec t;
  t.kind = Kind::Sum;
  t.terms = std::move(terms);
  return t;
}

double peak_function(int m, double k, double t) {
  if (m < 1 || m > 30 || !(k >= 1.0 && k <= std::ldexp(1.0, m - 1)))
    throw InvalidArgument("invalid peak function indices");
  const double width = std::ldexp(1.0, -m);
  const double height = std::sqrt(std::ldexp(1.0, m - 1));
  const double a = (2 * k - 2) * width;
  const double b = (2 * k - 1) * width;
  const double c = 2 * k * width;
  return height * (std::clamp(t, a, b) - a) - height * (std::clamp(t, b, c) - b);
}

double trend_eval(const TrendSpec& spec, double t) {
  switch (spec.kind) {
    case TrendSpec::Kind::Zero:
    case TrendSpec::Kind::RandomSlope:
      return 0.0;
    case TrendSpec::Kind::Linear:
      return spec.slope * t;
    case TrendSpec::Kind::Peak:
      return spec.coefficient * peak_function(spec.level, spec.position, t);
    case TrendSpec::Kind::Hillside:
      return t >= spec.t0 ? spec.rate * (t - spec.t0) : 0.0;
    case TrendSpec::Kind::Sum: {
      double v = 0.0;
      for (const auto& term : spec.terms) v += trend_eval(term, t);
      return v;
    }
  }
  return 0.0;
}

TrendSpec realize_trend(const TrendSpec& spec, Rng& rng) {
  if (spec.kind == TrendSpec::Kind::RandomSlope) return TrendSpec::linear(spec.slope * rng.normal());
  if (spec.kind != TrendSpec::Kind::Sum) return spec;
  TrendSpec out = spec;
  for (auto& term : out.terms) term = realize_trend(term, rng);
  return out;
}

Curve trend_on_grid(const TrendSpec& spec, const Grid& grid) {
  Curve out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) out(static_cast<Eigen::Index>(i)) = trend_eval(spec, grid[i]);
  return out;
}

ProcessSpec ProcessSpec::ornstein_uhlenbeck(double theta, double sigma2) {
  if (!(theta > 0) || !(sigma2 > 0)) throw InvalidArgument("OU parameters must be positive");
  return {Kind::OrnsteinUhlenbeck, theta, sigma2};
}

ProcessSpec ProcessSpec::smoothed_brownian(double bandwidth) {
  if (!(bandwidth > 0)) throw InvalidArgument("smoothing bandwidth must be positive");
  ProcessSpec p;
  p.kind = Kind::SmoothedBrownian;
  p.bandwidth = bandwidth;
  return p;
}

std::string ProcessSpec::name() const {
  switch (kind) {
    case Kind::Brownian: return "brownian";
    case Kind::Bridge: return "bridge";
    case Kind::OrnsteinUhlenbeck: return "ou";
    case Kind::SmoothedBrownian: return "smooth";
  }
  return "unknown";
}

namespace {

Curve brownian_path(const Grid& grid, Rng& rng) {
  const auto g = static_cast<Eigen::Index>(grid.size());
  Curve x(g);
  const double sd = std::sqrt(grid.step());
  x(0) = grid.t_min() > 0 ? std::sqrt(grid.t_min()) * rng.normal() : 0.0;
  for (Eigen::Index i = 1; i < g; ++i) x(i) = x(i - 1) + sd * rng.normal();
  return x;
}

}  // namespace

Curve gen_process(const ProcessSpec& spec, const Grid& grid, Rng& rng) {
  const auto g = static_cast<Eigen::Index>(grid.size());
  switch (spec.kind) {
    case ProcessSpec::Kind::Brownian:
      return brownian_path(grid, rng);
    case ProcessSpec::Kind::Bridge: {
      Curve b = brownian_path(grid, rng);
      const double end = b(g - 1);
      for (Eigen::Index i = 0; i < g; ++i) b(i) -= grid[static_cast<std::size_t>(i)] / grid.t_max() * end;
      b(g - 1) = 0.0;
      return b;
    }
    case ProcessSpec::Kind::OrnsteinUhlenbeck: {
      Curve x(g);
      const double rho = std::exp(-spec.theta * grid.step());
      const double innovation = std::sqrt(spec.sigma2 * (1.0 - rho * rho));
      x(0) = std::sqrt(spec.sigma2) * rng.normal();
      for (Eigen::Index i = 1; i < g; ++i) x(i) = rho * x(i - 1) + innovation * rng.normal();
      return x;
    }
    case ProcessSpec::Kind::SmoothedBrownian: {
      const Curve b = brownian_path(grid, rng);
      Curve x(g);
      const double inv2h2 = 1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
      for (Eigen::Index i = 0; i < g; ++i) {
        double num = 0.0;
        double den = 0.0;
        for (Eigen::Index j = 0; j < g; ++j) {
          const double d = grid[static_cast<std::size_t>(i)] - grid[static_cast<std::size_t>(j)];
          const double w = std::exp(-d * d * inv2h2);
          num += w * b(j);
          den += w;
        }
        x(i) = num / den;
      }
      return x;
    }
  }
  return Curve::Zero(g);
}

std::size_t variable_index(const ModelSpec& model, const Grid& grid, double j) {
  return grid.nearest_index(grid.t_min() + j / model.index_scale * (grid.t_max() - grid.t_min()));
}

double link_value(const ModelSpec& model, const Grid& grid, const Curve& x) {
  double v = 0.0;
  for (const auto& term : model.link) {
    const double xj = x(static_cast<Eigen::Index>(variable_index(model, grid, term.index)));
    double f = xj;
    switch (term.func) {
      case LinkTerm::Func::Identity: f = xj; break;
      case LinkTerm::Func::Abs: f = std::abs(xj); break;
      case LinkTerm::Func::Power: f = std::pow(xj, term.power); break;
      case LinkTerm::Func::Inverse: f = 1.0 / xj; break;
    }
    v += term.coefficient * f;
  }
  return v;
}

namespace {

const Component& pick_component(const std::vector<Component>& mixture, double u, std::size_t& which) {
  double total = 0.0;
  for (const auto& c : mixture) total += c.weight;
  double acc = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    acc += mixture[i].weight / total;
    if (u < acc) {
      which = i;
      return mixture[i];
    }
  }
  which = mixture.size() - 1;
  return mixture.back();
}

Curve draw_component(const Component& c, const Grid& grid, Rng& rng) {
  const TrendSpec trend = realize_trend(c.trend, rng);
  return gen_process(c.process, grid, rng) + trend_on_grid(trend, grid);
}

}  // namespace

GeneratedSample draw_sample(const ModelSpec& model, const Grid& grid, Rng& rng) {
  GeneratedSample s;
  if (model.type == ModelSpec::Type::Conditional) {
    s.label = rng.bernoulli(model.prior) ? 1 : 0;
    const auto& mixture = s.label == 1 ? model.class1 : model.class0;
    if (mixture.empty()) throw InvalidArgument("model " + model.id + " lacks a class distribution");
    const Component& c = pick_component(mixture, rng.uniform(), s.component);
    s.curve = draw_component(c, grid, rng);
  } else {
    s.curve = draw_component(model.marginal, grid, rng);
    const double eta = 1.0 / (1.0 + std::exp(-link_value(model, grid, s.curve)));
    s.label = rng.uniform() < eta ? 1 : 0;
  }
  return s;
}

LabeledDataset gen_model_dataset(const ModelSpec& model, std::size_t n, const Grid& grid, std::uint64_t seed) {
  Eigen::MatrixXd curves(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(grid.size()));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed({seed, i}));
    GeneratedSample s = draw_sample(model, grid, rng);
    curves.row(static_cast<Eigen::Index>(i)) = s.curve.transpose();
    labels[i] = s.label;
  }
  return LabeledDataset(grid, std::move(curves), std::move(labels), PriorMode::fixed(model.prior));
}

std::vector<std::size_t> candidate_mask(const ModelSpec& model, const Grid& grid) {
  std::vector<std::size_t> mask;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (model.exclude_endpoints && (i == 0 || i + 1 == grid.size())) continue;
    mask.push_back(i);
  }
  return mask;
}

}  // namespace rkfda
