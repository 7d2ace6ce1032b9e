#include <doctest.h>

#include "rkfda/estimate.hpp"
#include "rkfda/simulate.hpp"
#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace rkfda;

namespace {

Eigen::MatrixXd draws(const ProcessSpec& p, const Grid& g, std::size_t n, std::uint64_t seed) {
  Eigen::MatrixXd x{Eigen::Index(n), Eigen::Index(g.size())};
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed({seed, i}));
    x.row(Eigen::Index(i)) = gen_process(p, g, rng).transpose();
  }
  return x;
}

double sample_cov(const Eigen::MatrixXd& x, Eigen::Index a, Eigen::Index b) {
  const double ma = x.col(a).mean(), mb = x.col(b).mean();
  return ((x.col(a).array() - ma) * (x.col(b).array() - mb)).sum() / double(x.rows() - 1);
}

}  // namespace

TEST_CASE("peak function examples") {
  CHECK(peak_function(1, 1, 0.5) == doctest::Approx(0.5));
  CHECK(peak_function(1, 1, 1.0) == doctest::Approx(0.0));
  CHECK(peak_function(2, 1, 0.25) == doctest::Approx(std::sqrt(2.0) / 4));
  CHECK(peak_function(2, 2, 0.25) == 0.0);
  CHECK(peak_function(3, 2, 0.375) == doctest::Approx(0.25));
  CHECK_THROWS_AS(peak_function(0, 1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(peak_function(2, 3, 0.5), InvalidArgument);
  CHECK_THROWS_AS(TrendSpec::peak(3, 0.5), InvalidArgument);
}

TEST_CASE("trend_eval examples") {
  const auto h = TrendSpec::hillside(0.5, 4);
  CHECK(trend_eval(h, 0.75) == doctest::Approx(1.0));
  CHECK(trend_eval(h, 0.4) == 0.0);
  CHECK(trend_eval(TrendSpec::linear(2), 0.3) == doctest::Approx(0.6));
  CHECK(trend_eval(TrendSpec::random_slope(5), 0.3) == 0.0);
  const auto s = TrendSpec::sum({TrendSpec::linear(1), TrendSpec::peak(1, 1, 2)});
  CHECK(trend_eval(s, 0.5) == doctest::Approx(1.5));
  Rng rng(1);
  const auto drawn = realize_trend(TrendSpec::sum({TrendSpec::random_slope(1)}), rng);
  CHECK(drawn.terms[0].kind == TrendSpec::Kind::Linear);
}

TEST_CASE("peak functions are Dirichlet orthonormal") {
  const Grid g = make_grid(1000, 0, 1);
  const std::vector<std::pair<int, double>> ids{{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}, {3, 4}};
  std::vector<Eigen::VectorXd> deriv;
  for (auto [m, k] : ids) {
    Eigen::VectorXd d(999);
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      d(Eigen::Index(i)) = (peak_function(m, k, g[i + 1]) - peak_function(m, k, g[i])) / g.step();
    deriv.push_back(d);
  }
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = 0; b < ids.size(); ++b)
      CHECK(std::abs(deriv[a].dot(deriv[b]) * g.step() - (a == b ? 1.0 : 0.0)) < 0.02);
}

TEST_CASE("process moments") {
  const Grid g = make_grid(11, 0, 1);
  const std::size_t n = 20000;
  const auto b = draws(ProcessSpec::brownian(), g, n, 1);
  CHECK(std::abs(sample_cov(b, 10, 10) - 1.0) < 0.03);
  CHECK(std::abs(sample_cov(b, 5, 10) - 0.5) < 0.02);
  CHECK(std::abs(sample_cov(b, 3, 7) - 0.3) < 0.02);
  CHECK(b.col(0).cwiseAbs().maxCoeff() == 0.0);

  const auto br = draws(ProcessSpec::bridge(), g, n, 2);
  CHECK(br.col(10).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(sample_cov(br, 5, 5) - 0.25) < 0.02);
  CHECK(std::abs(sample_cov(br, 3, 7) - (0.3 - 0.21)) < 0.02);

  const auto ou = draws(ProcessSpec::ornstein_uhlenbeck(1, 1), g, n, 3);
  CHECK(std::abs(sample_cov(ou, 0, 10) - std::exp(-1.0)) < 0.03);
  CHECK(std::abs(sample_cov(ou, 4, 4) - 1.0) < 0.03);

  const auto sb = draws(ProcessSpec::smoothed_brownian(kSmoothBandwidth), make_grid(50, 0, 1), 2000, 4);
  // Smoothing shrinks the local roughness of Brownian paths.
  const auto raw = draws(ProcessSpec::brownian(), make_grid(50, 0, 1), 2000, 4);
  const double rough_sb = (sb.col(26) - sb.col(25)).squaredNorm();
  const double rough_b = (raw.col(26) - raw.col(25)).squaredNorm();
  CHECK(rough_sb < 0.2 * rough_b);
}

TEST_CASE("catalog models simulate deterministically") {
  const Grid g = make_grid(30, 0, 1);
  const auto& cat = builtin_catalog();
  CHECK(cat.size() >= 30);
  for (const auto& m : cat) {
    CAPTURE(m.id);
    const auto a = gen_model_dataset(m, 20, g, 5);
    const auto b = gen_model_dataset(m, 20, g, 5);
    CHECK(a.curves() == b.curves());
    CHECK(a.labels() == b.labels());
    CHECK(a.curves().allFinite());
    CHECK(gen_model_dataset(m, 20, g, 6).curves() != a.curves());
    // Curve i is independent of n.
    CHECK(gen_model_dataset(m, 5, g, 5).curves() == a.curves().topRows(5));
  }
  CHECK_THROWS_AS(find_model(cat, "nope"), InvalidArgument);
}

TEST_CASE("G2 class-0 mean at t = 1") {
  const Grid g = make_grid(11, 0, 1);
  const auto ds = gen_model_dataset(find_model(builtin_catalog(), "G2"), 40000, g, 8);
  const auto mom = class_moments(ds);
  CHECK(std::abs(mom.m0_hat(10) - 1.0) < 0.03);
  CHECK(std::abs(mom.m1_hat(10)) < 0.03);
}

TEST_CASE("logistic link at zero is a fair coin") {
  const auto& model = find_model(builtin_catalog(), "L1-B");
  const Grid g = make_grid(100, 0, 1);
  const std::size_t j = variable_index(model, g, 65);
  CHECK(j == 64);
  const auto ds = gen_model_dataset(model, 40000, g, 9);
  double ones = 0, total = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (std::abs(ds.curves()(Eigen::Index(i), Eigen::Index(j))) > 0.03) continue;
    total += 1;
    ones += ds.label(i);
  }
  REQUIRE(total > 500);
  CHECK(std::abs(ones / total - 0.5) < 0.06);
}

TEST_CASE("mixture components follow their weights") {
  const auto& model = find_model(builtin_catalog(), "M7");
  const Grid g = make_grid(10, 0, 1);
  double first = 0, zeros = 0;
  for (std::size_t i = 0; i < 20000; ++i) {
    Rng rng(derive_seed({10, i}));
    const auto s = draw_sample(model, g, rng);
    if (s.label != 0) continue;
    zeros += 1;
    first += s.component == 0;
  }
  CHECK(zeros > 9000);
  CHECK(std::abs(first / zeros - 0.5) < 0.02);
  const auto mask = candidate_mask(model, g);
  CHECK(mask.size() == 8);
  CHECK(mask.front() == 1);
}

TEST_CASE("catalog parse errors carry line numbers") {
  auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      parse_catalog(in);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      return;
    }
    FAIL("no parse error for: " << text);
  };
  fails_at("model a\n  class0 1 brownian : zero\nend\n", 3);
  fails_at("model a\n  class0 1 wiener : zero\n  class1 1 brownian : zero\nend\n", 2);
  fails_at("model a\n  class0 1 brownian : peak 0 1 1\n", 2);
  fails_at("class0 1 brownian : zero\n", 1);
  fails_at("model a\n  class0 1 brownian : zero\n  class1 1 brownian : zero\n", 3);
  fails_at("model a\n  marginal ou 1 1 : zero\nend\n", 3);
  fails_at("model a\n  prior 1.5\nend\n", 2);

  std::istringstream ok(
      "# comment\nmodel a\n  prior 0.3\n  class0 2 ou 2 0.5 : linear 1 + slope 1\n  class1 1 sb : zero\n"
      "  relevant 0.5\nend\nmodel b\n  marginal smooth 0.2 : zero\n  term 1 pow 20 3\n  term 2 abs 40\nend\n");
  const auto cat = parse_catalog(ok);
  REQUIRE(cat.size() == 2);
  CHECK(cat[0].prior == 0.3);
  CHECK(cat[0].class0[0].process.theta == 2.0);
  CHECK(cat[0].class0[0].trend.terms.size() == 2);
  CHECK(cat[1].type == ModelSpec::Type::Logistic);
  CHECK(cat[1].link[0].func == LinkTerm::Func::Power);
  CHECK(cat[1].link[0].power == 3.0);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed({1, 2}) == derive_seed({1, 2}));
  CHECK(derive_seed({1, 2}) != derive_seed({2, 1}));
  CHECK(derive_seed({1}) != derive_seed({1, 0}));
  CHECK(hash_string("toy") != hash_string("G2"));
  CHECK(hash_string("") == 14695981039346656037ull);
}
