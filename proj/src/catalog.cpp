#include "rkfda/simulate.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace rkfda {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class LineParser {
 public:
  LineParser(std::vector<std::string> tokens, std::size_t line) : tokens_(std::move(tokens)), line_(line) {}

  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& word() {
    if (done()) fail("unexpected end of line");
    return tokens_[pos_++];
  }
  double number() {
    const std::string& w = word();
    try {
      std::size_t used = 0;
      const double v = std::stod(w, &used);
      if (used != w.size()) fail("malformed number '" + w + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("malformed number '" + w + "'");
    }
    return 0.0;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

ProcessSpec parse_process(LineParser& p) {
  const std::string kind = p.word();
  if (kind == "brownian") return ProcessSpec::brownian();
  if (kind == "bridge") return ProcessSpec::bridge();
  if (kind == "sb") return ProcessSpec::smoothed_brownian(kSmoothBandwidth);
  if (kind == "ssb") return ProcessSpec::smoothed_brownian(kExtraSmoothBandwidth);
  try {
    if (kind == "ou") {
      const double theta = p.number();
      const double sigma2 = p.number();
      return ProcessSpec::ornstein_uhlenbeck(theta, sigma2);
    }
    if (kind == "smooth") return ProcessSpec::smoothed_brownian(p.number());
  } catch (const InvalidArgument& e) {
    p.fail(e.what());
  }
  p.fail("unknown process '" + kind + "'");
}

TrendSpec parse_trend_term(LineParser& p) {
  const std::string kind = p.word();
  try {
    if (kind == "zero") return TrendSpec::zero();
    if (kind == "linear") return TrendSpec::linear(p.number());
    if (kind == "slope") return TrendSpec::random_slope(p.number());
    if (kind == "hillside") {
      const double t0 = p.number();
      return TrendSpec::hillside(t0, p.number());
    }
    if (kind == "peak") {
      const double m = p.number();
      const double k = p.number();
      const double coef = p.number();
      if (m != std::floor(m)) p.fail("peak level must be an integer");
      return TrendSpec::peak(static_cast<int>(m), k, coef);
    }
  } catch (const InvalidArgument& e) {
    p.fail(e.what());
  }
  p.fail("unknown trend '" + kind + "'");
}

// "<process> : <term> + <term> ..."
Component parse_component(const std::string& rest, double weight, std::size_t line) {
  const auto colon = rest.find(':');
  if (colon == std::string::npos) throw ParseError("component needs '<process> : <trend>'", line);
  Component c;
  c.weight = weight;
  LineParser proc(split_ws(rest.substr(0, colon)), line);
  c.process = parse_process(proc);
  if (!proc.done()) proc.fail("trailing tokens after process");

  std::vector<TrendSpec> terms;
  std::istringstream trend_text(rest.substr(colon + 1));
  for (std::string piece; std::getline(trend_text, piece, '+');) {
    LineParser tp(split_ws(piece), line);
    terms.push_back(parse_trend_term(tp));
    if (!tp.done()) tp.fail("trailing tokens in trend term");
  }
  if (terms.empty()) throw ParseError("component needs a trend", line);
  c.trend = terms.size() == 1 ? terms.front() : TrendSpec::sum(std::move(terms));
  return c;
}

void finish_model(ModelSpec& m, bool has_marginal, std::size_t line) {
  if (has_marginal) {
    m.type = ModelSpec::Type::Logistic;
    if (m.link.empty()) throw ParseError("logistic model " + m.id + " has no link terms", line);
    if (!m.class0.empty() || !m.class1.empty())
      throw ParseError("model " + m.id + " mixes marginal and class distributions", line);
  } else {
    m.type = ModelSpec::Type::Conditional;
    if (m.class0.empty() || m.class1.empty()) throw ParseError("model " + m.id + " needs class0 and class1", line);
  }
}

}  // namespace

std::vector<ModelSpec> parse_catalog(std::istream& in) {
  std::vector<ModelSpec> out;
  std::optional<ModelSpec> current;
  bool has_marginal = false;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto space = text.find_first_of(" \t");
    const std::string key = text.substr(0, space);
    const std::string rest = space == std::string::npos ? std::string{} : trim(text.substr(space));
    LineParser p(split_ws(rest), lineno);

    if (key == "model") {
      if (current) throw ParseError("nested model block", lineno);
      current = ModelSpec{};
      current->id = p.word();
      has_marginal = false;
      continue;
    }
    if (!current) throw ParseError("'" + key + "' outside a model block", lineno);
    ModelSpec& m = *current;
    if (key == "end") {
      finish_model(m, has_marginal, lineno);
      for (const auto& other : out)
        if (other.id == m.id) throw ParseError("duplicate model id " + m.id, lineno);
      out.push_back(std::move(m));
      current.reset();
    } else if (key == "class0" || key == "class1") {
      const double w = p.number();
      if (!(w > 0)) p.fail("mixture weight must be positive");
      const auto after = rest.find_first_of(" \t");
      if (after == std::string::npos) p.fail("component needs a process");
      (key == "class0" ? m.class0 : m.class1).push_back(parse_component(rest.substr(after), w, lineno));
    } else if (key == "marginal") {
      m.marginal = parse_component(rest, 1.0, lineno);
      has_marginal = true;
    } else if (key == "term") {
      LinkTerm t;
      t.coefficient = p.number();
      const std::string f = p.word();
      t.index = p.number();
      if (f == "id") t.func = LinkTerm::Func::Identity;
      else if (f == "abs") t.func = LinkTerm::Func::Abs;
      else if (f == "inv") t.func = LinkTerm::Func::Inverse;
      else if (f == "pow") {
        t.func = LinkTerm::Func::Power;
        t.power = p.number();
      } else p.fail("unknown link function '" + f + "'");
      m.link.push_back(t);
    } else if (key == "prior") {
      m.prior = p.number();
      if (!(m.prior > 0 && m.prior < 1)) p.fail("prior must lie in (0, 1)");
    } else if (key == "relevant") {
      while (!p.done()) m.relevant.push_back(p.number());
    } else if (key == "exclude_endpoints") {
      m.exclude_endpoints = true;
    } else if (key == "index_scale") {
      m.index_scale = p.number();
      if (!(m.index_scale > 0)) p.fail("index_scale must be positive");
    } else {
      p.fail("unknown key '" + key + "'");
    }
    if (key != "end" && key != "class0" && key != "class1" && key != "marginal" && key != "relevant" && !p.done())
      p.fail("trailing tokens");
  }
  if (current) throw ParseError("model block " + current->id + " is not closed", lineno);
  return out;
}

std::vector<ModelSpec> parse_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open catalog " + path, 0);
  return parse_catalog(in);
}

const std::vector<ModelSpec>& builtin_catalog() {
  static const std::vector<ModelSpec> catalog = [] {
    std::istringstream in(
#include "builtin_catalog.inc"
    );
    return parse_catalog(in);
  }();
  return catalog;
}

const ModelSpec& find_model(const std::vector<ModelSpec>& catalog, const std::string& id) {
  for (const auto& m : catalog)
    if (m.id == id) return m;
  throw InvalidArgument("unknown model id '" + id + "'");
}

}  // namespace rkfda
