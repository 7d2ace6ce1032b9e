#include "rkfda/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rkfda {

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void write_dataset(std::ostream& out, const LabeledDataset& dataset) {
  out << "label";
  for (double t : dataset.grid().points()) out << ",t_" << format_double(t);
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.label(i);
    const auto row = dataset.curves().row(static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < row.size(); ++j) out << ',' << format_double(row(j));
    out << '\n';
  }
}

void write_dataset_file(const std::string& path, const LabeledDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path, 0);
  write_dataset(out, dataset);
  if (!out) throw ParseError("failed writing " + path, 0);
}

LabeledDataset read_dataset(std::istream& in, PriorMode prior) {
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (!line.empty()) break;
    ++lineno;
  }
  if (line.empty()) throw ParseError("no header", 0);
  const auto header = split_commas(line);
  if (header.front() != "label") throw ParseError("header must start with 'label'", lineno);
  if (header.size() < 3) throw ParseError("header needs at least two grid times", lineno);
  std::vector<double> times;
  for (std::size_t c = 1; c < header.size(); ++c) {
    double t;
    if (header[c].substr(0, 2) != "t_" || !parse_double(header[c].substr(2), t))
      throw ParseError("malformed grid column '" + std::string(header[c]) + "'", lineno);
    times.push_back(t);
  }
  Grid grid;
  try {
    // Headers written elsewhere may carry times rounded to 6 significant digits.
    double scale = 0.0;
    for (double t : times) scale = std::max(scale, std::abs(t));
    const double first_step = std::abs(times[1] - times[0]);
    grid = grid_from_points(times, first_step > 0 ? std::max(1e-6, 2e-5 * scale / first_step) : 1e-6);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), lineno);
  }

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()),
                       lineno);
    if (cells[0] != "0" && cells[0] != "1") throw ParseError("label must be 0 or 1", lineno);
    labels.push_back(cells[0] == "1" ? 1 : 0);
    std::vector<double> values(grid.size());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (!parse_double(cells[c], values[c - 1]) || !std::isfinite(values[c - 1]))
        throw ParseError("malformed value '" + std::string(cells[c]) + "'", lineno);
    }
    rows.push_back(std::move(values));
  }
  Eigen::MatrixXd curves(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      curves(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return LabeledDataset(std::move(grid), std::move(curves), std::move(labels), prior);
}

LabeledDataset read_dataset_file(const std::string& path, PriorMode prior) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  return read_dataset(in, prior);
}

void write_selection(std::ostream& out, const SelectionResult& selection) {
  out << "rank,t,psi\n";
  for (std::size_t i = 0; i < selection.size(); ++i)
    out << (i + 1) << ',' << format_double(selection.points[i]) << ',' << format_double(selection.psi_trace[i]) << '\n';
}

void write_report(std::ostream& out, const RunReport& report) {
  out << "model,n,method,runs,mean_accuracy,sd_accuracy,mean_d,failed_runs\n";
  for (const auto& r : report.rows)
    out << r.model << ',' << r.n << ',' << method_name(r.method) << ',' << r.runs << ',' << format_double(r.mean_accuracy)
        << ',' << format_double(r.sd_accuracy) << ',' << format_double(r.mean_d) << ',' << r.failed_runs << '\n';
}

void write_histogram(std::ostream& out, const Grid& grid, const std::vector<std::size_t>& counts) {
  out << "t,count\n";
  for (std::size_t i = 0; i < grid.size(); ++i) out << format_double(grid[i]) << ',' << counts[i] << '\n';
}

namespace {

void write_vector(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
  out << '\n';
}

void write_grid(std::ostream& out, const Grid& g) {
  out << "grid " << g.size() << ' ' << format_double(g.t_min()) << ' ' << format_double(g.t_max()) << '\n';
}

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) : in_(in) {}

  // Next nonempty line, split into key and numeric fields.
  std::vector<std::string> fields(const std::string& expected_key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      line = strip_cr(line);
      if (!line.empty()) break;
    }
    if (line.empty()) throw ParseError("unexpected end of model file, wanted '" + expected_key + "'", lineno_);
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    if (out.front() != expected_key) throw ParseError("expected '" + expected_key + "', found '" + out.front() + "'", lineno_);
    out.erase(out.begin());
    return out;
  }
  double number(const std::string& s) {
    double v;
    if (!parse_double(s, v)) throw ParseError("malformed number '" + s + "'", lineno_);
    return v;
  }
  std::size_t count(const std::string& s) {
    const double v = number(s);
    if (v < 0 || v != std::floor(v)) throw ParseError("expected a count, found '" + s + "'", lineno_);
    return static_cast<std::size_t>(v);
  }
  Eigen::VectorXd vector(const std::string& key, std::size_t expected) {
    const auto f = fields(key);
    if (f.size() != expected) throw ParseError("'" + key + "' has wrong length", lineno_);
    Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(f[i]);
    return v;
  }
  Grid grid() {
    const auto f = fields("grid");
    if (f.size() != 3) throw ParseError("grid needs count, t_min, t_max", lineno_);
    try {
      return make_grid(count(f[0]), number(f[1]), number(f[2]));
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lineno_);
    }
  }
  std::size_t line() const { return lineno_; }

 private:
  std::istream& in_;
  std::size_t lineno_ = 0;
};

}  // namespace

void write_classifier(std::ostream& out, const TrainedClassifier& classifier) {
  out << kModelFormatTag << '\n';
  out << "kind " << classifier.kind() << '\n';
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        write_grid(out, m.grid);
        if constexpr (std::is_same_v<T, RkcModel>) {
          out << "d " << m.indices.size() << '\n';
          out << "indices";
          for (std::size_t i : m.indices) out << ' ' << i;
          out << '\n';
          out << "points";
          for (std::size_t i : m.indices) out << ' ' << format_double(m.grid[i]);
          out << '\n';
          write_vector(out, "alphas", m.alphas);
          write_vector(out, "midpoint", m.midpoint);
          out << "log_prior_odds " << format_double(m.log_prior_odds) << '\n';
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          out << "k " << m.k << '\n';
          out << "samples " << m.labels.size() << '\n';
          for (std::size_t i = 0; i < m.labels.size(); ++i) {
            out << "sample " << m.labels[i];
            for (Eigen::Index j = 0; j < m.curves.cols(); ++j)
              out << ' ' << format_double(m.curves(static_cast<Eigen::Index>(i), j));
            out << '\n';
          }
        } else {
          out << "r " << m.r << '\n';
          out << "centroids " << format_double(m.centroid0) << ' ' << format_double(m.centroid1) << '\n';
          write_vector(out, "psi", m.psi);
        }
      },
      classifier.model());
}

TrainedClassifier read_classifier(std::istream& in) {
  std::string tag;
  std::getline(in, tag);
  if (strip_cr(tag) != kModelFormatTag) throw ParseError("not an rkfda model file (missing format tag)", 1);
  ModelReader r(in);
  const auto kind = r.fields("kind");
  if (kind.size() != 1) throw ParseError("malformed kind line", r.line() + 1);
  const Grid grid = r.grid();
  if (kind[0] == "rkc") {
    RkcModel m;
    m.grid = grid;
    const auto d = r.fields("d");
    if (d.size() != 1) throw ParseError("malformed d line", r.line() + 1);
    const std::size_t dim = r.count(d[0]);
    const auto idx = r.fields("indices");
    if (idx.size() != dim) throw ParseError("'indices' has wrong length", r.line() + 1);
    for (const auto& s : idx) {
      m.indices.push_back(r.count(s));
      if (m.indices.back() >= grid.size()) throw ParseError("index outside the grid", r.line() + 1);
    }
    r.vector("points", dim);
    m.alphas = r.vector("alphas", dim);
    m.midpoint = r.vector("midpoint", dim);
    m.log_prior_odds = r.vector("log_prior_odds", 1)(0);
    return TrainedClassifier(std::move(m));
  }
  if (kind[0] == "knn") {
    KnnModel m;
    m.grid = grid;
    m.k = r.count(r.fields("k").at(0));
    const std::size_t n = r.count(r.fields("samples").at(0));
    if (m.k < 1 || m.k > n) throw ParseError("k must lie in [1, samples]", r.line());
    m.curves.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::VectorXd row = r.vector("sample", grid.size() + 1);
      if (row(0) != 0.0 && row(0) != 1.0) throw ParseError("sample label must be 0 or 1", r.line());
      m.labels.push_back(static_cast<int>(row(0)));
      m.curves.row(static_cast<Eigen::Index>(i)) = row.tail(static_cast<Eigen::Index>(grid.size())).transpose();
    }
    return TrainedClassifier(std::move(m));
  }
  if (kind[0] == "centroid") {
    CentroidModel m;
    m.grid = grid;
    m.r = r.count(r.fields("r").at(0));
    const Eigen::VectorXd c = r.vector("centroids", 2);
    m.centroid0 = c(0);
    m.centroid1 = c(1);
    m.psi = r.vector("psi", grid.size());
    return TrainedClassifier(std::move(m));
  }
  throw ParseError("unknown classifier kind '" + kind[0] + "'", 2);
}

}  // namespace rkfda
