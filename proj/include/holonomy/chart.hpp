#ifndef HOLONOMY_CHART_HPP
#define HOLONOMY_CHART_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holonomy/expr.hpp"
#include "holonomy/linalg.hpp"

namespace holonomy {

struct ChartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Signature { riemannian, lorentzian };

/// A point is a complete rational assignment of the chart coordinates.
using Point = PointValues<Rational>;

template <class S>
PointValues<S> point_cast(const Point& p) {
  PointValues<S> out;
  for (const auto& [k, v] : p) out[k] = ScalarOps<S>::from_rational(v);
  return out;
}

/// Walker data for a Lorentzian chart with coordinates (v, x^1..x^n, u):
///   g = 2 dv du + h_ij dx^i dx^j + 2 A_i dx^i du + H (du)^2,
/// h and A free of v. `adapted`, when present, partitions {1..n} into the
/// flat group 0 and the irreducible groups 1..r of the screen decomposition.
struct WalkerStructure {
  int n = 0;
  Mat<Expr> h;          // n x n, symmetric
  std::vector<Expr> A;  // n entries
  Expr H;
  std::vector<std::vector<int>> adapted;  // adapted[a] = 1-based x indices

  bool has_adapted() const { return !adapted.empty(); }
};

template <class S>
Mat<S> eval_matrix(const Mat<Expr>& m, const PointValues<S>& at) {
  Mat<S> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = eval<S>(m(i, j), at);
  return out;
}

class MetricChart {
 public:
  MetricChart() = default;

  static MetricChart from_metric(std::vector<std::string> coords,
                                 Signature sig, Mat<Expr> g) {
    MetricChart c;
    c.coords_ = std::move(coords);
    c.signature_ = sig;
    c.g_ = std::move(g);
    if (c.g_.rows() != c.coords_.size() || c.g_.cols() != c.coords_.size())
      throw ChartError("metric size does not match coordinate count");
    for (std::size_t a = 0; a < c.dim(); ++a)
      for (std::size_t b = a + 1; b < c.dim(); ++b)
        if (!(c.g_(a, b) == c.g_(b, a)))
          throw ChartError("metric is not symmetric");
    c.try_detect_walker();
    return c;
  }

  static MetricChart from_walker(std::vector<std::string> coords,
                                 WalkerStructure w,
                                 std::vector<std::vector<int>> adapted = {}) {
    if (coords.size() != static_cast<std::size_t>(w.n) + 2)
      throw ChartError("walker chart needs n+2 coordinates (v, x..., u)");
    if (!adapted.empty()) w.adapted = std::move(adapted);
    MetricChart c;
    c.coords_ = std::move(coords);
    c.signature_ = Signature::lorentzian;
    std::size_t d = c.coords_.size();
    Mat<Expr> g(d, d, Expr::zero());
    g(0, d - 1) = Expr::one();
    g(d - 1, 0) = Expr::one();
    for (int i = 0; i < w.n; ++i)
      for (int j = 0; j < w.n; ++j) g(1 + i, 1 + j) = w.h(i, j);
    for (int i = 0; i < w.n; ++i) {
      g(1 + i, d - 1) = w.A[i];
      g(d - 1, 1 + i) = w.A[i];
    }
    g(d - 1, d - 1) = w.H;
    c.g_ = std::move(g);
    c.walker_ = std::move(w);
    return c;
  }

  std::size_t dim() const { return coords_.size(); }
  const std::vector<std::string>& coords() const { return coords_; }
  Signature signature() const { return signature_; }
  const Mat<Expr>& metric() const { return g_; }
  const std::optional<WalkerStructure>& walker() const { return walker_; }
  const std::optional<Point>& file_point() const { return file_point_; }
  void set_file_point(Point p) { file_point_ = std::move(p); }

  std::size_t coord_index(const std::string& name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return i;
    throw ChartError("unknown coordinate '" + name + "'");
  }

  template <class S>
  Mat<S> metric_at(const PointValues<S>& p) const {
    return eval_matrix<S>(g_, p);
  }

  /// Default evaluation point: the file-provided one, else all zeros.
  Point base_point() const {
    if (file_point_) return *file_point_;
    Point p;
    for (const auto& c : coords_) p[c] = Rational(0);
    return p;
  }

  /// Walker frame (p, X_1..X_n, q) at a point, columns in coordinate
  /// components. Unit determinant by construction.
  template <class S>
  Mat<S> walker_frame(const PointValues<S>& at) const {
    if (!walker_) throw ChartError("chart has no Walker structure");
    const auto& w = *walker_;
    std::size_t d = dim();
    Mat<S> f(d, d);
    f(0, 0) = S(1);                          // p = d_v
    for (int i = 0; i < w.n; ++i) {
      f(1 + i, 1 + i) = S(1);                // X_i = d_i - A_i d_v
      f(0, 1 + i) = -eval<S>(w.A[i], at);
    }
    f(d - 1, d - 1) = S(1);                  // q = d_u - (H/2) d_v
    f(0, d - 1) =
        -(ScalarOps<S>::from_rational(Rational(1, 2)) * eval<S>(w.H, at));
    return f;
  }

 private:
  void try_detect_walker() {
    if (signature_ != Signature::lorentzian || dim() < 2 || walker_) return;
    std::size_t d = dim();
    int n = static_cast<int>(d) - 2;
    const std::string& v = coords_.front();
    if (!(g_(0, 0).is_zero() && g_(0, d - 1) == Expr::one())) return;
    for (int i = 0; i < n; ++i)
      if (!g_(0, 1 + i).is_zero()) return;
    WalkerStructure w;
    w.n = n;
    w.h = Mat<Expr>(n, n, Expr::zero());
    w.A.assign(n, Expr::zero());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!diff(g_(1 + i, 1 + j), v).is_zero()) return;
        w.h(i, j) = g_(1 + i, 1 + j);
      }
      if (!diff(g_(1 + i, d - 1), v).is_zero()) return;
      w.A[i] = g_(1 + i, d - 1);
    }
    w.H = g_(d - 1, d - 1);
    walker_ = std::move(w);
  }

  std::vector<std::string> coords_;
  Signature signature_ = Signature::riemannian;
  Mat<Expr> g_;
  std::optional<WalkerStructure> walker_;
  std::optional<Point> file_point_;
};

// ---- validation -------------------------------------------------------------

struct ChartCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Nondegeneracy and signature at a point; throws on singular metric.
template <class S>
void require_regular(const MetricChart& chart, const PointValues<S>& at,
                     const NumericOptions& opts = {}) {
  Mat<S> g = chart.metric_at(at);
  auto sig = form_signature(g, opts);
  if (sig.zero != 0) throw ChartError("metric is singular at the point");
  std::size_t want_neg = chart.signature() == Signature::lorentzian ? 1 : 0;
  if (sig.negative != want_neg)
    throw ChartError("metric signature does not match its declaration");
}

// ---- metric files -----------------------------------------------------------
//
// Structured text with sections:
//   [coords]   names = v x1 x2 u ; signature = lorentzian
//   [metric]   either full entries g.a.b = expr (1-based indices into names)
//              or Walker blocks h.i.j, A.i, H (then names are v, x..., u).
//              Omitted entries default to 0, except h.i.i which defaults to 1.
//   [adapted]  group.0 = 3 ; group.1 = 1 2   (x-index groups, 0 = flat)
//   [point]    name = rational  (default evaluation point)

MetricChart load_metric_file(std::istream& in);

inline MetricChart load_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChartError("cannot open metric file '" + path + "'");
  return load_metric_file(in);
}

namespace chart_detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

inline Expr parse_entry(const std::string& value,
                        const std::vector<std::string>& coords,
                        const std::string& key) {
  try {
    return parse_expr(value, coords);
  } catch (const ParseError& err) {
    throw ChartError("metric entry '" + key + "': " + err.what());
  }
}

}  // namespace chart_detail

inline MetricChart load_metric_file(std::istream& in) {
  using chart_detail::split_ws;
  using chart_detail::trim;
  using chart_detail::unquote;

  std::string line, section;
  std::vector<std::string> coords;
  Signature sig = Signature::riemannian;
  bool have_signature = false;
  std::map<std::string, std::string> metric_entries;
  std::vector<std::pair<int, std::vector<int>>> groups;
  std::vector<std::pair<std::string, Rational>> point_entries;

  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ChartError("line " + std::to_string(lineno) + ": bad section");
      section = s.substr(1, s.size() - 2);
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ChartError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = unquote(s.substr(eq + 1));
    if (section == "coords") {
      if (key == "names")
        coords = split_ws(value);
      else if (key == "signature") {
        if (value == "riemannian")
          sig = Signature::riemannian;
        else if (value == "lorentzian")
          sig = Signature::lorentzian;
        else
          throw ChartError("unknown signature '" + value + "'");
        have_signature = true;
      } else
        throw ChartError("unknown key '" + key + "' in [coords]");
    } else if (section == "metric") {
      if (metric_entries.count(key))
        throw ChartError("duplicate metric entry '" + key + "'");
      metric_entries[key] = value;
    } else if (section == "adapted") {
      if (key.rfind("group.", 0) != 0)
        throw ChartError("unknown key '" + key + "' in [adapted]");
      int idx = std::stoi(key.substr(6));
      std::vector<int> members;
      for (const auto& w : split_ws(value)) members.push_back(std::stoi(w));
      groups.emplace_back(idx, members);
    } else if (section == "point") {
      point_entries.emplace_back(key, parse_rational(value));
    } else {
      throw ChartError("line " + std::to_string(lineno) + ": unknown section '" +
                       section + "'");
    }
  }
  if (coords.empty()) throw ChartError("missing [coords] names");
  if (!have_signature) throw ChartError("missing [coords] signature");
  std::size_t d = coords.size();

  bool walker_keys = false, full_keys = false;
  for (const auto& [k, v] : metric_entries) {
    if (k.rfind("g.", 0) == 0)
      full_keys = true;
    else if (k == "H" || k.rfind("h.", 0) == 0 || k.rfind("A.", 0) == 0)
      walker_keys = true;
    else
      throw ChartError("unknown metric key '" + k + "'");
  }
  if (walker_keys && full_keys)
    throw ChartError("metric file mixes Walker blocks with full entries");

  MetricChart chart;
  if (walker_keys || (!full_keys && sig == Signature::lorentzian)) {
    if (sig != Signature::lorentzian)
      throw ChartError("Walker blocks require a lorentzian signature");
    if (d < 2) throw ChartError("Walker chart needs at least (v, u)");
    int n = static_cast<int>(d) - 2;
    WalkerStructure w;
    w.n = n;
    w.h = Mat<Expr>(n, n, Expr::zero());
    for (int i = 0; i < n; ++i) w.h(i, i) = Expr::one();
    w.A.assign(n, Expr::zero());
    w.H = Expr::zero();
    for (const auto& [k, v] : metric_entries) {
      if (k == "H") {
        w.H = chart_detail::parse_entry(v, coords, k);
      } else if (k.rfind("h.", 0) == 0) {
        std::size_t dot = k.find('.', 2);
        if (dot == std::string::npos) throw ChartError("bad key '" + k + "'");
        int i = std::stoi(k.substr(2, dot - 2)), j = std::stoi(k.substr(dot + 1));
        if (i < 1 || j < 1 || i > n || j > n)
          throw ChartError("h index out of range in '" + k + "'");
        Expr e = chart_detail::parse_entry(v, coords, k);
        w.h(i - 1, j - 1) = e;
        w.h(j - 1, i - 1) = e;
      } else {
        int i = std::stoi(k.substr(2));
        if (i < 1 || i > n) throw ChartError("A index out of range in '" + k + "'");
        w.A[i - 1] = chart_detail::parse_entry(v, coords, k);
      }
    }
    const std::string& v = coords.front();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (!diff(w.h(i, j), v).is_zero())
          throw ChartError("h must not depend on the v coordinate");
      if (!diff(w.A[i], v).is_zero())
        throw ChartError("A must not depend on the v coordinate");
    }
    std::vector<std::vector<int>> adapted;
    if (!groups.empty()) {
      int max_idx = 0;
      for (const auto& [idx, _] : groups) max_idx = std::max(max_idx, idx);
      adapted.assign(max_idx + 1, {});
      std::vector<bool> seen(n + 1, false);
      for (const auto& [idx, members] : groups) {
        for (int m : members) {
          if (m < 1 || m > n) throw ChartError("adapted index out of range");
          if (seen[m]) throw ChartError("adapted index repeated");
          seen[m] = true;
        }
        adapted[idx] = members;
      }
      for (int m = 1; m <= n; ++m)
        if (!seen[m]) throw ChartError("adapted groups must cover all x indices");
    }
    chart = MetricChart::from_walker(coords, std::move(w), std::move(adapted));
  } else {
    Mat<Expr> g(d, d, Expr::zero());
    for (const auto& [k, v] : metric_entries) {
      std::size_t dot = k.find('.', 2);
      if (dot == std::string::npos) throw ChartError("bad key '" + k + "'");
      int a = std::stoi(k.substr(2, dot - 2)), b = std::stoi(k.substr(dot + 1));
      if (a < 1 || b < 1 || a > static_cast<int>(d) || b > static_cast<int>(d))
        throw ChartError("metric index out of range in '" + k + "'");
      Expr e = chart_detail::parse_entry(v, coords, k);
      g(a - 1, b - 1) = e;
      g(b - 1, a - 1) = e;
    }
    if (!groups.empty())
      throw ChartError("[adapted] requires Walker blocks");
    chart = MetricChart::from_metric(coords, sig, std::move(g));
  }

  if (!point_entries.empty()) {
    Point p;
    for (const auto& c : coords) p[c] = Rational(0);
    for (const auto& [k, v] : point_entries) {
      if (!p.count(k)) throw ChartError("point names unknown coordinate '" + k + "'");
      p[k] = v;
    }
    chart.set_file_point(std::move(p));
  }
  return chart;
}

inline void save_metric_file(const MetricChart& chart, std::ostream& out) {
  out << "[coords]\n";
  out << "names =";
  for (const auto& c : chart.coords()) out << " " << c;
  out << "\n";
  out << "signature = "
      << (chart.signature() == Signature::lorentzian ? "lorentzian"
                                                     : "riemannian")
      << "\n\n[metric]\n";
  if (chart.walker()) {
    const auto& w = *chart.walker();
    for (int i = 0; i < w.n; ++i)
      for (int j = i; j < w.n; ++j) {
        bool is_default = (i == j) ? w.h(i, j) == Expr::one() : w.h(i, j).is_zero();
        if (!is_default)
          out << "h." << (i + 1) << "." << (j + 1) << " = \""
              << to_string(w.h(i, j)) << "\"\n";
      }
    for (int i = 0; i < w.n; ++i)
      if (!w.A[i].is_zero())
        out << "A." << (i + 1) << " = \"" << to_string(w.A[i]) << "\"\n";
    if (!w.H.is_zero()) out << "H = \"" << to_string(w.H) << "\"\n";
    if (w.has_adapted()) {
      out << "\n[adapted]\n";
      for (std::size_t a = 0; a < w.adapted.size(); ++a) {
        out << "group." << a << " =";
        for (int m : w.adapted[a]) out << " " << m;
        out << "\n";
      }
    }
  } else {
    for (std::size_t a = 0; a < chart.dim(); ++a)
      for (std::size_t b = a; b < chart.dim(); ++b)
        if (!chart.metric()(a, b).is_zero())
          out << "g." << (a + 1) << "." << (b + 1) << " = \""
              << to_string(chart.metric()(a, b)) << "\"\n";
  }
  if (chart.file_point()) {
    out << "\n[point]\n";
    for (const auto& [k, v] : *chart.file_point())
      out << k << " = " << to_string(v) << "\n";
  }
}

inline void save_metric_file(const MetricChart& chart, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ChartError("cannot write metric file '" + path + "'");
  save_metric_file(chart, out);
}

/// Parses "name=value,name=value" point overrides.
inline Point parse_point_spec(const std::string& spec,
                              const MetricChart& chart) {
  Point p;
  for (const auto& c : chart.coords()) p[c] = Rational(0);
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = chart_detail::trim(item);
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ChartError("bad point component '" + item + "'");
    std::string name = chart_detail::trim(item.substr(0, eq));
    if (!p.count(name)) throw ChartError("unknown coordinate '" + name + "'");
    p[name] = parse_rational(chart_detail::trim(item.substr(eq + 1)));
  }
  return p;
}

}  // namespace holonomy

#endif
