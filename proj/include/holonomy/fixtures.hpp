#ifndef HOLONOMY_FIXTURES_HPP
#define HOLONOMY_FIXTURES_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "holonomy/chart.hpp"

namespace holonomy {

struct FixtureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- standard charts ---------------------------------------------------------

/// Flat Euclidean space, coordinates z1..zn (or a custom prefix).
inline MetricChart euclidean_chart(int n, const std::string& prefix = "z") {
  std::vector<std::string> coords;
  for (int i = 1; i <= n; ++i) coords.push_back(prefix + std::to_string(i));
  Mat<Expr> g(n, n, Expr::zero());
  for (int i = 0; i < n; ++i) g(i, i) = Expr::one();
  return MetricChart::from_metric(coords, Signature::riemannian, g);
}

/// Minkowski space in Walker form: g = 2 dv du + sum dx^2.
inline MetricChart minkowski_chart(int n) {
  std::vector<std::string> coords{"v"};
  for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
  coords.push_back("u");
  WalkerStructure w;
  w.n = n;
  w.h = Mat<Expr>(n, n, Expr::zero());
  for (int i = 0; i < n; ++i) w.h(i, i) = Expr::one();
  w.A.assign(n, Expr::zero());
  w.H = Expr::zero();
  return MetricChart::from_walker(coords, std::move(w));
}

/// pp-wave: flat h, A = 0, H = H(x, u) parsed over (v, x1..xn, u).
inline MetricChart pp_wave_chart(const std::string& h_source, int n = 2) {
  std::vector<std::string> coords{"v"};
  for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
  coords.push_back("u");
  WalkerStructure w;
  w.n = n;
  w.h = Mat<Expr>(n, n, Expr::zero());
  for (int i = 0; i < n; ++i) w.h(i, i) = Expr::one();
  w.A.assign(n, Expr::zero());
  w.H = parse_expr(h_source, coords);
  const std::string& v = coords.front();
  (void)v;
  return MetricChart::from_walker(coords, std::move(w));
}

/// Round 2-sphere of the given radius in stereographic coordinates:
/// g = 4 r^2 / (1 + y1^2 + y2^2)^2 (dy1^2 + dy2^2); rational entries, so the
/// whole exact pipeline applies. Gaussian curvature 1/r^2.
inline MetricChart sphere_chart(const Rational& radius,
                                const std::string& prefix = "y") {
  std::vector<std::string> coords{prefix + "1", prefix + "2"};
  Expr y1 = Expr::variable(coords[0]), y2 = Expr::variable(coords[1]);
  Expr conf = scale(reciprocal(pow(Expr::one() + y1 * y1 + y2 * y2, 2)),
                    Rational(4) * radius * radius);
  Mat<Expr> g(2, 2, Expr::zero());
  g(0, 0) = conf;
  g(1, 1) = conf;
  return MetricChart::from_metric(coords, Signature::riemannian, g);
}

/// Round 2-sphere in polar coordinates (theta, phi); float mode only.
inline MetricChart sphere_chart_polar() {
  std::vector<std::string> coords{"theta", "phi"};
  Mat<Expr> g(2, 2, Expr::zero());
  g(0, 0) = Expr::one();
  g(1, 1) = pow(apply(FuncKind::sin_fn, Expr::variable("theta")), 2);
  return MetricChart::from_metric(coords, Signature::riemannian, g);
}

// ---- the section-10 construction ---------------------------------------------

/// Standard complex structure on R^{2m}: J e_{2k-1} = e_{2k}.
inline Mat<Rational> standard_complex_structure(int m) {
  Mat<Rational> j(2 * m, 2 * m, Rational(0));
  for (int k = 0; k < m; ++k) {
    j(2 * k + 1, 2 * k) = 1;
    j(2 * k, 2 * k + 1) = -1;
  }
  return j;
}

/// R^{CP^m}(X, Z) = 1/2 g(JX,Z) J + 1/4 (X ^ Z + JX ^ JZ), with
/// (X ^ Z) Y = g(X,Y) Z - g(Z,Y) X; a skew endomorphism in u(m).
inline Mat<Rational> cpm_curvature(int m, const Vec<Rational>& X,
                                   const Vec<Rational>& Z) {
  int n = 2 * m;
  Mat<Rational> J = standard_complex_structure(m);
  auto wedge = [&](const Vec<Rational>& a, const Vec<Rational>& b) {
    Mat<Rational> w(n, n, Rational(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w(i, j) = b[i] * a[j] - a[i] * b[j];
    return w;
  };
  Vec<Rational> JX = J * X, JZ = J * Z;
  Rational gJXZ = dot(JX, Z);
  Mat<Rational> out = gJXZ * J;
  out = Rational(1, 2) * out;
  Mat<Rational> w = wedge(X, Z) + wedge(JX, JZ);
  return out + Rational(1, 4) * w;
}

/// P = R^{CP^m}(. , Z): P[k] is the matrix of P(e_k).
inline std::vector<Mat<Rational>> cpm_p_field(int m, const Vec<Rational>& Z) {
  std::vector<Mat<Rational>> P;
  for (int k = 0; k < 2 * m; ++k) {
    Vec<Rational> ek(2 * m, Rational(0));
    ek[k] = 1;
    P.push_back(cpm_curvature(m, ek, Z));
  }
  return P;
}

/// Ric~(P)_l = sum_j P^l_{jj} for the flat screen metric.
inline Vec<Rational> ric_tilde_of_p(const std::vector<Mat<Rational>>& P) {
  int n = static_cast<int>(P.size());
  Vec<Rational> r(n, Rational(0));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) r[l] += P[j](l, j);
  return r;
}

struct FixtureSpec {
  int type = 3;                  // target holonomy type, 1..4
  std::string h = "u1";          // "trivial", "u1", or "um"
  int m = 1;                     // complex dimension of the u(m) block
  Rational c = Rational(1);      // twist constant (types 1, 3, 4)
  std::optional<Vec<Rational>> Z;  // defaults to e_1
};

/// Walker metrics with prescribed weakly irreducible holonomy:
///   A_j = a^j_{ik} x^i x^k with a^j_{ik} = (P^j_{ik} + P^j_{ki})/3 and
///   P = R^{CP^m}(., Z); the type-3 twist H is linear in v and pinned so the
///   fitted constant of eq. (ur2dA) equals the requested c (the type-4 twist
///   replaces v by the extra flat coordinate).
inline MetricChart build_fixture(const FixtureSpec& spec) {
  if (spec.type < 1 || spec.type > 4)
    throw FixtureError("fixture type must be 1..4");
  const bool trivial = spec.h == "trivial";
  if (!trivial && spec.h != "u1" && spec.h != "um")
    throw FixtureError("unknown orthogonal part '" + spec.h + "'");
  int m = spec.h == "u1" ? 1 : spec.m;
  if (m < 1) throw FixtureError("m must be positive");
  if ((spec.type == 3 || spec.type == 4) && spec.c == 0)
    throw FixtureError("types 3 and 4 need a non-zero constant c");
  if ((spec.type == 3 || spec.type == 4) && trivial)
    throw FixtureError("types 3 and 4 need a non-trivial orthogonal part");

  if (trivial) {
    // pp-wave family: abelian holonomy R^n
    if (spec.type == 2) return pp_wave_chart("x1^2 - x2^2");
    return pp_wave_chart("v^2 + x1^2 - x2^2");
  }

  int n_block = 2 * m;
  Vec<Rational> Z(n_block, Rational(0));
  if (spec.Z) {
    if (static_cast<int>(spec.Z->size()) != n_block)
      throw FixtureError("Z must have dimension 2m");
    Z = *spec.Z;
    bool all_zero = true;
    for (const auto& z : Z) all_zero = all_zero && z == 0;
    if (all_zero) throw FixtureError("Z must be non-zero");
  } else {
    Z[0] = 1;
  }

  std::vector<Mat<Rational>> P = cpm_p_field(m, Z);
  Vec<Rational> ric = ric_tilde_of_p(P);
  Mat<Rational> J = standard_complex_structure(m);

  bool extra_flat = spec.type == 4;
  int n = n_block + (extra_flat ? 1 : 0);
  std::vector<std::string> coords{"v"};
  for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
  coords.push_back("u");

  WalkerStructure w;
  w.n = n;
  w.h = Mat<Expr>(n, n, Expr::zero());
  for (int i = 0; i < n; ++i) w.h(i, i) = Expr::one();
  w.A.assign(n, Expr::zero());
  // A_j = a^j_{ik} x^i x^k on the u(m) block, with P^j_{ik} = P[k](j, i)
  for (int j = 0; j < n_block; ++j) {
    Expr a;
    for (int i = 0; i < n_block; ++i)
      for (int k = 0; k < n_block; ++k) {
        Rational coeff = (P[k](j, i) + P[i](j, k)) / Rational(3);
        if (coeff == 0) continue;
        a += scale(Expr::variable(coords[1 + i]) * Expr::variable(coords[1 + k]),
                   coeff);
      }
    w.A[j] = a;
  }
  // K_i = sum_l (Ric~ P)_l J^l_i; the twist is -(2c/m) t K_i x^i with t = v
  // (type 3) or the flat coordinate (type 4)
  Expr twist;
  {
    Expr sum;
    for (int i = 0; i < n_block; ++i) {
      Rational k(0);
      for (int l = 0; l < n_block; ++l) k += ric[l] * J(l, i);
      if (k != 0) sum += scale(Expr::variable(coords[1 + i]), k);
    }
    Rational factor = Rational(-2) * spec.c / Rational(m);
    Expr t = extra_flat ? Expr::variable(coords[1 + n_block])
                        : Expr::variable("v");
    twist = scale(t * sum, factor);
  }
  switch (spec.type) {
    case 1:
      w.H = pow(Expr::variable("v"), 2) + twist;
      break;
    case 2:
      w.H = Expr::zero();
      break;
    case 3:
    case 4:
      w.H = twist;
      break;
  }
  std::vector<std::vector<int>> adapted(2);
  if (extra_flat) adapted[0] = {n_block + 1};
  for (int i = 1; i <= n_block; ++i) adapted[1].push_back(i);
  return MetricChart::from_walker(coords, std::move(w), std::move(adapted));
}

// ---- products ----------------------------------------------------------------

/// Block-diagonal product chart on disjoint coordinate sets; at most one
/// Lorentzian factor, which is placed first.
inline MetricChart product_fixture(std::vector<MetricChart> factors) {
  if (factors.empty()) throw FixtureError("empty product");
  int lorentzian = -1;
  for (std::size_t k = 0; k < factors.size(); ++k)
    if (factors[k].signature() == Signature::lorentzian) {
      if (lorentzian >= 0) throw FixtureError("two Lorentzian factors");
      lorentzian = static_cast<int>(k);
    }
  if (lorentzian > 0) std::swap(factors[0], factors[lorentzian]);

  // make coordinate names globally unique
  std::set<std::string> used;
  std::vector<std::vector<std::string>> names(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    std::map<std::string, std::string> ren;
    for (const auto& c : factors[k].coords()) {
      std::string name = c;
      int suffix = 2;
      while (used.count(name)) name = c + "_" + std::to_string(suffix++);
      used.insert(name);
      names[k].push_back(name);
      if (name != c) ren[c] = name;
    }
    if (!ren.empty()) {
      Mat<Expr> g = factors[k].metric();
      for (std::size_t a = 0; a < g.rows(); ++a)
        for (std::size_t b = 0; b < g.cols(); ++b)
          g(a, b) = rename_variables(g(a, b), ren);
      factors[k] =
          MetricChart::from_metric(names[k], factors[k].signature(), g);
    }
  }

  std::vector<std::string> coords;
  std::size_t total = 0;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    coords.insert(coords.end(), names[k].begin(), names[k].end());
    total += names[k].size();
  }
  Mat<Expr> g(total, total, Expr::zero());
  std::size_t off = 0;
  for (const auto& f : factors) {
    for (std::size_t a = 0; a < f.dim(); ++a)
      for (std::size_t b = 0; b < f.dim(); ++b)
        g(off + a, off + b) = f.metric()(a, b);
    off += f.dim();
  }
  Signature sig =
      lorentzian >= 0 ? Signature::lorentzian : Signature::riemannian;
  return MetricChart::from_metric(coords, sig, g);
}

}  // namespace holonomy

#endif
