#ifndef HOLONOMY_CURVATURE_HPP
#define HOLONOMY_CURVATURE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holonomy/chart.hpp"
#include "holonomy/tensor.hpp"

namespace holonomy {

// Sign conventions, fixed once for the whole library and anchored to the
// Walker identities Ric(p,q) = lambda = -1/2 d^2_v H and Ric(q,q) = -tr T:
//   R(X,Y)Z = nabla_{[X,Y]} Z - [nabla_X, nabla_Y] Z,
//   components R(d_c, d_d) d_b = R^a_{bcd} d_a,
//   Ric(U,V) = tr(Z -> R(Z,U)V), i.e. Ric_{cd} = R^a_{dac}.
// (The round sphere has Ric = -g here; only flatness of Ricci enters any
// classification decision, so the global orientation is free and the Walker
// identities fix it.)

/// Symbolic determinant by subset DP (fine for dim <= 8).
inline Expr symbolic_determinant(const Mat<Expr>& m) {
  std::size_t n = m.rows();
  if (n == 0) return Expr::one();
  std::vector<Expr> d(std::size_t(1) << n, Expr::zero());
  d[0] = Expr::one();
  for (std::size_t mask = 1; mask < d.size(); ++mask) {
    std::size_t row = 0;
    for (std::size_t t = mask; t; t >>= 1) row += (t & 1);
    row -= 1;  // rows 0..row use the columns in mask
    Expr acc;
    // Laplace expansion along the last row: sign (-1)^{row + position}
    int sign = (row % 2 == 0) ? 1 : -1;
    for (std::size_t col = 0; col < n; ++col) {
      if (!(mask & (std::size_t(1) << col))) continue;
      if (!m(row, col).is_zero() && !d[mask ^ (std::size_t(1) << col)].is_zero()) {
        Expr term = m(row, col) * d[mask ^ (std::size_t(1) << col)];
        acc += (sign > 0) ? term : -term;
      }
      sign = -sign;
    }
    d[mask] = acc;
  }
  return d.back();
}

/// Symbolic inverse through the adjugate; the determinant inverse is a single
/// shared atom so downstream cancellations stay canonical.
inline Mat<Expr> symbolic_inverse(const Mat<Expr>& m, Expr* det_out = nullptr) {
  std::size_t n = m.rows();
  Expr det = symbolic_determinant(m);
  if (det.is_zero()) throw ChartError("symbolically singular matrix");
  if (det_out) *det_out = det;
  Expr inv_det = reciprocal(det);
  Mat<Expr> out(n, n, Expr::zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // cofactor expansion of the (j,i) minor
      Mat<Expr> minor(n - 1, n - 1, Expr::zero());
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      Expr cof = symbolic_determinant(minor);
      if (((i + j) & 1) != 0) cof = -cof;
      out(i, j) = cof * inv_det;
    }
  return out;
}

/// Levi-Civita data of a symmetric Expr matrix over a list of "active"
/// coordinates; any other symbols in the entries are carried as parameters
/// (used for the u-dependent screen metrics h_alpha).
class SymbolicGeometry {
 public:
  SymbolicGeometry() = default;
  SymbolicGeometry(std::vector<std::string> active, Mat<Expr> g,
                   NumericOptions opts = {})
      : coords_(std::move(active)), g_(std::move(g)), opts_(opts) {
    d_ = coords_.size();
    ginv_ = symbolic_inverse(g_, &det_);
    compute_christoffel();
    compute_riemann();
  }

  std::size_t dim() const { return d_; }
  const std::vector<std::string>& coords() const { return coords_; }
  const Mat<Expr>& metric() const { return g_; }
  const Mat<Expr>& metric_inverse() const { return ginv_; }
  const Expr& metric_determinant() const { return det_; }

  /// Gamma^a_{bc}, symmetric in (b, c).
  const NDArray<Expr>& christoffel() const { return gamma_; }
  /// R^a_{bcd}.
  const NDArray<Expr>& riemann() const { return deriv_[0]; }
  Mat<Expr> ricci() const {
    Mat<Expr> ric(d_, d_, Expr::zero());
    const auto& r = deriv_[0];
    for (std::size_t c = 0; c < d_; ++c)
      for (std::size_t dd = 0; dd < d_; ++dd) {
        Expr s;
        for (std::size_t a = 0; a < d_; ++a) s += r(a, dd, a, c);
        ric(c, dd) = s;
      }
    return ric;
  }

  /// nabla^k R with the k derivative indexes appended at the end.
  const NDArray<Expr>& riemann_derivative(int k) const {
    if (k < 0 || k > opts_.max_order)
      throw NumericError("covariant derivative order " + std::to_string(k) +
                         " exceeds the configured maximum " +
                         std::to_string(opts_.max_order));
    while (static_cast<int>(deriv_.size()) <= k)
      deriv_.push_back(covariant_derivative(
          deriv_.back(),
          riemann_variance(static_cast<int>(deriv_.size()) - 1)));
    return deriv_[k];
  }

  /// One covariant derivative of an arbitrary tensor; `up` flags each index.
  NDArray<Expr> covariant_derivative(const NDArray<Expr>& t,
                                     const std::vector<bool>& up) const {
    std::vector<std::size_t> odims = t.dims();
    odims.push_back(d_);
    NDArray<Expr> out(odims, Expr::zero());
    std::vector<std::size_t> oidx(odims.size());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      const Expr& val = t.flat(flat);
      if (val.is_zero()) continue;
      std::vector<std::size_t> idx = t.unflatten(flat);
      std::copy(idx.begin(), idx.end(), oidx.begin());
      for (std::size_t e = 0; e < d_; ++e) {
        oidx.back() = e;
        // plain derivative
        Expr de = diff(val, coords_[e]);
        if (!de.is_zero()) out.at(oidx) += de;
        // connection corrections, scattered from this input entry
        for (std::size_t slot = 0; slot < idx.size(); ++slot) {
          std::size_t f = idx[slot];
          if (up[slot]) {
            for (std::size_t a = 0; a < d_; ++a) {
              const Expr& gam = gamma_(a, e, f);
              if (gam.is_zero()) continue;
              oidx[slot] = a;
              out.at(oidx) += gam * val;
              oidx[slot] = f;
            }
          } else {
            for (std::size_t b = 0; b < d_; ++b) {
              const Expr& gam = gamma_(f, e, b);
              if (gam.is_zero()) continue;
              oidx[slot] = b;
              out.at(oidx) -= gam * val;
              oidx[slot] = f;
            }
          }
        }
      }
      oidx.assign(idx.begin(), idx.end());
      oidx.push_back(0);
    }
    return out;
  }

  static std::vector<bool> riemann_variance(int order) {
    std::vector<bool> up(4 + order, false);
    up[0] = true;
    return up;
  }

 private:
  void compute_christoffel() {
    gamma_ = NDArray<Expr>({d_, d_, d_}, Expr::zero());
    // dg[a][b][c] = d_a g_{bc}
    NDArray<Expr> dg({d_, d_, d_}, Expr::zero());
    for (std::size_t b = 0; b < d_; ++b)
      for (std::size_t c = b; c < d_; ++c) {
        if (g_(b, c).is_zero()) continue;
        for (std::size_t a = 0; a < d_; ++a) {
          Expr e = diff(g_(b, c), coords_[a]);
          dg(a, b, c) = e;
          dg(a, c, b) = e;
        }
      }
    for (std::size_t b = 0; b < d_; ++b)
      for (std::size_t c = b; c < d_; ++c) {
        for (std::size_t a = 0; a < d_; ++a) {
          Expr s;
          for (std::size_t dd = 0; dd < d_; ++dd) {
            if (ginv_(a, dd).is_zero()) continue;
            Expr inner = dg(b, dd, c) + dg(c, dd, b) - dg(dd, b, c);
            if (!inner.is_zero()) s += ginv_(a, dd) * inner;
          }
          s = scale(s, Rational(1, 2));
          gamma_(a, b, c) = s;
          gamma_(a, c, b) = s;
        }
      }
  }

  void compute_riemann() {
    NDArray<Expr> r({d_, d_, d_, d_}, Expr::zero());
    for (std::size_t c = 0; c < d_; ++c)
      for (std::size_t dd = c + 1; dd < d_; ++dd)
        for (std::size_t a = 0; a < d_; ++a)
          for (std::size_t b = 0; b < d_; ++b) {
            Expr val = diff(gamma_(a, c, b), coords_[dd]) -
                       diff(gamma_(a, dd, b), coords_[c]);
            for (std::size_t e = 0; e < d_; ++e) {
              if (!gamma_(a, dd, e).is_zero() && !gamma_(e, c, b).is_zero())
                val += gamma_(a, dd, e) * gamma_(e, c, b);
              if (!gamma_(a, c, e).is_zero() && !gamma_(e, dd, b).is_zero())
                val -= gamma_(a, c, e) * gamma_(e, dd, b);
            }
            r(a, b, c, dd) = val;
            r(a, b, dd, c) = -val;
          }
    deriv_.clear();
    deriv_.push_back(std::move(r));
  }

  std::vector<std::string> coords_;
  Mat<Expr> g_;
  NumericOptions opts_;
  std::size_t d_ = 0;
  Mat<Expr> ginv_;
  Expr det_;
  NDArray<Expr> gamma_;
  mutable std::vector<NDArray<Expr>> deriv_;  // deriv_[k] = nabla^k R
};

// ---- Walker-specific symbolic data ------------------------------------------

/// The coordinate expressions of eqs. (lamv), (Riciqpq) and the trace part of
/// the curvature component P, for the screen metric h restricted to a group
/// of x coordinates (the whole screen when `xs` lists every index).
struct WalkerSymbols {
  std::vector<int> xs;      // 1-based x indices of the block
  std::vector<std::string> names;
  Mat<Expr> h, hinv, hdot, F;
  Expr lambda;                        // -1/2 dv dv H
  std::vector<Expr> dv_dH;            // d_{x^i} d_v H per block index
  std::vector<Expr> ric_tilde_lower;  // (Ric~ P)_i = 1/2(...bracket...)
  std::vector<Expr> ric_tilde_frame;  // (Ric~ P)^j = h^{ij} (Ric~ P)_i
  std::vector<Expr> e_frame;          // e^j of eq. (lamv), in the X_j frame
  std::vector<Expr> ric_iq;           // Ric(d_i, q), eq. (Riciqpq)
  Expr ric_pq;                        // -1/2 dv dv H
};

inline WalkerSymbols walker_symbols(const MetricChart& chart,
                                    std::vector<int> xs = {}) {
  if (!chart.walker()) throw ChartError("chart has no Walker structure");
  const WalkerStructure& w = *chart.walker();
  const std::string& vname = chart.coords().front();
  const std::string& uname = chart.coords().back();
  if (xs.empty())
    for (int i = 1; i <= w.n; ++i) xs.push_back(i);
  std::size_t m = xs.size();

  WalkerSymbols out;
  out.xs = xs;
  for (int i : xs) out.names.push_back(chart.coords()[i]);

  out.h = Mat<Expr>(m, m, Expr::zero());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.h(i, j) = w.h(xs[i] - 1, xs[j] - 1);
  out.hinv = symbolic_inverse(out.h);
  out.hdot = Mat<Expr>(m, m, Expr::zero());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      out.hdot(i, j) = diff(out.h(i, j), uname);
  out.F = Mat<Expr>(m, m, Expr::zero());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      out.F(i, j) =
          diff(w.A[xs[j] - 1], out.names[i]) - diff(w.A[xs[i] - 1], out.names[j]);

  Expr dvH = diff(w.H, vname);
  out.lambda = scale(diff(dvH, vname), Rational(-1, 2));
  out.ric_pq = out.lambda;
  for (std::size_t i = 0; i < m; ++i) out.dv_dH.push_back(diff(dvH, out.names[i]));

  // Christoffels of the slice metric h (u enters as a parameter)
  SymbolicGeometry slice(out.names, out.h);
  const NDArray<Expr>& gam = slice.christoffel();

  auto div_two_form = [&](const Mat<Expr>& t) {
    // (nabla^j t)_i = h^{jk} nabla_k t_{ij}
    std::vector<Expr> r(m, Expr::zero());
    for (std::size_t i = 0; i < m; ++i) {
      Expr s;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
          if (out.hinv(j, k).is_zero()) continue;
          Expr cov = diff(t(i, j), out.names[k]);
          for (std::size_t l = 0; l < m; ++l) {
            if (!gam(l, k, i).is_zero() && !t(l, j).is_zero())
              cov -= gam(l, k, i) * t(l, j);
            if (!gam(l, k, j).is_zero() && !t(i, l).is_zero())
              cov -= gam(l, k, j) * t(i, l);
          }
          if (!cov.is_zero()) s += out.hinv(j, k) * cov;
        }
      r[i] = s;
    }
    return r;
  };

  std::vector<Expr> divF = div_two_form(out.F);
  std::vector<Expr> divHdot = div_two_form(out.hdot);
  for (std::size_t i = 0; i < m; ++i) {
    Expr last;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        Expr dh = diff(out.hinv(j, k), out.names[i]);
        if (!dh.is_zero() && !out.hdot(j, k).is_zero())
          last += dh * out.hdot(j, k);
      }
    Expr bracket = divF[i] + divHdot[i] - last;
    out.ric_tilde_lower.push_back(scale(bracket, Rational(1, 2)));
    out.ric_iq.push_back(scale(out.dv_dH[i] + bracket, Rational(-1, 2)));
  }
  for (std::size_t j = 0; j < m; ++j) {
    Expr s;
    for (std::size_t i = 0; i < m; ++i)
      if (!out.hinv(i, j).is_zero() && !out.ric_tilde_lower[i].is_zero())
        s += out.hinv(i, j) * out.ric_tilde_lower[i];
    out.ric_tilde_frame.push_back(s);
  }
  // e = -1/2 (d_i d_v H - A_i d^2_v H) h^{ij} X_j         (lamv)
  Expr d2vH = diff(dvH, vname);
  for (std::size_t j = 0; j < m; ++j) {
    Expr s;
    for (std::size_t i = 0; i < m; ++i) {
      Expr inner = out.dv_dH[i] - w.A[xs[i] - 1] * d2vH;
      if (!inner.is_zero() && !out.hinv(i, j).is_zero())
        s += inner * out.hinv(i, j);
    }
    out.e_frame.push_back(scale(s, Rational(-1, 2)));
  }
  return out;
}

// ---- chart-level geometry and pointwise curvature ---------------------------

class ChartGeometry {
 public:
  explicit ChartGeometry(MetricChart chart, NumericOptions opts = {})
      : chart_(std::move(chart)), opts_(opts),
        geom_(chart_.coords(), chart_.metric(), opts) {
    if (chart_.walker()) walker_ = walker_symbols(chart_);
  }

  const MetricChart& chart() const { return chart_; }
  const SymbolicGeometry& symbols() const { return geom_; }
  const NumericOptions& options() const { return opts_; }
  const std::optional<WalkerSymbols>& walker() const { return walker_; }

  const NDArray<Expr>& christoffel() const { return geom_.christoffel(); }
  const NDArray<Expr>& riemann() const { return geom_.riemann(); }
  const NDArray<Expr>& riemann_derivative(int k) const {
    return geom_.riemann_derivative(k);
  }
  Mat<Expr> ricci() const { return geom_.ricci(); }

 private:
  MetricChart chart_;
  NumericOptions opts_;
  SymbolicGeometry geom_;
  std::optional<WalkerSymbols> walker_;
};

/// Curvature components in the Walker frame (p, X_1..X_n, q) at a point,
/// following R(p,q) = (lambda, 0, e), R(X,Y) = (0, R0(X,Y), P(Y)X - P(X)Y),
/// R(X,q) = (g(e,X), P(X), T(X)), R(p,X) = 0.
template <class S>
struct WalkerComponents {
  S lambda = S(0);
  Vec<S> e;                 // components in the X frame
  NDArray<S> R0;            // R0(X_i, X_j) as operators: [a][b][i][j]
  std::vector<Mat<S>> P;    // P[k] = matrix of P(X_k)
  Mat<S> T;                 // column i = T(X_i)
  Mat<S> hx;                // Gram matrix of the X frame at the point
  S mu_du = S(0);           // recurrence one-form value: mu = 1/2 dv H du
};

template <class S>
struct CurvaturePoint {
  Point base;
  Mat<S> g;                    // coordinate metric at the point
  NDArray<S> riemann;          // R^a_{bcd}
  Mat<S> ricci;                // Ric_{ab}
  std::optional<WalkerComponents<S>> walker;
};

template <class S>
NDArray<S> frame_riemann(const NDArray<S>& r, const Mat<S>& frame,
                         const Mat<S>& frame_inv) {
  std::size_t d = frame.rows();
  NDArray<S> out({d, d, d, d}, S(0));
  // contract one slot at a time
  NDArray<S> t1({d, d, d, d}, S(0));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          const S& val = r(a, b, c, e);
          if (ScalarOps<S>::is_zero(val, 0.0)) continue;
          for (std::size_t A = 0; A < d; ++A)
            if (!ScalarOps<S>::is_zero(frame_inv(A, a), 0.0))
              t1(A, b, c, e) += frame_inv(A, a) * val;
        }
  NDArray<S> t2({d, d, d, d}, S(0));
  for (std::size_t A = 0; A < d; ++A)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          const S& val = t1(A, b, c, e);
          if (ScalarOps<S>::is_zero(val, 0.0)) continue;
          for (std::size_t B = 0; B < d; ++B)
            if (!ScalarOps<S>::is_zero(frame(b, B), 0.0))
              t2(A, B, c, e) += val * frame(b, B);
        }
  NDArray<S> t3({d, d, d, d}, S(0));
  for (std::size_t A = 0; A < d; ++A)
    for (std::size_t B = 0; B < d; ++B)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          const S& val = t2(A, B, c, e);
          if (ScalarOps<S>::is_zero(val, 0.0)) continue;
          for (std::size_t C = 0; C < d; ++C)
            if (!ScalarOps<S>::is_zero(frame(c, C), 0.0))
              t3(A, B, C, e) += val * frame(c, C);
        }
  for (std::size_t A = 0; A < d; ++A)
    for (std::size_t B = 0; B < d; ++B)
      for (std::size_t C = 0; C < d; ++C)
        for (std::size_t e = 0; e < d; ++e) {
          const S& val = t3(A, B, C, e);
          if (ScalarOps<S>::is_zero(val, 0.0)) continue;
          for (std::size_t E = 0; E < d; ++E)
            if (!ScalarOps<S>::is_zero(frame(e, E), 0.0))
              out(A, B, C, E) += val * frame(e, E);
        }
  return out;
}

template <class S>
CurvaturePoint<S> riemann_at(const ChartGeometry& geom, const Point& base) {
  const MetricChart& chart = geom.chart();
  PointValues<S> at = point_cast<S>(base);
  CurvaturePoint<S> out;
  out.base = base;
  out.g = chart.metric_at<S>(at);
  {
    auto sig = form_signature(out.g, geom.options());
    if (sig.zero != 0) throw ChartError("metric is singular at the point");
  }
  out.riemann = eval_tensor<S>(geom.riemann(), at);
  {
    Mat<Expr> ric = geom.ricci();
    Mat<S> rr(ric.rows(), ric.cols());
    for (std::size_t i = 0; i < ric.rows(); ++i)
      for (std::size_t j = 0; j < ric.cols(); ++j)
        rr(i, j) = eval<S>(ric(i, j), at);
    out.ricci = rr;
  }

  if (chart.walker()) {
    const WalkerStructure& w = *chart.walker();
    std::size_t d = chart.dim();
    std::size_t n = static_cast<std::size_t>(w.n);
    Mat<S> frame = chart.walker_frame<S>(at);
    Mat<S> frame_inv = inverse(frame, geom.options());
    NDArray<S> rf = frame_riemann(out.riemann, frame, frame_inv);

    WalkerComponents<S> wc;
    wc.hx = Mat<S>(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        wc.hx(i, j) = eval<S>(w.h(i, j), at);
    // R(p,q): triple (lambda, 0, e)
    wc.lambda = rf(0, 0, 0, d - 1);
    wc.e.assign(n, S(0));
    for (std::size_t i = 0; i < n; ++i) wc.e[i] = -rf(1 + i, d - 1, 0, d - 1);
    // R(X_i, X_j): so(n) block
    wc.R0 = NDArray<S>({n, n, n, n}, S(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            wc.R0(a, b, i, j) = rf(1 + a, 1 + b, 1 + i, 1 + j);
    // R(X_k, q): (g(e,X), P(X), T(X))
    wc.P.assign(n, Mat<S>(n, n));
    wc.T = Mat<S>(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          wc.P[k](a, b) = rf(1 + a, 1 + b, 1 + k, d - 1);
      for (std::size_t a = 0; a < n; ++a)
        wc.T(a, k) = -rf(1 + a, d - 1, 1 + k, d - 1);
    }
    const std::string& vname = chart.coords().front();
    wc.mu_du = ScalarOps<S>::from_rational(Rational(1, 2)) *
               eval<S>(diff(w.H, vname), at);
    out.walker = std::move(wc);
  }
  return out;
}

/// The vector e of eq. (lamv) in the X frame, from the symbolic formula.
template <class S>
Vec<S> walker_e(const ChartGeometry& geom, const Point& base) {
  if (!geom.walker()) throw ChartError("chart has no Walker structure");
  PointValues<S> at = point_cast<S>(base);
  Vec<S> out;
  for (const Expr& c : geom.walker()->e_frame) out.push_back(eval<S>(c, at));
  return out;
}

/// Ric(d_i, q) and Ric(p, q) from eq. (Riciqpq).
template <class S>
struct WalkerRicci {
  Vec<S> ric_iq;
  S ric_pq;
};

template <class S>
WalkerRicci<S> ricci_walker(const ChartGeometry& geom, const Point& base) {
  if (!geom.walker()) throw ChartError("chart has no Walker structure");
  PointValues<S> at = point_cast<S>(base);
  WalkerRicci<S> out;
  for (const Expr& c : geom.walker()->ric_iq) out.ric_iq.push_back(eval<S>(c, at));
  out.ric_pq = eval<S>(geom.walker()->ric_pq, at);
  return out;
}

/// Ric~(P) in the X frame, from eq. (comptRic).
template <class S>
Vec<S> ricci_tilde(const ChartGeometry& geom, const Point& base) {
  if (!geom.walker()) throw ChartError("chart has no Walker structure");
  PointValues<S> at = point_cast<S>(base);
  Vec<S> out;
  for (const Expr& c : geom.walker()->ric_tilde_frame)
    out.push_back(eval<S>(c, at));
  return out;
}

/// Identically-vanishing test for nabla R (exact for rational charts,
/// probabilistic otherwise).
inline bool is_locally_symmetric(const ChartGeometry& geom) {
  const NDArray<Expr>& dr = geom.riemann_derivative(1);
  for (std::size_t i = 0; i < dr.size(); ++i) {
    switch (zero_state(dr.flat(i))) {
      case ZeroState::zero: continue;
      case ZeroState::nonzero: return false;
      case ZeroState::unknown:
        if (!probably_zero(dr.flat(i), geom.chart().coords(), geom.options()))
          return false;
    }
  }
  return true;
}

/// Reassembles the frame curvature from extracted (lambda, e, R0, P, T) and
/// the section-8 rules; used by the invariant checks.
template <class S>
NDArray<S> assemble_walker_riemann(const WalkerComponents<S>& wc) {
  std::size_t n = wc.P.size(), d = n + 2;
  NDArray<S> rf({d, d, d, d}, S(0));
  auto put_triple = [&](std::size_t c, std::size_t e, const S& a,
                        const Mat<S>& A, const Vec<S>& X) {
    // sim(n) matrix in the frame basis: first row (h X)^t, block A, column -X
    rf(0, 0, c, e) = a;
    for (std::size_t j = 0; j < n; ++j) {
      S hx(0);
      for (std::size_t k = 0; k < n; ++k) hx += wc.hx(j, k) * X[k];
      rf(0, 1 + j, c, e) = hx;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rf(1 + i, 1 + j, c, e) = A(i, j);
    for (std::size_t i = 0; i < n; ++i) rf(1 + i, d - 1, c, e) = -X[i];
    rf(d - 1, d - 1, c, e) = -a;
  };
  auto antisym = [&](std::size_t c, std::size_t e) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) rf(a, b, e, c) = -rf(a, b, c, e);
  };
  // R(p, q)
  {
    Mat<S> zero(n, n);
    put_triple(0, d - 1, wc.lambda, zero, wc.e);
    antisym(0, d - 1);
  }
  // R(X_i, X_j)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Mat<S> A(n, n);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) A(a, b) = wc.R0(a, b, i, j);
      Vec<S> X(n, S(0));
      for (std::size_t a = 0; a < n; ++a)
        X[a] = wc.P[j](a, i) - wc.P[i](a, j);  // P(Y)X - P(X)Y
      put_triple(1 + i, 1 + j, S(0), A, X);
      antisym(1 + i, 1 + j);
    }
  // R(X_k, q), with a = g(e, X_k) = h(e, X_k)
  for (std::size_t k = 0; k < n; ++k) {
    S a(0);
    for (std::size_t i = 0; i < n; ++i) a += wc.hx(i, k) * wc.e[i];
    Vec<S> X(n, S(0));
    for (std::size_t i = 0; i < n; ++i) X[i] = wc.T(i, k);
    put_triple(1 + k, d - 1, a, wc.P[k], X);
    antisym(1 + k, d - 1);
  }
  return rf;
}

}  // namespace holonomy

#endif
