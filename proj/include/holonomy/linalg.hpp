#ifndef HOLONOMY_LINALG_HPP
#define HOLONOMY_LINALG_HPP

#include <algorithm>
#include <cassert>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "holonomy/scalar.hpp"

namespace holonomy {

template <class S>
using Vec = std::vector<S>;

/// Dense row-major matrix over Rational or double. Everything here is desk
/// scale (dimensions in the tens), so no effort is spent on blocking.
template <class S>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, S fill = S(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Vec<S> row(std::size_t i) const {
    return Vec<S>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  void set_row(std::size_t i, const Vec<S>& v) {
    assert(v.size() == cols_);
    std::copy(v.begin(), v.end(), data_.begin() + i * cols_);
  }
  void append_row(const Vec<S>& v) {
    if (cols_ == 0) cols_ = v.size();
    assert(v.size() == cols_);
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  S trace() const {
    S t(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  Vec<S> flatten() const { return data_; }
  static Mat from_flat(std::size_t rows, std::size_t cols, Vec<S> v) {
    Mat m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(v);
    assert(m.data_.size() == rows * cols);
    return m;
  }

  friend Mat operator+(const Mat& a, const Mat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    Mat c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    Mat c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }
  friend Mat operator*(const S& s, const Mat& a) {
    Mat c = a;
    for (auto& x : c.data_) x = s * x;
    return c;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    assert(a.cols_ == b.rows_);
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (aik == S(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Vec<S> operator*(const Mat& a, const Vec<S>& v) {
    assert(a.cols_ == v.size());
    Vec<S> r(a.rows_, S(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }
  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec<S> data_;
};

template <class S>
Mat<S> bracket(const Mat<S>& a, const Mat<S>& b) {
  return a * b - b * a;
}

template <class S>
S dot(const Vec<S>& a, const Vec<S>& b) {
  assert(a.size() == b.size());
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class S>
Mat<S> to_matrix(const Mat<Rational>& m, double) = delete;

template <class S>
Mat<S> convert_matrix(const Mat<Rational>& m) {
  Mat<S> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = ScalarOps<S>::from_rational(m(i, j));
  return out;
}

namespace detail {

template <class S>
double max_magnitude(const Mat<S>& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      best = std::max(best, ScalarOps<S>::magnitude(m(i, j)));
  return best;
}

}  // namespace detail

/// Row echelon with the pivot policy from the spec: first nonzero entry in
/// exact mode, largest magnitude in float mode. Zero decisions in float mode
/// use tol relative to the largest entry of the input.
template <class S>
struct EchelonResult {
  Mat<S> reduced;               // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column per kept row
  std::size_t rank = 0;
};

template <class S>
EchelonResult<S> echelon(Mat<S> m, const NumericOptions& opts = {}) {
  const double scale = ScalarOps<S>::exact ? 0.0 : detail::max_magnitude(m);
  const double eps = ScalarOps<S>::exact ? 0.0 : opts.tol * std::max(scale, 1.0);
  auto is_zero = [&](const S& x) { return ScalarOps<S>::is_zero(x, eps); };

  EchelonResult<S> out;
  if (m.empty()) return out;
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols() && r < m.rows(); ++col) {
    std::size_t pivot = m.rows();
    if constexpr (ScalarOps<S>::exact) {
      for (std::size_t i = r; i < m.rows(); ++i)
        if (!is_zero(m(i, col))) {
          pivot = i;
          break;
        }
    } else {
      double best = eps;
      for (std::size_t i = r; i < m.rows(); ++i) {
        double mag = ScalarOps<S>::magnitude(m(i, col));
        if (mag > best) {
          best = mag;
          pivot = i;
        }
      }
    }
    if (pivot == m.rows()) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(r, j));
    S inv = S(1) / m(r, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(r, j) = inv * m(r, j);
    m(r, col) = S(1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, col))) continue;
      S f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
      m(i, col) = S(0);
    }
    out.pivots.push_back(col);
    ++r;
  }
  out.rank = r;
  out.reduced = Mat<S>(r, m.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.reduced(i, j) = m(i, j);
  return out;
}

template <class S>
std::size_t rank(const Mat<S>& m, const NumericOptions& opts = {}) {
  return echelon(m, opts).rank;
}

/// Basis of the right null space { v : M v = 0 }, rows of the result.
template <class S>
Mat<S> kernel(const Mat<S>& m, const NumericOptions& opts = {}) {
  EchelonResult<S> e = echelon(m, opts);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  Mat<S> out(m.cols() - e.rank, m.cols());
  std::size_t k = 0;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    out(k, free) = S(1);
    for (std::size_t i = 0; i < e.rank; ++i)
      out(k, e.pivots[i]) = -e.reduced(i, free);
    ++k;
  }
  return out;
}

/// One solution of A x = b, or nullopt if inconsistent.
template <class S>
std::optional<Vec<S>> solve(const Mat<S>& a, const Vec<S>& b,
                            const NumericOptions& opts = {}) {
  Mat<S> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  EchelonResult<S> e = echelon(aug, opts);
  Vec<S> x(a.cols(), S(0));
  for (std::size_t i = 0; i < e.rank; ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;  // 0 = 1 row
    x[e.pivots[i]] = e.reduced(i, a.cols());
  }
  return x;
}

template <class S>
Mat<S> inverse(const Mat<S>& a, const NumericOptions& opts = {}) {
  assert(a.rows() == a.cols());
  std::size_t n = a.rows();
  Mat<S> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = S(1);
  }
  EchelonResult<S> e = echelon(aug, opts);
  if (e.rank < n || e.pivots.back() >= n)
    throw NumericError("matrix is singular");
  Mat<S> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = e.reduced(i, n + j);
  return out;
}

template <class S>
S determinant(Mat<S> m, const NumericOptions& opts = {}) {
  assert(m.rows() == m.cols());
  const double scale = ScalarOps<S>::exact ? 0.0 : detail::max_magnitude(m);
  const double eps = ScalarOps<S>::exact ? 0.0 : opts.tol * std::max(scale, 1.0);
  S det(1);
  std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t i = col; i < n; ++i)
      if (!ScalarOps<S>::is_zero(m(i, col), eps)) {
        pivot = i;
        break;
      }
    if (pivot == n) return S(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pivot, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    S inv = S(1) / m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      S f = inv * m(i, col);
      if (ScalarOps<S>::is_zero(f, 0.0)) continue;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

/// Incremental span of vectors with reduction against the rows collected so
/// far. Used by every closure loop.
template <class S>
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t dim, const NumericOptions& opts = {})
      : dim_(dim), opts_(opts) {}

  /// Returns true if v enlarged the span.
  bool add(Vec<S> v) {
    assert(v.size() == dim_);
    double eps = 0.0;
    if constexpr (!ScalarOps<S>::exact) {
      double scale = 1.0;
      for (const S& x : v) scale = std::max(scale, ScalarOps<S>::magnitude(x));
      eps = opts_.tol * scale;
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const S& c = v[pivots_[i]];
      if (ScalarOps<S>::is_zero(c, eps)) continue;
      S f = c;
      for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[i][j];
    }
    std::size_t pivot = dim_;
    if constexpr (ScalarOps<S>::exact) {
      for (std::size_t j = 0; j < dim_; ++j)
        if (v[j] != S(0)) {
          pivot = j;
          break;
        }
    } else {
      double best = eps;
      for (std::size_t j = 0; j < dim_; ++j)
        if (ScalarOps<S>::magnitude(v[j]) > best) {
          best = ScalarOps<S>::magnitude(v[j]);
          pivot = j;
        }
    }
    if (pivot == dim_) return false;
    S inv = S(1) / v[pivot];
    for (std::size_t j = 0; j < dim_; ++j) v[j] = inv * v[j];
    v[pivot] = S(1);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      S c = rows_[i][pivot];
      if (ScalarOps<S>::is_zero(c, 0.0)) continue;
      for (std::size_t j = 0; j < dim_; ++j) rows_[i][j] -= c * v[j];
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
  }

  bool contains(Vec<S> v) const {
    double eps = 0.0;
    if constexpr (!ScalarOps<S>::exact) {
      double scale = 1.0;
      for (const S& x : v) scale = std::max(scale, ScalarOps<S>::magnitude(x));
      eps = opts_.tol * scale;
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const S& c = v[pivots_[i]];
      if (ScalarOps<S>::is_zero(c, eps)) continue;
      S f = c;
      for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[i][j];
    }
    for (std::size_t j = 0; j < dim_; ++j)
      if (!ScalarOps<S>::is_zero(v[j], eps)) return false;
    return true;
  }

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  Mat<S> basis() const {
    Mat<S> m(rows_.size(), dim_);
    for (std::size_t i = 0; i < rows_.size(); ++i) m.set_row(i, rows_[i]);
    return m;
  }

 private:
  std::size_t dim_;
  NumericOptions opts_;
  std::vector<Vec<S>> rows_;
  std::vector<std::size_t> pivots_;
};

// ---- Subspaces (row-space bases) -------------------------------------------

template <class S>
Mat<S> row_space(const Mat<S>& m, const NumericOptions& opts = {}) {
  return echelon(m, opts).reduced;
}

template <class S>
bool span_contains(const Mat<S>& basis, const Vec<S>& v,
                   const NumericOptions& opts = {}) {
  SpanBuilder<S> sb(v.size(), opts);
  for (std::size_t i = 0; i < basis.rows(); ++i) sb.add(basis.row(i));
  return sb.contains(v);
}

template <class S>
bool same_span(const Mat<S>& a, const Mat<S>& b,
               const NumericOptions& opts = {}) {
  if (rank(a, opts) != rank(b, opts)) return false;
  for (std::size_t i = 0; i < b.rows(); ++i)
    if (!span_contains(a, b.row(i), opts)) return false;
  return true;
}

template <class S>
Mat<S> span_sum(const Mat<S>& a, const Mat<S>& b,
                const NumericOptions& opts = {}) {
  Mat<S> all = a;
  for (std::size_t i = 0; i < b.rows(); ++i) all.append_row(b.row(i));
  return row_space(all, opts);
}

/// Intersection of two row spaces inside the same ambient space.
template <class S>
Mat<S> span_intersection(const Mat<S>& a, const Mat<S>& b,
                         const NumericOptions& opts = {}) {
  if (a.rows() == 0 || b.rows() == 0) return Mat<S>(0, a.cols());
  // x = u A = v B  <=>  (u, v) in ker [A^t | -B^t]
  Mat<S> m(a.cols(), a.rows() + b.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) m(j, i) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) m(j, a.rows() + i) = -b(i, j);
  }
  Mat<S> k = kernel(m, opts);
  Mat<S> out(0, a.cols());
  for (std::size_t r = 0; r < k.rows(); ++r) {
    Vec<S> x(a.cols(), S(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) x[j] += k(r, i) * a(i, j);
    out.append_row(x);
  }
  return row_space(out, opts);
}

/// Gram matrix of a bilinear form restricted to a subspace basis.
template <class S>
Mat<S> restrict_form(const Mat<S>& form, const Mat<S>& basis) {
  return basis * form * basis.transpose();
}

/// { v : form(b, v) = 0 for every basis row b } — the orthogonal complement
/// of a row space with respect to an arbitrary bilinear form.
template <class S>
Mat<S> orthogonal_complement(const Mat<S>& basis, const Mat<S>& form,
                             const NumericOptions& opts = {}) {
  if (basis.rows() == 0) return Mat<S>::identity(form.cols());
  return kernel(basis * form, opts);
}

/// Kernel of a symmetric form restricted to a subspace, returned in ambient
/// coordinates.
template <class S>
Mat<S> form_kernel_on(const Mat<S>& form, const Mat<S>& basis,
                      const NumericOptions& opts = {}) {
  Mat<S> g = restrict_form(form, basis);
  Mat<S> k = kernel(g, opts);  // coords w.r.t. basis rows
  return row_space(k * basis, opts);
}

/// Signature (positives, negatives, zeros) of a symmetric matrix via
/// congruence diagonalization; exact over rationals.
template <class S>
struct FormSignature {
  std::size_t positive = 0, negative = 0, zero = 0;
};

template <class S>
FormSignature<S> form_signature(Mat<S> g, const NumericOptions& opts = {}) {
  assert(g.rows() == g.cols());
  std::size_t n = g.rows();
  const double scale = ScalarOps<S>::exact ? 0.0 : detail::max_magnitude(g);
  const double eps = ScalarOps<S>::exact ? 0.0 : opts.tol * std::max(scale, 1.0);
  auto is_zero = [&](const S& x) { return ScalarOps<S>::is_zero(x, eps); };
  auto congruence_row_col = [&](auto&& op) { op(); };
  (void)congruence_row_col;

  FormSignature<S> sig;
  for (std::size_t k = 0; k < n; ++k) {
    if (is_zero(g(k, k))) {
      std::size_t d = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (!is_zero(g(i, i))) {
          d = i;
          break;
        }
      if (d < n) {
        for (std::size_t j = 0; j < n; ++j) std::swap(g(k, j), g(d, j));
        for (std::size_t j = 0; j < n; ++j) std::swap(g(j, k), g(j, d));
      } else {
        std::size_t a = n, b = n;
        for (std::size_t i = k; i < n && a == n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            if (!is_zero(g(i, j))) {
              a = i;
              b = j;
              break;
            }
        if (a == n) {
          sig.zero = n - k;
          return sig;
        }
        // congruence: row/col a += row/col b creates 2 g(a,b) on the diagonal
        for (std::size_t j = 0; j < n; ++j) g(a, j) += g(b, j);
        for (std::size_t j = 0; j < n; ++j) g(j, a) += g(j, b);
        if (a != k) {
          for (std::size_t j = 0; j < n; ++j) std::swap(g(k, j), g(a, j));
          for (std::size_t j = 0; j < n; ++j) std::swap(g(j, k), g(j, a));
        }
      }
    }
    const S pivot = g(k, k);
    if (pivot > S(0))
      ++sig.positive;
    else
      ++sig.negative;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (is_zero(g(i, k))) continue;
      S f = g(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j) g(i, j) -= f * g(k, j);
      for (std::size_t j = k; j < n; ++j) g(j, i) -= f * g(j, k);
    }
  }
  return sig;
}

// ---- Characteristic polynomial and root extraction -------------------------

/// Coefficients c[0] + c[1] x + ... + c[n] x^n of det(xI - A),
/// by Faddeev-LeVerrier (division-free except by integers).
template <class S>
Vec<S> char_poly(const Mat<S>& a) {
  assert(a.rows() == a.cols());
  std::size_t n = a.rows();
  Vec<S> c(n + 1, S(0));
  c[n] = S(1);
  Mat<S> m = Mat<S>::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    S ck = m.trace() / S(static_cast<int>(k));
    c[n - k] = -ck;
    for (std::size_t i = 0; i < n; ++i) m(i, i) -= ck;
  }
  return c;
}

namespace detail {

inline std::vector<BigInt> divisors(BigInt n) {
  if (n < 0) n = -n;
  std::vector<BigInt> primes;
  for (BigInt p = 2; p * p <= n && p < 2000000; ++p)
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  if (n > 1) primes.push_back(n);  // may be composite for huge inputs
  std::vector<BigInt> divs{1};
  std::size_t i = 0;
  while (i < primes.size()) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    std::size_t mult = j - i;
    std::size_t base = divs.size();
    BigInt pw = 1;
    for (std::size_t e = 1; e <= mult; ++e) {
      pw *= primes[i];
      for (std::size_t d = 0; d < base; ++d) divs.push_back(divs[d] * pw);
    }
    i = j;
  }
  std::sort(divs.begin(), divs.end());
  divs.erase(std::unique(divs.begin(), divs.end()), divs.end());
  return divs;
}

}  // namespace detail

/// All rational roots of a rational-coefficient polynomial (with
/// multiplicity 1 each in the output; callers only need the set).
inline std::vector<Rational> rational_roots(const Vec<Rational>& coeffs) {
  Vec<Rational> c = coeffs;
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.size() <= 1) return {};
  std::vector<Rational> roots;
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0) ++low;
  if (low > 0) roots.push_back(Rational(0));
  if (low + 1 >= c.size()) return roots;

  BigInt den_lcm = 1;
  for (std::size_t i = low; i < c.size(); ++i)
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c[i]));
  std::vector<BigInt> ic;
  for (std::size_t i = low; i < c.size(); ++i)
    ic.push_back(numerator(c[i] * Rational(den_lcm)));

  auto eval_zero = [&](const Rational& x) {
    Rational v(0);
    for (std::size_t i = ic.size(); i-- > 0;) v = v * x + Rational(ic[i]);
    return v == 0;
  };
  std::vector<BigInt> ps = detail::divisors(ic.front());
  std::vector<BigInt> qs = detail::divisors(ic.back());
  for (const BigInt& p : ps)
    for (const BigInt& q : qs) {
      Rational cand(p, q);
      if (eval_zero(cand)) roots.push_back(cand);
      if (eval_zero(-cand)) roots.push_back(-cand);
    }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

/// Real roots of a double-coefficient polynomial via Durand-Kerner, keeping
/// roots whose imaginary part is below tol relative to the coefficient scale.
inline std::vector<double> real_roots(const Vec<double>& coeffs,
                                      double tol = 1e-9) {
  Vec<double> c = coeffs;
  while (!c.empty() && std::abs(c.back()) < tol) c.pop_back();
  if (c.size() <= 1) return {};
  std::size_t deg = c.size() - 1;
  using C = std::complex<double>;
  std::vector<C> z(deg), cn(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) cn[i] = c[i] / c.back();
  C seed(0.4, 0.9);
  z[0] = C(1, 0);
  for (std::size_t i = 1; i < deg; ++i) z[i] = z[i - 1] * seed;
  auto eval = [&](C x) {
    C v = 0;
    for (std::size_t i = cn.size(); i-- > 0;) v = v * x + cn[i];
    return v;
  };
  for (int iter = 0; iter < 300; ++iter) {
    double shift = 0;
    for (std::size_t i = 0; i < deg; ++i) {
      C num = eval(z[i]), den = 1;
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) den *= z[i] - z[j];
      C delta = num / den;
      z[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) break;
  }
  double scale = 1.0;
  for (const auto& x : z) scale = std::max(scale, std::abs(x));
  std::vector<double> roots;
  for (const auto& x : z)
    if (std::abs(x.imag()) <= tol * 100 * scale) roots.push_back(x.real());
  std::sort(roots.begin(), roots.end());
  // merge numerically equal roots
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || std::abs(r - out.back()) > tol * 100 * scale)
      out.push_back(r);
  return out;
}

/// Eigenvalue candidates for an invariant-line search: exact mode finds the
/// rational eigenvalues, float mode the numerically real ones.
template <class S>
std::vector<S> real_eigenvalue_candidates(const Mat<S>& a,
                                          const NumericOptions& opts) {
  Vec<S> cp = char_poly(a);
  if constexpr (ScalarOps<S>::exact) {
    return rational_roots(cp);
  } else {
    return real_roots(cp, opts.tol);
  }
}

}  // namespace holonomy

#endif
