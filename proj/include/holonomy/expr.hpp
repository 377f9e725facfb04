#ifndef HOLONOMY_EXPR_HPP
#define HOLONOMY_EXPR_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holonomy/scalar.hpp"

namespace holonomy {

// Canonical symbolic expressions: every Expr is a sum of terms, each term a
// rational coefficient times a monomial in "atoms" (coordinates, elementary
// function applications, and inverted polynomials) with integer exponents.
// Sums and products are flattened and merged at construction, so structural
// equality decides "identically zero" for polynomials and, after clearing
// denominators, for rational functions.

enum class FuncKind { exp_fn, sin_fn, cos_fn, sqrt_fn, log_fn };

inline const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::exp_fn: return "exp";
    case FuncKind::sin_fn: return "sin";
    case FuncKind::cos_fn: return "cos";
    case FuncKind::sqrt_fn: return "sqrt";
    case FuncKind::log_fn: return "log";
  }
  return "?";
}

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

struct Factor {
  AtomPtr atom;
  int exp = 1;
};

struct Term {
  Rational coeff;
  std::vector<Factor> factors;  // sorted by atom order, unique atoms, exp != 0
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t at, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(at)),
        offset(at) {}
  std::size_t offset;
};

class Expr {
 public:
  Expr() = default;  // zero
  explicit Expr(int n) { *this = constant(n); }

  static Expr constant(const Rational& c) {
    Expr e;
    if (c != 0) e.terms_.push_back(Term{c, {}});
    return e;
  }
  static Expr constant(long n) { return constant(Rational(n)); }
  static Expr variable(const std::string& name);

  static Expr zero() { return Expr(); }
  static Expr one() { return constant(1); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].factors.empty());
  }
  std::optional<Rational> as_constant() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].factors.empty())
      return terms_[0].coeff;
    return std::nullopt;
  }

  bool is_polynomial() const;
  int total_degree() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  // internal: assumes terms already canonical
  static Expr from_terms(std::vector<Term> t) {
    Expr e;
    e.terms_ = std::move(t);
    return e;
  }

 private:
  std::vector<Term> terms_;
};

struct Atom {
  enum Kind { variable, function, inverse_base } kind;
  std::string name;  // variable
  FuncKind fn = FuncKind::exp_fn;
  Expr arg;  // function argument, or the primitive polynomial being inverted
};

// ---- ordering ---------------------------------------------------------------

int compare(const Expr& a, const Expr& b);

inline int compare(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Atom::variable:
      return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
    case Atom::function:
      if (a.fn != b.fn) return a.fn < b.fn ? -1 : 1;
      return compare(a.arg, b.arg);
    case Atom::inverse_base:
      return compare(a.arg, b.arg);
  }
  return 0;
}

inline int compare(const AtomPtr& a, const AtomPtr& b) {
  if (a.get() == b.get()) return 0;
  return compare(*a, *b);
}

inline int compare_monomial(const std::vector<Factor>& a,
                            const std::vector<Factor>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].atom, b[i].atom);
    if (c != 0) return c;
    if (a[i].exp != b[i].exp) return a[i].exp > b[i].exp ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

inline int compare(const Expr& a, const Expr& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_monomial(ta[i].factors, tb[i].factors);
    if (c != 0) return c;
    if (ta[i].coeff != tb[i].coeff) return ta[i].coeff < tb[i].coeff ? -1 : 1;
  }
  if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
  return 0;
}

inline bool operator==(const Expr& a, const Expr& b) {
  return compare(a, b) == 0;
}

// ---- construction helpers ---------------------------------------------------

Expr pow(const Expr& base, int k);

namespace expr_detail {

inline void add_term(std::vector<Term>& acc, Term t) {
  if (t.coeff == 0) return;
  auto it = std::lower_bound(
      acc.begin(), acc.end(), t, [](const Term& x, const Term& y) {
        return compare_monomial(x.factors, y.factors) < 0;
      });
  if (it != acc.end() && compare_monomial(it->factors, t.factors) == 0) {
    it->coeff += t.coeff;
    if (it->coeff == 0) acc.erase(it);
  } else {
    acc.insert(it, std::move(t));
  }
}

// Multiplies two canonical terms. Inverse-base atoms that end up with a
// positive exponent are expanded back into genuine polynomial factors, so the
// result is an Expr in general.
inline Expr term_product(const Term& a, const Term& b) {
  Term out;
  out.coeff = a.coeff * b.coeff;
  std::size_t i = 0, j = 0;
  std::vector<Factor> expand;  // inverse bases that became positive powers
  while (i < a.factors.size() || j < b.factors.size()) {
    int c;
    if (i == a.factors.size())
      c = 1;
    else if (j == b.factors.size())
      c = -1;
    else
      c = compare(a.factors[i].atom, b.factors[j].atom);
    Factor f;
    if (c < 0)
      f = a.factors[i++];
    else if (c > 0)
      f = b.factors[j++];
    else {
      f = a.factors[i];
      f.exp += b.factors[j].exp;
      ++i, ++j;
    }
    if (f.exp == 0) continue;
    if (f.atom->kind == Atom::inverse_base && f.exp > 0)
      expand.push_back(f);
    else
      out.factors.push_back(f);
  }
  Expr result = Expr::from_terms({std::move(out)});
  for (const Factor& f : expand) result = result * pow(f.atom->arg, f.exp);
  return result;
}

bool contains_function_atom(const Expr& e);

}  // namespace expr_detail

inline Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Term> acc = a.terms();
  for (const Term& t : b.terms()) expr_detail::add_term(acc, t);
  return Expr::from_terms(std::move(acc));
}

inline Expr operator-(const Expr& a) {
  std::vector<Term> acc = a.terms();
  for (Term& t : acc) t.coeff = -t.coeff;
  return Expr::from_terms(std::move(acc));
}

inline Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  Expr out;
  for (const Term& ta : a.terms())
    for (const Term& tb : b.terms()) out += expr_detail::term_product(ta, tb);
  return out;
}

inline Expr Expr::variable(const std::string& name) {
  auto atom = std::make_shared<Atom>(Atom{Atom::variable, name, FuncKind::exp_fn, {}});
  return Expr::from_terms({Term{Rational(1), {Factor{atom, 1}}}});
}

inline Expr scale(const Expr& e, const Rational& c) {
  if (c == 0) return Expr();
  std::vector<Term> acc = e.terms();
  for (Term& t : acc) t.coeff *= c;
  return Expr::from_terms(std::move(acc));
}

namespace expr_detail {

// e as num/den with den a single monomial and num free of negative exponents.
struct Fraction {
  Expr num;
  Term den;  // coeff 1 monomial
};

inline Fraction as_fraction(const Expr& e) {
  std::vector<Factor> den;
  for (const Term& t : e.terms())
    for (const Factor& f : t.factors) {
      if (f.exp >= 0) continue;
      auto it = std::lower_bound(den.begin(), den.end(), f,
                                 [](const Factor& x, const Factor& y) {
                                   return compare(x.atom, y.atom) < 0;
                                 });
      if (it != den.end() && compare(it->atom, f.atom) == 0)
        it->exp = std::max(it->exp, -f.exp);
      else
        den.insert(it, Factor{f.atom, -f.exp});
    }
  Term d{Rational(1), den};
  Fraction out;
  out.den = d;
  Expr dm = Expr::from_terms({d});
  out.num = e * dm;
  return out;
}

// primitive part: integer coefficients, gcd 1, leading coefficient positive;
// returns the extracted rational content
inline Rational make_primitive(Expr& e) {
  BigInt num_gcd = 0, den_lcm = 1;
  for (const Term& t : e.terms()) {
    num_gcd = boost::multiprecision::gcd(num_gcd, numerator(t.coeff));
    den_lcm = boost::multiprecision::lcm(den_lcm, denominator(t.coeff));
  }
  if (num_gcd == 0) return Rational(1);
  Rational content(num_gcd, den_lcm);
  if (e.terms().front().coeff < 0) content = -content;
  e = scale(e, Rational(1) / content);
  return content;
}

}  // namespace expr_detail

/// Multiplicative inverse; inverted multi-term polynomials become atoms.
inline Expr reciprocal(const Expr& e) {
  if (e.is_zero()) throw NumericError("division by zero");
  if (auto c = e.as_constant()) return Expr::constant(Rational(1) / *c);
  if (e.terms().size() == 1) {
    Term t = e.terms()[0];
    t.coeff = Rational(1) / t.coeff;
    for (Factor& f : t.factors) f.exp = -f.exp;
    // inverse bases flipping to positive exponents must be expanded
    return expr_detail::term_product(t, Term{Rational(1), {}});
  }
  expr_detail::Fraction fr = expr_detail::as_fraction(e);
  Expr num = fr.num;
  Rational content = expr_detail::make_primitive(num);
  Expr result;
  if (num.terms().size() == 1) {
    Term t = num.terms()[0];
    t.coeff = Rational(1) / t.coeff;
    for (Factor& f : t.factors) f.exp = -f.exp;
    result = expr_detail::term_product(t, Term{Rational(1), {}});
  } else {
    auto atom = std::make_shared<Atom>(
        Atom{Atom::inverse_base, "", FuncKind::exp_fn, num});
    result = Expr::from_terms({Term{Rational(1), {Factor{atom, -1}}}});
  }
  result = scale(result, Rational(1) / content);
  return result * Expr::from_terms({fr.den});
}

inline Expr pow(const Expr& base, int k) {
  if (k == 0) return Expr::one();
  if (k < 0) return pow(reciprocal(base), -k);
  if (base.terms().size() == 1) {
    Term t = base.terms()[0];
    Rational c(1);
    for (int i = 0; i < k; ++i) c *= t.coeff;
    t.coeff = c;
    for (Factor& f : t.factors) f.exp *= k;
    return expr_detail::term_product(t, Term{Rational(1), {}});
  }
  Expr acc = Expr::one(), sq = base;
  int e = k;
  while (e > 0) {
    if (e & 1) acc = acc * sq;
    e >>= 1;
    if (e) sq = sq * sq;
  }
  return acc;
}

inline Expr operator/(const Expr& a, const Expr& b) { return a * reciprocal(b); }

inline Expr apply(FuncKind fn, const Expr& arg) {
  if (auto c = arg.as_constant()) {
    switch (fn) {
      case FuncKind::exp_fn:
        if (*c == 0) return Expr::one();
        break;
      case FuncKind::log_fn:
        if (*c == 1) return Expr::zero();
        break;
      case FuncKind::sin_fn:
        if (*c == 0) return Expr::zero();
        break;
      case FuncKind::cos_fn:
        if (*c == 0) return Expr::one();
        break;
      case FuncKind::sqrt_fn:
        if (*c >= 0) {
          BigInt n = numerator(*c), d = denominator(*c);
          BigInt sn = boost::multiprecision::sqrt(n);
          BigInt sd = boost::multiprecision::sqrt(d);
          if (sn * sn == n && sd * sd == d) return Expr::constant(Rational(sn, sd));
        }
        break;
    }
  }
  auto atom = std::make_shared<Atom>(Atom{Atom::function, "", fn, arg});
  return Expr::from_terms({Term{Rational(1), {Factor{atom, 1}}}});
}

inline bool Expr::is_polynomial() const {
  for (const Term& t : terms_)
    for (const Factor& f : t.factors)
      if (f.atom->kind != Atom::variable || f.exp < 0) return false;
  return true;
}

inline int Expr::total_degree() const {
  int deg = 0;
  for (const Term& t : terms_) {
    int d = 0;
    for (const Factor& f : t.factors) d += f.exp;
    deg = std::max(deg, d);
  }
  return deg;
}

// ---- differentiation --------------------------------------------------------

Expr diff(const Expr& e, const std::string& var);

namespace expr_detail {

inline Expr diff_atom(const AtomPtr& a, const std::string& var) {
  switch (a->kind) {
    case Atom::variable:
      return a->name == var ? Expr::one() : Expr::zero();
    case Atom::inverse_base:
      return diff(a->arg, var);
    case Atom::function: {
      Expr du = diff(a->arg, var);
      if (du.is_zero()) return Expr::zero();
      switch (a->fn) {
        case FuncKind::exp_fn:
          return apply(FuncKind::exp_fn, a->arg) * du;
        case FuncKind::sin_fn:
          return apply(FuncKind::cos_fn, a->arg) * du;
        case FuncKind::cos_fn:
          return -(apply(FuncKind::sin_fn, a->arg) * du);
        case FuncKind::sqrt_fn:
          return scale(du * reciprocal(apply(FuncKind::sqrt_fn, a->arg)),
                       Rational(1, 2));
        case FuncKind::log_fn:
          return du * reciprocal(a->arg);
      }
    }
  }
  return Expr::zero();
}

}  // namespace expr_detail

inline Expr diff(const Expr& e, const std::string& var) {
  Expr out;
  for (const Term& t : e.terms()) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      // d/dx of the atom: if the atom does not involve var, skip early for
      // the common sparse case
      Expr da = expr_detail::diff_atom(f.atom, var);
      if (da.is_zero()) continue;
      Term rest{t.coeff * Rational(f.exp), {}};
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (j == i) continue;
        rest.factors.push_back(t.factors[j]);
      }
      Expr piece = expr_detail::term_product(rest, Term{Rational(1), {}});
      if (f.atom->kind == Atom::inverse_base) {
        piece = piece * pow(f.atom->arg, f.exp - 1);
      } else if (f.exp != 1) {
        Factor powered{f.atom, f.exp - 1};
        if (powered.exp != 0)
          piece = piece *
                  Expr::from_terms({Term{Rational(1), {powered}}});
      }
      out += piece * da;
    }
  }
  return out;
}

// ---- evaluation -------------------------------------------------------------

template <class S>
using PointValues = std::map<std::string, S>;

template <class S>
S eval(const Expr& e, const PointValues<S>& at);

namespace expr_detail {

template <class S>
S eval_atom(const Atom& a, const PointValues<S>& at) {
  switch (a.kind) {
    case Atom::variable: {
      auto it = at.find(a.name);
      if (it == at.end())
        throw NumericError("unbound coordinate '" + a.name + "' in evaluation");
      return it->second;
    }
    case Atom::inverse_base:
      return eval<S>(a.arg, at);
    case Atom::function: {
      S u = eval<S>(a.arg, at);
      if constexpr (ScalarOps<S>::exact) {
        switch (a.fn) {
          case FuncKind::sqrt_fn: {
            if (u < 0) throw NumericError("domain error: sqrt of negative");
            BigInt n = numerator(u), d = denominator(u);
            BigInt sn = boost::multiprecision::sqrt(n);
            BigInt sd = boost::multiprecision::sqrt(d);
            if (sn * sn == n && sd * sd == d) return Rational(sn, sd);
            throw NumericError("sqrt not exactly evaluable");
          }
          case FuncKind::exp_fn:
            if (u == 0) return S(1);
            throw NumericError("exp not exactly evaluable");
          case FuncKind::log_fn:
            if (u <= 0) throw NumericError("domain error: log of non-positive");
            if (u == 1) return S(0);
            throw NumericError("log not exactly evaluable");
          case FuncKind::sin_fn:
            if (u == 0) return S(0);
            throw NumericError("sin not exactly evaluable");
          case FuncKind::cos_fn:
            if (u == 0) return S(1);
            throw NumericError("cos not exactly evaluable");
        }
      } else {
        switch (a.fn) {
          case FuncKind::sqrt_fn:
            if (u < 0) throw NumericError("domain error: sqrt of negative");
            return std::sqrt(u);
          case FuncKind::exp_fn: return std::exp(u);
          case FuncKind::log_fn:
            if (u <= 0) throw NumericError("domain error: log of non-positive");
            return std::log(u);
          case FuncKind::sin_fn: return std::sin(u);
          case FuncKind::cos_fn: return std::cos(u);
        }
      }
    }
  }
  throw NumericError("unreachable atom kind");
}

template <class S>
S int_pow(S base, int k) {
  if (k < 0) {
    if (ScalarOps<S>::is_zero(base, 0.0))
      throw NumericError("division by zero");
    base = S(1) / base;
    k = -k;
  }
  S acc(1);
  while (k > 0) {
    if (k & 1) acc *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return acc;
}

}  // namespace expr_detail

template <class S>
S eval(const Expr& e, const PointValues<S>& at) {
  S total(0);
  for (const Term& t : e.terms()) {
    S prod = ScalarOps<S>::from_rational(t.coeff);
    for (const Factor& f : t.factors) {
      S a = expr_detail::eval_atom<S>(*f.atom, at);
      prod *= expr_detail::int_pow<S>(a, f.exp);
    }
    total += prod;
  }
  return total;
}

// ---- zero decision ----------------------------------------------------------

enum class ZeroState { zero, nonzero, unknown };

namespace expr_detail {

inline bool contains_function_atom(const Expr& e) {
  for (const Term& t : e.terms())
    for (const Factor& f : t.factors) {
      if (f.atom->kind == Atom::function) return true;
      if (f.atom->kind == Atom::inverse_base &&
          contains_function_atom(f.atom->arg))
        return true;
    }
  return false;
}

inline bool has_negative_exponent(const Expr& e) {
  for (const Term& t : e.terms())
    for (const Factor& f : t.factors)
      if (f.exp < 0) return true;
  return false;
}

}  // namespace expr_detail

/// Decides "identically zero" exactly for rational functions of the
/// coordinates (clearing denominators first); expressions involving
/// elementary functions are only decided when structurally zero.
inline ZeroState zero_state(const Expr& e) {
  Expr probe = e;
  if (expr_detail::has_negative_exponent(e))
    probe = expr_detail::as_fraction(e).num;
  if (probe.is_zero()) return ZeroState::zero;
  if (expr_detail::contains_function_atom(probe)) return ZeroState::unknown;
  return ZeroState::nonzero;
}

/// Probabilistic zero test at random rational points (float evaluation) for
/// expressions the exact decision cannot settle. `names` must list every
/// coordinate that may occur in e.
inline bool probably_zero(const Expr& e, const std::vector<std::string>& names,
                          const NumericOptions& opts) {
  ZeroState zs = zero_state(e);
  if (zs != ZeroState::unknown) return zs == ZeroState::zero;
  RationalSampler sampler(opts.seed ^ 0x9e3779b97f4a7c15ull);
  int done = 0, attempts = 0;
  while (done < 32 && attempts < 256) {
    ++attempts;
    PointValues<double> at;
    for (const auto& n : names) at[n] = to_double(sampler.next(7, 8));
    try {
      double v = eval<double>(e, at);
      if (std::abs(v) > opts.tol * 1e3) return false;
      ++done;
    } catch (const NumericError&) {
      continue;  // sampled a pole or domain edge; resample
    }
  }
  return done > 0;
}

/// Renames coordinates (used when charts are combined into products).
inline Expr rename_variables(const Expr& e,
                             const std::map<std::string, std::string>& map);

namespace expr_detail {

inline AtomPtr rename_atom(const AtomPtr& a,
                           const std::map<std::string, std::string>& map) {
  switch (a->kind) {
    case Atom::variable: {
      auto it = map.find(a->name);
      if (it == map.end()) return a;
      return std::make_shared<Atom>(
          Atom{Atom::variable, it->second, FuncKind::exp_fn, {}});
    }
    case Atom::function:
      return std::make_shared<Atom>(
          Atom{Atom::function, "", a->fn, rename_variables(a->arg, map)});
    case Atom::inverse_base:
      return std::make_shared<Atom>(Atom{Atom::inverse_base, "",
                                         FuncKind::exp_fn,
                                         rename_variables(a->arg, map)});
  }
  return a;
}

}  // namespace expr_detail

inline Expr rename_variables(const Expr& e,
                             const std::map<std::string, std::string>& map) {
  Expr out;
  for (const Term& t : e.terms()) {
    Expr piece = Expr::constant(t.coeff);
    for (const Factor& f : t.factors) {
      AtomPtr a = expr_detail::rename_atom(f.atom, map);
      if (a->kind == Atom::inverse_base)
        piece = piece * pow(a->arg, f.exp);
      else
        piece = piece * Expr::from_terms({Term{Rational(1), {Factor{a, f.exp}}}});
    }
    out += piece;
  }
  return out;
}

/// Re-normalizes an expression through the canonical constructors; the result
/// always equals the input (canonicalization is idempotent by construction).
inline Expr canon(const Expr& e) {
  Expr out;
  for (const Term& t : e.terms()) {
    Expr piece = Expr::constant(t.coeff);
    for (const Factor& f : t.factors) {
      if (f.atom->kind == Atom::inverse_base)
        piece = piece * pow(f.atom->arg, f.exp);
      else
        piece =
            piece * Expr::from_terms({Term{Rational(1), {Factor{f.atom, f.exp}}}});
    }
    out += piece;
  }
  return out;
}

// ---- printing ---------------------------------------------------------------

std::string to_string(const Expr& e);

namespace expr_detail {

inline std::string atom_string(const Atom& a) {
  switch (a.kind) {
    case Atom::variable: return a.name;
    case Atom::function:
      return std::string(func_name(a.fn)) + "(" + holonomy::to_string(a.arg) + ")";
    case Atom::inverse_base:
      return "(" + holonomy::to_string(a.arg) + ")";
  }
  return "?";
}

inline std::string term_string(const Term& t) {
  Rational c = t.coeff < 0 ? -t.coeff : t.coeff;
  std::string out;
  bool coeff_printed = false;
  if (c != 1 || t.factors.empty()) {
    out += holonomy::to_string(c);
    coeff_printed = true;
  }
  for (const Factor& f : t.factors) {
    if (coeff_printed || !out.empty()) out += "*";
    out += atom_string(*f.atom);
    if (f.exp != 1) out += "^" + std::to_string(f.exp);
    coeff_printed = true;
  }
  return out;
}

}  // namespace expr_detail

inline std::string to_string(const Expr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : e.terms()) {
    if (first) {
      if (t.coeff < 0) out += "-";
      first = false;
    } else {
      out += t.coeff < 0 ? " - " : " + ";
    }
    out += expr_detail::term_string(t);
  }
  return out;
}

// ---- parsing ----------------------------------------------------------------

namespace expr_detail {

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& coords)
      : src_(src), coords_(coords) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != src_.size()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t'))
      ++pos_;
  }
  bool eat(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  Expr expression() {
    skip_space();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    Expr e = term();
    if (neg) e = -e;
    for (;;) {
      if (eat('+'))
        e += term();
      else if (eat('-'))
        e -= term();
      else
        break;
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (eat('*'))
        e = e * factor();
      else if (eat('/'))
        e = e / factor();
      else
        break;
    }
    return e;
  }

  Expr factor() {
    Expr b = base();
    skip_space();
    if (eat('^')) {
      skip_space();
      std::size_t at = pos_;
      bool neg = eat('-');
      std::string digits;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits += src_[pos_++];
      if (digits.empty()) throw ParseError(at, "expected integer exponent");
      int k = std::stoi(digits);
      return pow(b, neg ? -k : k);
    }
    return b;
  }

  Expr base() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    throw ParseError(pos_, "syntax error");
  }

  Expr number() {
    std::size_t start = pos_;
    std::string text;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '.'))
      text += src_[pos_++];
    try {
      return Expr::constant(parse_rational(text));
    } catch (const NumericError&) {
      throw ParseError(start, "invalid number");
    }
  }

  Expr identifier() {
    std::size_t start = pos_;
    std::string name;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      name += src_[pos_++];
    if (peek() == '(') {
      static const std::map<std::string, FuncKind> funcs = {
          {"exp", FuncKind::exp_fn},
          {"sin", FuncKind::sin_fn},
          {"cos", FuncKind::cos_fn},
          {"sqrt", FuncKind::sqrt_fn},
          {"log", FuncKind::log_fn}};
      auto it = funcs.find(name);
      if (it == funcs.end())
        throw ParseError(start, "unknown function '" + name + "'");
      eat('(');
      Expr arg = expression();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return apply(it->second, arg);
    }
    for (const auto& coord : coords_)
      if (coord == name) return Expr::variable(name);
    throw ParseError(start, "unknown coordinate '" + name + "'");
  }
};

}  // namespace expr_detail

/// Parses an expression over the given coordinate names.
inline Expr parse_expr(std::string_view source,
                       const std::vector<std::string>& coords) {
  return expr_detail::Parser(source, coords).parse();
}

}  // namespace holonomy

#endif
