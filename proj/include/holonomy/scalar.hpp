#ifndef HOLONOMY_SCALAR_HPP
#define HOLONOMY_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace holonomy {

/// Exact rational scalar used everywhere a rank or kernel decision must not
/// depend on a tolerance. Expression templates are switched off so the type
/// behaves like a plain value in generic code.
using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& r) {
  return static_cast<double>(r);
}
inline double to_double(double x) { return x; }

/// Options shared by every numeric routine. `tol` is the one global knob for
/// float-mode zero decisions: pivots below tol * (largest entry) count as zero.
struct NumericOptions {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int max_order = 4;
  int sample_points = 3;
};

/// Per-scalar (exact vs IEEE double) policy.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x, double = 0.0) { return x == 0; }
  static Rational from_rational(const Rational& r) { return r; }
  static double magnitude(const Rational& x) { return std::abs(to_double(x)); }
};

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double from_rational(const Rational& r) { return to_double(r); }
  static double magnitude(double x) { return std::abs(x); }
};

/// Parses "p/q", a decimal like "-3.25", or a plain integer, exactly.
inline Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Rational {
    throw NumericError("invalid rational constant: '" + text + "'");
  };
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (num.empty() || den.empty()) return bad();
    Rational d{BigInt(den)};
    if (d == 0) throw NumericError("zero denominator in '" + text + "'");
    return Rational{BigInt(num)} / d;
  }
  std::size_t dot = text.find('.');
  if (dot == std::string::npos) return Rational(BigInt(text));
  std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
  if (tail.empty()) return bad();
  bool neg = !head.empty() && head[0] == '-';
  if (head.empty() || head == "-" || head == "+") head += "0";
  Rational value{BigInt(head)};
  BigInt scale = 1;
  for (char c : tail) {
    if (c < '0' || c > '9') return bad();
    scale *= 10;
  }
  Rational frac = Rational(BigInt(tail)) / Rational(scale);
  return neg ? value - frac : value + frac;
}

inline std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

/// Small random rationals for sample points and property tests.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : rng_(seed) {}

  Rational next(int num_bound = 9, int den_bound = 4) {
    std::uniform_int_distribution<int> num(-num_bound, num_bound);
    std::uniform_int_distribution<int> den(1, den_bound);
    return Rational(num(rng_), den(rng_));
  }
  Rational next_nonzero(int num_bound = 9, int den_bound = 4) {
    for (;;) {
      Rational r = next(num_bound, den_bound);
      if (r != 0) return r;
    }
  }
  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace holonomy

#endif
