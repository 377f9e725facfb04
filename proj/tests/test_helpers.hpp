#ifndef HOLONOMY_TEST_HELPERS_HPP
#define HOLONOMY_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "holonomy/expr.hpp"

namespace holonomy::testing {

/// Random polynomial over the given coordinates, degree <= max_degree.
inline Expr random_polynomial(std::mt19937_64& rng,
                              const std::vector<std::string>& coords,
                              int max_degree = 3, int max_terms = 5) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> pick(0, coords.size() - 1);
  Expr e;
  int terms = nterms(rng);
  for (int t = 0; t < terms; ++t) {
    Expr mono = Expr::constant(Rational(coef(rng), den(rng)));
    int d = deg(rng);
    for (int k = 0; k < d; ++k) mono = mono * Expr::variable(coords[pick(rng)]);
    e += mono;
  }
  return e;
}

inline PointValues<Rational> random_point(std::mt19937_64& rng,
                                          const std::vector<std::string>& coords,
                                          int num_bound = 5, int den_bound = 3) {
  std::uniform_int_distribution<int> num(-num_bound, num_bound);
  std::uniform_int_distribution<int> den(1, den_bound);
  PointValues<Rational> p;
  for (const auto& c : coords) p[c] = Rational(num(rng), den(rng));
  return p;
}

inline PointValues<double> to_float_point(const PointValues<Rational>& p) {
  PointValues<double> out;
  for (const auto& [k, v] : p) out[k] = to_double(v);
  return out;
}

/// Fourth-order central difference of f along `var` at `at`.
template <class F>
double central_difference(F&& f, PointValues<double> at, const std::string& var,
                          double h = 1e-3) {
  auto shift = [&](double d) {
    PointValues<double> q = at;
    q[var] += d;
    return f(q);
  };
  return (-shift(2 * h) + 8 * shift(h) - 8 * shift(-h) + shift(-2 * h)) /
         (12 * h);
}

}  // namespace holonomy::testing

#endif
