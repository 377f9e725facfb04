#include <catch2/catch_amalgamated.hpp>

#include "holonomy/linalg.hpp"

using namespace holonomy;

namespace {

Mat<Rational> mat(std::initializer_list<std::initializer_list<int>> rows) {
  Mat<Rational> m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (int v : r) m(i, j++) = Rational(v);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("rank and kernel, exact") {
  Mat<Rational> m = mat({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  REQUIRE(rank(m) == 2);
  Mat<Rational> k = kernel(m);
  REQUIRE(k.rows() == 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational s(0);
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * k(0, j);
    REQUIRE(s == 0);
  }
}

TEST_CASE("rank decisions agree between exact and float") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    Mat<Rational> m(4, 6);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 6; ++j) m(i, j) = Rational(entry(rng), 1);
    // force a dependent row
    for (std::size_t j = 0; j < 6; ++j) m(3, j) = m(0, j) + m(1, j);
    auto mf = convert_matrix<double>(m);
    REQUIRE(rank(m) == rank(mf));
    REQUIRE(kernel(m).rows() == kernel(mf).rows());
  }
}

TEST_CASE("solve and inverse") {
  Mat<Rational> a = mat({{2, 1}, {1, 3}});
  auto x = solve(a, Vec<Rational>{Rational(5), Rational(10)});
  REQUIRE(x.has_value());
  REQUIRE((*x)[0] == Rational(1));
  REQUIRE((*x)[1] == Rational(3));
  Mat<Rational> ai = inverse(a);
  REQUIRE(a * ai == Mat<Rational>::identity(2));

  Mat<Rational> sing = mat({{1, 2}, {2, 4}});
  REQUIRE_THROWS_AS(inverse(sing), NumericError);
  REQUIRE_FALSE(solve(sing, Vec<Rational>{Rational(1), Rational(3)}).has_value());
  REQUIRE(determinant(sing) == 0);
  REQUIRE(determinant(a) == Rational(5));
}

TEST_CASE("span builder and subspace operations") {
  SpanBuilder<Rational> sb(3);
  REQUIRE(sb.add({Rational(1), Rational(0), Rational(1)}));
  REQUIRE(sb.add({Rational(0), Rational(1), Rational(0)}));
  REQUIRE_FALSE(sb.add({Rational(2), Rational(3), Rational(2)}));
  REQUIRE(sb.size() == 2);
  REQUIRE(sb.contains({Rational(5), Rational(-1), Rational(5)}));
  REQUIRE_FALSE(sb.contains({Rational(0), Rational(0), Rational(1)}));

  Mat<Rational> a = mat({{1, 0, 0}, {0, 1, 0}});
  Mat<Rational> b = mat({{0, 1, 1}, {0, 0, 1}});
  Mat<Rational> inter = span_intersection(a, b);
  REQUIRE(inter.rows() == 1);
  REQUIRE(span_contains(a, inter.row(0)));
  REQUIRE(span_contains(b, inter.row(0)));
  REQUIRE(span_sum(a, b).rows() == 3);
  REQUIRE(same_span(a, mat({{1, 1, 0}, {1, -1, 0}})));
}

TEST_CASE("orthogonal complements with indefinite forms") {
  // Minkowski-like form in light-cone basis: g(p,q)=1, Euclidean middle
  Mat<Rational> g = mat({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  Mat<Rational> p = mat({{1, 0, 0}});
  Mat<Rational> perp = orthogonal_complement(p, g);
  REQUIRE(perp.rows() == 2);  // p itself is null, so p lies in its complement
  REQUIRE(span_contains(perp, {Rational(1), Rational(0), Rational(0)}));
  Mat<Rational> ker = form_kernel_on(g, perp);
  REQUIRE(ker.rows() == 1);  // the degenerate direction of g|p^perp is Rp
  REQUIRE(span_contains(p, ker.row(0)));
}

TEST_CASE("signature by congruence") {
  Mat<Rational> g = mat({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  auto sig = form_signature(g);
  REQUIRE(sig.positive == 2);
  REQUIRE(sig.negative == 1);
  REQUIRE(sig.zero == 0);
  Mat<Rational> deg = mat({{1, 0, 0}, {0, 0, 0}, {0, 0, -2}});
  auto s2 = form_signature(deg);
  REQUIRE(s2.positive == 1);
  REQUIRE(s2.negative == 1);
  REQUIRE(s2.zero == 1);
}

TEST_CASE("characteristic polynomial and roots") {
  Mat<Rational> a = mat({{2, 0, 0}, {0, 3, 1}, {0, 0, 3}});
  Vec<Rational> cp = char_poly(a);
  // det(xI - A) = (x-2)(x-3)^2 = x^3 - 8x^2 + 21x - 18
  REQUIRE(cp[3] == 1);
  REQUIRE(cp[2] == -8);
  REQUIRE(cp[1] == 21);
  REQUIRE(cp[0] == -18);
  auto roots = rational_roots(cp);
  REQUIRE(roots == std::vector<Rational>{Rational(2), Rational(3)});

  auto rr = real_roots({-18.0, 21.0, -8.0, 1.0});
  REQUIRE(rr.size() == 2);
  REQUIRE(rr[0] == Catch::Approx(2.0));
  REQUIRE(rr[1] == Catch::Approx(3.0));

  // rotation block has no real eigenvalues
  auto none = real_eigenvalue_candidates(
      convert_matrix<double>(mat({{0, -1}, {1, 0}})), NumericOptions{});
  REQUIRE(none.empty());
  auto half = rational_roots(char_poly(mat({{0, 1}, {-1, 0}})));
  REQUIRE(half.empty());
}

TEST_CASE("float pivoting keeps rank decisions stable") {
  Mat<double> m(3, 3);
  m(0, 0) = 1e-14;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 0) = 2.0;
  m(2, 1) = 2.0;
  m(2, 2) = 1e-15;
  REQUIRE(rank(m) == 2);
}
