#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "holonomy/chart.hpp"

using namespace holonomy;

namespace {

const char* kPpWave = R"(
# pp-wave with H = x1^2 - x2^2
[coords]
names = v x1 x2 u
signature = lorentzian

[metric]
H = "x1^2 - x2^2"

[point]
x1 = 1
)";

}  // namespace

TEST_CASE("walker metric file round trip") {
  std::istringstream in(kPpWave);
  MetricChart chart = load_metric_file(in);
  REQUIRE(chart.dim() == 4);
  REQUIRE(chart.signature() == Signature::lorentzian);
  REQUIRE(chart.walker().has_value());
  const auto& w = *chart.walker();
  REQUIRE(w.n == 2);
  REQUIRE(w.h(0, 0) == Expr::one());
  REQUIRE(w.h(0, 1).is_zero());
  REQUIRE(w.A[0].is_zero());
  REQUIRE(w.H == parse_expr("x1^2 - x2^2", chart.coords()));
  REQUIRE(chart.base_point().at("x1") == Rational(1));
  REQUIRE(chart.base_point().at("v") == Rational(0));

  // assembled metric has the Walker shape
  REQUIRE(chart.metric()(0, 3) == Expr::one());
  REQUIRE(chart.metric()(0, 0).is_zero());
  REQUIRE(chart.metric()(3, 3) == w.H);

  std::ostringstream out;
  save_metric_file(chart, out);
  std::istringstream back(out.str());
  MetricChart again = load_metric_file(back);
  REQUIRE(again.metric() == chart.metric());
  REQUIRE(again.walker().has_value());
}

TEST_CASE("full-entry metric file and walker detection") {
  const char* text = R"(
[coords]
names = v x u
signature = lorentzian
[metric]
g.1.3 = 1
g.2.2 = 1
g.3.3 = "v^2"
)";
  std::istringstream in(text);
  MetricChart chart = load_metric_file(in);
  REQUIRE(chart.walker().has_value());  // detected from the full entries
  REQUIRE(chart.walker()->H == parse_expr("v^2", chart.coords()));

  // v-dependent h must not be detected as Walker
  const char* vdep = R"(
[coords]
names = v x u
signature = lorentzian
[metric]
g.1.3 = 1
g.2.2 = "1 + v^2"
g.3.3 = 0
)";
  std::istringstream in2(vdep);
  REQUIRE_FALSE(load_metric_file(in2).walker().has_value());
}

TEST_CASE("metric file errors") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return load_metric_file(in);
  };
  REQUIRE_THROWS_AS(parse("[metric]\nH = 1\n"), ChartError);  // no coords
  REQUIRE_THROWS_AS(parse("[coords]\nnames = x y\nsignature = riemannian\n"
                          "[metric]\nH = 1\n"),
                    ChartError);  // Walker blocks in a riemannian chart
  REQUIRE_THROWS_AS(parse("[coords]\nnames = v x u\nsignature = lorentzian\n"
                          "[metric]\nh.1.1 = \"v\"\n"),
                    ChartError);  // h depends on v
  REQUIRE_THROWS_AS(parse("[coords]\nnames = v x u\nsignature = lorentzian\n"
                          "[metric]\nH = \"y\"\n"),
                    ChartError);  // unknown coordinate in expression
  REQUIRE_THROWS_AS(parse("[coords]\nnames = v x u\nsignature = lorentzian\n"
                          "[metric]\nh.1.1 = 1\ng.1.1 = 1\n"),
                    ChartError);  // mixed forms
  REQUIRE_THROWS_AS(parse("[coords]\nnames = v x1 x2 u\nsignature = lorentzian\n"
                          "[metric]\nH = 0\n[adapted]\ngroup.1 = 1\n"),
                    ChartError);  // adapted misses index 2
}

TEST_CASE("signature validation at points") {
  std::istringstream in(kPpWave);
  MetricChart chart = load_metric_file(in);
  Point p = chart.base_point();
  require_regular<Rational>(chart, p);

  // declaring it riemannian must fail the signature check
  Mat<Expr> g = chart.metric();
  REQUIRE_THROWS_AS(
      [&] {
        MetricChart wrong = MetricChart::from_metric(
            chart.coords(), Signature::riemannian, g);
        require_regular<Rational>(wrong, p);
      }(),
      ChartError);

  MetricChart degenerate = MetricChart::from_metric(
      {"x", "y"}, Signature::riemannian,
      [] {
        Mat<Expr> m(2, 2, Expr::zero());
        m(0, 0) = Expr::variable("x");
        m(1, 1) = Expr::one();
        return m;
      }());
  Point origin{{"x", Rational(0)}, {"y", Rational(0)}};
  REQUIRE_THROWS_AS(require_regular<Rational>(degenerate, origin), ChartError);
}

TEST_CASE("walker frame has the expected Gram matrix") {
  std::istringstream in(kPpWave);
  MetricChart chart = load_metric_file(in);
  Point p{{"v", Rational(2)}, {"x1", Rational(1)}, {"x2", Rational(-1)},
          {"u", Rational(3)}};
  Mat<Rational> f = chart.walker_frame<Rational>(p);
  Mat<Rational> g = chart.metric_at<Rational>(p);
  Mat<Rational> gram = f.transpose() * g * f;
  Mat<Rational> expected(4, 4, Rational(0));
  expected(0, 3) = 1;
  expected(3, 0) = 1;
  expected(1, 1) = 1;
  expected(2, 2) = 1;
  REQUIRE(gram == expected);
}

TEST_CASE("point spec parsing") {
  std::istringstream in(kPpWave);
  MetricChart chart = load_metric_file(in);
  Point p = parse_point_spec("v=1/2, x2=-3", chart);
  REQUIRE(p.at("v") == Rational(1, 2));
  REQUIRE(p.at("x2") == Rational(-3));
  REQUIRE(p.at("u") == Rational(0));
  REQUIRE_THROWS_AS(parse_point_spec("zz=1", chart), ChartError);
}
