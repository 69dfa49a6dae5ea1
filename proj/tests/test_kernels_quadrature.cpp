#include <cmath>
#include <numbers>
#include <random>

#include "bemloc/errors.hpp"
#include "bemloc/kernels.hpp"
#include "bemloc/quadrature.hpp"
#include "doctest.h"

using namespace bemloc;
using std::numbers::pi;

namespace {

// Independent oracle: ln|x - y| over the panel with the rule split at the
// foot of x when x lies on the panel.
double log_moment_oracle(const Segment& s, const Point& x) {
  const double len = s.length();
  const Point d = s.b - s.a;
  auto f = [&](double t) { return std::log((x - s.at(t)).norm()); };
  const double t0 = (x - s.a).dot(d) / (len * len);
  if (t0 > 0.0 && t0 < 1.0) return len * (adaptive_quad(f, 0.0, t0, 1e-14) + adaptive_quad(f, t0, 1.0, 1e-14));
  return len * adaptive_quad(f, 0.0, 1.0, 1e-14);
}

}  // namespace

TEST_CASE("green_log examples") {
  CHECK(green_log(Point(0, 0), Point(1, 0)) == doctest::Approx(0.0));
  CHECK(green_log(Point(0, 0), Point(std::exp(1.0), 0)) == doctest::Approx(-1.0 / (2 * pi)).epsilon(1e-14));
  CHECK(green_log(Point(1, 2), Point(1, 2.5)) == doctest::Approx(std::log(2.0) / (2 * pi)).epsilon(1e-14));
  CHECK_THROWS(green_log(Point(0.3, 0.3), Point(0.3, 0.3)));
}

TEST_CASE("panel_log_moment of the unit panel at its endpoint") {
  const Segment s{Point(0, 0), Point(1, 0)};
  CHECK(panel_log_moment(s, Point(0, 0)) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(panel_log_moment(s, Point(1, 0)) == doctest::Approx(-1.0).epsilon(1e-14));
  // midpoint: 2 * (1/2 ln 1/2 - 1/2)
  CHECK(panel_log_moment(s, Point(0.5, 0)) == doctest::Approx(std::log(0.5) - 1.0).epsilon(1e-14));
}

TEST_CASE("panel_log_moment against adaptive quadrature at random points") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Segment s{Point(u(rng), u(rng)), Point(u(rng), u(rng))};
    Point x(u(rng), u(rng));
    if (k % 5 == 0) x = s.at(0.5 * (1.0 + u(rng)));  // on the panel
    const double exact = panel_log_moment(s, x);
    worst = std::max(worst, std::abs(exact - log_moment_oracle(s, x)) / std::max(1.0, std::abs(exact)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("double layer kernel examples and Gauss identity") {
  CHECK(panel_dlp_kernel(Point(0, 0), Point(0, 1), Point(0, 1)) == doctest::Approx(1.0 / (2 * pi)));
  CHECK(panel_dlp_kernel(Point(0, 0), Point(0, 1), Point(1, 0)) == 0.0);
  CHECK_THROWS(panel_dlp_kernel(Point(1, 1), Point(0, 1), Point(1, 1)));

  // int_circle dn G(x, y) ds_y = -1 inside (outward normal), 0 outside
  auto circle = [](const Point& x) {
    return adaptive_quad(
        [&](double t) {
          const Point n(std::cos(t), std::sin(t));
          return panel_dlp_kernel(n, n, x);
        },
        0.0, 2 * pi, 1e-13);
  };
  CHECK(circle(Point(0.2, -0.3)) == doctest::Approx(-1.0).epsilon(1e-11));
  CHECK(std::abs(circle(Point(2.0, 0.5))) <= 1e-11);
}

TEST_CASE("Gauss rules integrate polynomials of degree 2n - 1") {
  for (int n : {1, 2, 3, 7, 16, 33, 64}) {
    const GaussRule& r = gauss_rule(n);
    REQUIRE(static_cast<int>(r.nodes.size()) == n);
    for (int p = 0; p <= 2 * n - 1 && p <= 40; ++p) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += r.weights[k] * std::pow(r.nodes[k], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
  CHECK_THROWS(gauss_rule(0));
  CHECK_THROWS(gauss_rule(kMaxGaussOrder + 1));
}

TEST_CASE("adaptive_quad handles endpoint singularities") {
  CHECK(adaptive_quad([](double t) { return std::log(t); }, 0.0, 1.0, 1e-13) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(adaptive_quad([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(adaptive_quad([](double t) { return std::pow(t, -0.875); }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(8.0).epsilon(1e-6));
  CHECK(adaptive_quad([](double t) { return std::cos(t); }, 0.0, pi / 2, 1e-14) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("adaptive_quad reports an exhausted budget") {
  CHECK_THROWS_AS(adaptive_quad([](double t) { return std::sin(1.0 / t) / t; }, 0.0, 1.0, 1e-15), NumericalError);
  CHECK_THROWS_AS(adaptive_quad([](double t) { return 1.0 / t; }, 0.0, 1.0, 1e-10), NumericalError);
}

TEST_CASE("distances between points and segments") {
  const Segment s{Point(0, 0), Point(1, 0)};
  CHECK(point_segment_distance(Point(0.5, 2), s) == doctest::Approx(2.0));
  CHECK(point_segment_distance(Point(-3, 4), s) == doctest::Approx(5.0));
  CHECK(segment_distance(s, Segment{Point(2, 0), Point(3, 1)}) == doctest::Approx(1.0));
  CHECK(segment_distance(s, Segment{Point(0.5, -1), Point(0.5, 1)}) == 0.0);
  CHECK(segment_distance(s, Segment{Point(1, 0), Point(1, 1)}) == 0.0);
}

TEST_CASE("integrate_segment resolves an r^alpha singularity at a marked point") {
  const Segment s{Point(0, 0), Point(0.5, 0)};
  SingularSet sing;
  sing.points = {Point(0, 0)};
  sing.min_length = resolution_length(0.5, -0.875);
  const double got = integrate_segment(s, [](const Point& x) { return std::pow(x.norm(), -0.875); }, sing);
  CHECK(got == doctest::Approx(8.0 * std::pow(0.5, 0.125)).epsilon(1e-9));
}

TEST_CASE("integrate_pair of the log kernel over touching panels matches the moment") {
  const Segment a{Point(0, 0), Point(0.2, 0)};
  const Segment b{Point(0.2, 0), Point(0.2, 0.3)};
  SingularSet sing;
  sing.min_length = 1e-15;
  auto one = [](const Point&) { return 1.0; };
  auto kernel = [](const Point& x, const Point& y) { return log_distance(x, y); };
  auto g = [](const Point&) { return std::array<double, 1>{1.0}; };
  const double pair = integrate_pair<1>(a, b, one, kernel, g, sing)[0];
  const double oracle =
      a.length() * adaptive_quad([&](double t) { return panel_log_moment(b, a.at(t)); }, 0.0, 1.0, 1e-14);
  CHECK(pair == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("documented scalar examples") {
  const Segment s{Point(0, 0), Point(1, 0)};
  const double far = adaptive_quad([](double t) { return std::log(10.0 - t); }, 0.0, 1.0, 1e-14);
  CHECK(std::abs(panel_log_moment(s, Point(10, 0)) - far) <= 1e-10);
  CHECK(panel_dlp_kernel(Point(0, 0), Point(0, 1), Point(1, 1)) == doctest::Approx(0.25 / pi).epsilon(1e-14));
  CHECK(panel_dlp_kernel(Point(0.2, 0), Point(0, 1), Point(0.7, 0)) == 0.0);
  CHECK(adaptive_quad([](double t) { return t * t * t; }, 0.0, 1.0, 1e-12) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(adaptive_quad([](double t) { return std::log(t); }, 0.0, 1.0, 1e-10) + 1.0) <= 1e-10);
  CHECK(adaptive_quad([](double) { return 1.0; }, 0.0, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-15));
}
