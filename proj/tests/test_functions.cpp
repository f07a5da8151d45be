#include <doctest.h>

#include <cmath>

#include "morreyheat/error.hpp"
#include "morreyheat/functions.hpp"
#include "oracles.hpp"

using namespace morreyheat;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::invalid_argument;
}

double at(const FunctionRep& f, Point x) { return evaluate(f, x); }

FunctionRep disk() { return FunctionRep::indicator({{{0.0, 0.0}, 1.0}}); }

// 1D integral of exp(-(x - c)^2 / 4w) over [-R, R].
double gaussian_interval(double c, double w, double R) {
  const double s = 2 * std::sqrt(w);
  return std::sqrt(oracle::pi * w) * (std::erf((R - c) / s) + std::erf((R + c) / s));
}

std::vector<FunctionRep> corpus() {
  GridSample g;
  g.origin = {-1.0, -1.0};
  g.spacing = 0.5;
  g.extent = {4, 4};
  g.values = {0, 1, 1, 0, 1, 3, 2, 1, 1, 2, 3, 1, 0, 1, 1, 0};
  return {disk(),
          FunctionRep::indicator({{{0.0, 0.0}, 1.0}, {{3.0, 0.0}, 0.5}}, 2.0),
          FunctionRep::spaced_balls(1, 3),
          FunctionRep::radial_power(2, 1.0),
          FunctionRep::radial_power(3, 1.5, 0.5, 2.0),
          FunctionRep::gaussian({0.0, 0.0}, 1.0),
          FunctionRep::gaussian({1.0}, 0.5, 3.0),
          FunctionRep::grid(g),
          FunctionRep::weighted(0.5, disk())};
}

}  // namespace

TEST_CASE("evaluate examples") {
  CHECK(at(FunctionRep::radial_power(2, 1.0), {2.0, 0.0}) == doctest::Approx(0.5));
  CHECK(at(FunctionRep::spaced_balls(1, 1), {10.0}) == 1.0);
  CHECK(at(FunctionRep::spaced_balls(2, 1), {-10.5, 0.0}) == 1.0);
  CHECK(at(FunctionRep::spaced_balls(1, 1), {5.0}) == 0.0);
  CHECK(at(FunctionRep::gaussian({0.0, 0.0}, 1.0), {0.0, 0.0}) == 1.0);
  CHECK(at(FunctionRep::gaussian({0.0}, 1.0), {2.0}) == doctest::Approx(std::exp(-1.0)));
  CHECK(at(FunctionRep::weighted(1.0, disk()), {0.5, 0.0}) == doctest::Approx(2.0));
  CHECK(at(disk().scaled(-3.0), {0.1, 0.1}) == -3.0);
  CHECK(code_of([] { evaluate(FunctionRep::radial_power(2, 1.0), Point{0.0, 0.0}); }) == ErrorCode::singular_point);
  CHECK(code_of([] { evaluate(disk(), Point{0.0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("construction checks") {
  CHECK(code_of([] { FunctionRep::indicator({{{0.0}, 1.0}, {{1.5}, 1.0}}); }) == ErrorCode::overlap_detected);
  CHECK(code_of([] { FunctionRep::gaussian({0.0}, -1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { FunctionRep::radial_power(2, 1.0).translated(Point{1.0, 0.0}); }) == ErrorCode::invalid_argument);
  GridSample bad;
  bad.origin = {0.0};
  bad.spacing = 1.0;
  bad.extent = {2};
  bad.values = {1.0, NAN};
  CHECK(code_of([&] { FunctionRep::grid(bad); }) == ErrorCode::invalid_argument);
  bad.values = {1.0, 2.0};
  bad.spacing = 0.0;
  CHECK(code_of([&] { FunctionRep::grid(bad); }) == ErrorCode::invalid_argument);
}

TEST_CASE("ball_integral examples") {
  auto v = ball_integral(disk(), Point{0.0, 0.0}, 1.0, 1.0);
  CHECK(v.value == doctest::Approx(oracle::pi).epsilon(1e-14));
  CHECK(v.exact);
  for (double R : {0.5, 1.0, 3.0}) {
    v = ball_integral(FunctionRep::radial_power(3, 1.0), Point{0.0, 0.0, 0.0}, R, 1.0);
    CHECK(v.value == doctest::Approx(2 * oracle::pi * R * R).epsilon(1e-12));
  }
  CHECK(ball_integral(disk(), Point{5.0, 0.0}, 2.0, 3.0).value == 0.0);
  CHECK(code_of([] { ball_integral(FunctionRep::radial_power(2, 1.0), Point{0.0, 0.0}, 1.0, 2.0); }) ==
        ErrorCode::non_integrable);
}

TEST_CASE("ball_integral on quadrature paths") {
  // off-centre Gaussian in 1D
  const auto g = FunctionRep::gaussian({0.7}, 0.3);
  auto v = ball_integral(g, Point{0.0}, 1.2, 1.0);
  CHECK(v.value == doctest::Approx(gaussian_interval(0.7, 0.3, 1.2)).epsilon(1e-9));
  // |g|^2 is a Gaussian of width w/2
  v = ball_integral(g, Point{0.0}, 1.2, 2.0);
  CHECK(v.value == doctest::Approx(gaussian_interval(0.7, 0.15, 1.2)).epsilon(1e-9));
  // weighted disk in polar coordinates: 2 pi int_0^1 r^{1 - gamma} dr
  v = ball_integral(FunctionRep::weighted(0.5, disk()), Point{0.0, 0.0}, 1.0, 1.0);
  CHECK(v.value == doctest::Approx(2 * oracle::pi / 1.5).epsilon(1e-9));
  // a ball partially covering an off-centre disk: lens area
  v = ball_integral(disk(), Point{1.0, 0.0}, 1.0, 1.0, {.force_quadrature = true});
  const double lens = 2 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  CHECK(v.value == doctest::Approx(lens).epsilon(1e-6));
}

TEST_CASE("whole-space integrals") {
  CHECK(whole_space_integral(FunctionRep::gaussian({1.0, 2.0}, 0.5), 1.0).value ==
        doctest::Approx(4 * oracle::pi * 0.5).epsilon(1e-12));
  CHECK(whole_space_integral(FunctionRep::spaced_balls(1, 4), 2.0).value == doctest::Approx(18.0));
  GridSample g;
  g.origin = {0.0, 0.0};
  g.spacing = 0.5;
  g.extent = {2, 2};
  g.values = {1, 2, 3, -4};
  CHECK(whole_space_integral(FunctionRep::grid(g), 1.0).value == doctest::Approx(10 * 0.25));
  CHECK(whole_space_integral(FunctionRep::grid(g), 2.0).value == doctest::Approx(30 * 0.25));
}

TEST_CASE("distribution examples") {
  auto d = distribution(FunctionRep::indicator({{{0.0}, 1.0}}), 0.5);
  CHECK(d.measure == doctest::Approx(2.0));
  CHECK(d.exact);
  for (double t : {0.3, 1.0, 4.0}) {
    d = distribution(FunctionRep::radial_power(2, 1.0), t);
    CHECK(d.measure == doctest::Approx(oracle::pi / (t * t)).epsilon(1e-14));
  }
  d = distribution(FunctionRep::spaced_balls(1, 4), 0.5);
  CHECK(d.measure == doctest::Approx(18.0).epsilon(1e-15));
  CHECK(d.exact);
  CHECK(distribution(disk(), 1.0).measure == 0.0);
  // Gaussian super-level set {exp(-r^2/4w) > t} is a ball of radius sqrt(4w log(1/t))
  d = distribution(FunctionRep::gaussian({0.0, 0.0, 0.0}, 2.0), 0.25);
  CHECK(d.measure == doctest::Approx(oracle::unit_ball_volume(3) * std::pow(8 * std::log(4.0), 1.5)).epsilon(1e-12));
}

TEST_CASE("property: distribution is non-increasing in the level") {
  oracle::Gen g(1);
  for (const auto& f : corpus()) {
    std::vector<double> levels;
    for (int i = 0; i < 40; ++i) levels.push_back(std::exp(g.uniform(-5, 2)));
    std::sort(levels.begin(), levels.end());
    const auto prof = distribution_profile(f, levels);
    for (std::size_t i = 1; i < levels.size(); ++i) CHECK(prof.measures[i] <= prof.measures[i - 1]);
  }
}

TEST_CASE("property: ball_integral is monotone in the radius") {
  oracle::Gen g(2);
  for (const auto& f : corpus()) {
    for (int trial = 0; trial < 6; ++trial) {
      Point c(f.dim());
      for (double& x : c) x = g.uniform(-1.5, 1.5);
      // radial powers and weights are anchored at 0; use the origin so the integrals stay finite
      if (origin_singularity(f) > 0) std::fill(c.begin(), c.end(), 0.0);
      const double r1 = g.uniform(0.1, 2.0);
      const double r2 = r1 * g.uniform(1.01, 2.0);
      const double q = g.uniform(1.0, 1.2);
      CHECK(ball_integral(f, c, r1, q).value <= ball_integral(f, c, r2, q).value * (1 + 1e-9));
    }
  }
}

TEST_CASE("property: indicator ball integrals are additive, q-independent and translation covariant") {
  oracle::Gen g(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(1, 3);
    std::vector<Ball> balls;
    for (int b = 0; b < 3; ++b) {
      Point c(n, 0.0);
      c[0] = 4.0 * b + g.uniform(-0.5, 0.5);
      for (int d = 1; d < n; ++d) c[d] = g.uniform(-1, 1);
      balls.push_back({c, g.uniform(0.3, 1.4)});
    }
    const auto f = FunctionRep::indicator(balls);
    Point center(n);
    for (double& x : center) x = g.uniform(-1, 9);
    const double R = g.uniform(0.5, 6.0);
    double parts = 0.0;
    for (const Ball& b : balls) parts += ball_integral(FunctionRep::indicator({b}), center, R, 1.0).value;
    const double whole = ball_integral(f, center, R, 1.0).value;
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
    CHECK(ball_integral(f, center, R, g.uniform(1.0, 5.0)).value == doctest::Approx(whole).epsilon(1e-12));
    Point v(n);
    for (double& x : v) x = g.uniform(-20, 20);
    const auto moved = f.translated(v);
    CHECK(ball_integral(moved, translated(center, v), R, 1.0).value == doctest::Approx(whole).epsilon(1e-10));
  }
}

TEST_CASE("dilation rescales integrals by lambda^{-n}") {
  const auto f = FunctionRep::indicator({{{0.0, 0.0}, 1.0}, {{3.0, 0.0}, 0.5}});
  const auto fl = f.dilated(2.0);
  CHECK(whole_space_integral(fl, 1.0).value == doctest::Approx(whole_space_integral(f, 1.0).value / 4));
  CHECK(evaluate(fl, Point{1.5, 0.0}) == 1.0);
}

TEST_CASE("JSON round trip for every variant") {
  for (const auto& f : corpus()) {
    const auto j = to_json(f);
    const auto back = function_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.dim() == f.dim());
  }
  const auto j = nlohmann::json::parse(R"({"variant":"IndicatorBallUnion","balls":[[[0,0],1]]})");
  CHECK(function_from_json(j).dim() == 2);
  const auto rp = nlohmann::json::parse(R"({"variant":"RadialPower","a":1})");
  CHECK(code_of([&] { function_from_json(rp); }) == ErrorCode::invalid_argument);
  CHECK(function_from_json(rp, 3).dim() == 3);
  CHECK(code_of([] { function_from_json(nlohmann::json::parse(R"({"variant":"Nope"})"), 1); }) ==
        ErrorCode::invalid_argument);
  CHECK(code_of([] { function_from_json(nlohmann::json::parse(R"({"variant":"SpacedBallsG","J":"x"})"), 1); }) ==
        ErrorCode::invalid_argument);
}
