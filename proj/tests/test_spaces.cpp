#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "morreyheat/error.hpp"
#include "morreyheat/spaces.hpp"
#include "oracles.hpp"

using namespace morreyheat;

namespace {

const FineIndex kInf = FineIndex::infinity();

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::invalid_argument;
}

FunctionRep disk() { return FunctionRep::indicator({{{0.0, 0.0}, 1.0}}); }

// Compactly supported members; the first four have exact norm paths.
std::vector<FunctionRep> compact_corpus() {
  return {disk(),
          FunctionRep::indicator({{{0.0}, 1.0}}),
          FunctionRep::indicator({{{0.5, 0.0, 0.0}, 1.0}}),
          FunctionRep::spaced_balls(1, 2),
          FunctionRep::radial_power(2, 0.25, std::nullopt, 1.0),
          FunctionRep::gaussian({0.0, 0.0}, 0.5)};
}

}  // namespace

TEST_CASE("Lebesgue norm examples") {
  auto v = lebesgue_norm(disk(), 2);
  CHECK(v.value == doctest::Approx(std::sqrt(oracle::pi)).epsilon(1e-14));
  CHECK(v.method == NormMethod::closed_form);
  CHECK(v.error == 0.0);
  v = lebesgue_norm(FunctionRep::radial_power(3, 1.0, std::nullopt, 1.0), 2);
  CHECK(v.value == doctest::Approx(std::sqrt(4 * oracle::pi)).epsilon(1e-12));
  CHECK(lebesgue_norm(FunctionRep::zero(2), 3).value == 0.0);
  CHECK(lebesgue_norm(FunctionRep::gaussian({1.0, 1.0}, 1.0, 2.0), 2).value ==
        doctest::Approx(oracle::gaussian_lp(2.0, 1.0, 2.0, 2)).epsilon(1e-12));
  CHECK(code_of([] { lebesgue_norm(FunctionRep::radial_power(2, 1.0, std::nullopt, 1.0), 2); }) ==
        ErrorCode::non_integrable);
}

TEST_CASE("weak Lebesgue norm examples") {
  oracle::Gen g(4);
  for (int i = 0; i < 10; ++i) {
    const int n = g.integer(1, 4);
    const double p = g.uniform(1.1, 6.0);
    const auto v = weak_lebesgue_norm(FunctionRep::radial_power(n, n / p), p);
    CHECK(v.value == doctest::Approx(std::pow(oracle::unit_ball_volume(n), 1 / p)).epsilon(1e-12));
  }
  const auto two = FunctionRep::indicator({{{0.0, 0.0}, 1.0}, {{5.0, 0.0}, 2.0}});
  CHECK(weak_lebesgue_norm(two, 3).value == doctest::Approx(std::pow(5 * oracle::pi, 1 / 3.0)).epsilon(1e-14));
  CHECK(weak_lebesgue_norm(FunctionRep::spaced_balls(1, 4), 2).value == doctest::Approx(std::sqrt(18.0)).epsilon(1e-14));
  // exp(-r^2/4w) in 1D: sup_t t (2 sqrt(4w log(1/t)))^{1/p}, maximised numerically by hand
  double best = 0.0;
  for (int i = 1; i < 200000; ++i) {
    const double t = i / 200000.0;
    best = std::max(best, t * std::pow(2 * std::sqrt(4 * std::log(1 / t)), 0.5));
  }
  CHECK(weak_lebesgue_norm(FunctionRep::gaussian({0.0}, 1.0), 2).value == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("Lorentz norm examples") {
  CHECK(lorentz_norm(FunctionRep::indicator({{{0.0}, 1.0}}), 2, FineIndex(2)).value == doctest::Approx(1.0).epsilon(1e-14));
  // |E|^{1/p} r^{-1/r} for general r
  const auto two = FunctionRep::indicator({{{0.0, 0.0}, 1.0}, {{5.0, 0.0}, 2.0}});
  CHECK(lorentz_norm(two, 3, FineIndex(1.5)).value ==
        doctest::Approx(std::pow(5 * oracle::pi, 1 / 3.0) * std::pow(1.5, -1 / 1.5)).epsilon(1e-12));
  CHECK(code_of([] { lorentz_norm(FunctionRep::radial_power(2, 1.0), 2, FineIndex(2)); }) == ErrorCode::divergent);
  // grid of two values: lambda = 2 h below 1, h between 1 and 3
  GridSample gs;
  gs.origin = {0.0};
  gs.spacing = 0.5;
  gs.extent = {2};
  gs.values = {1.0, 3.0};
  const double r = 2, p = 2;
  const double exact = std::pow(std::pow(1.0, r) / r * 1.0 + (std::pow(3.0, r) - 1.0) / r * std::pow(0.5, r / p), 1 / r);
  CHECK(lorentz_norm(FunctionRep::grid(gs), p, FineIndex(r)).value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("local Morrey-type norm examples") {
  auto v = local_morrey_type_norm(disk(), 2, 1, FineIndex(1));
  CHECK(v.value == doctest::Approx(2 * oracle::pi).epsilon(1e-12));
  for (double q : {1.0, 1.5, 2.0}) {
    v = local_morrey_type_norm(disk(), 2.5, q, kInf);
    CHECK(v.value == doctest::Approx(std::pow(oracle::pi, 1 / q)).epsilon(1e-9));
  }
  // |x|^{-1/2} on B(0, 1), n = 2, p = 2, q = r = 1: C t^{1/2} below 1 and C t^{-1} above, C = 2 pi / 1.5
  v = local_morrey_type_norm(FunctionRep::radial_power(2, 0.5, std::nullopt, 1.0), 2, 1, FineIndex(1));
  CHECK(v.value == doctest::Approx(4 * oracle::pi).epsilon(1e-8));
  // disk with q close to p: pi^{1/q} t^{2/p} below 1, pi^{1/q} t^{2/p - 2/q} above
  const double p = 2.5, q = 2.4;
  v = local_morrey_type_norm(disk(), p, q, FineIndex(1));
  CHECK(v.value == doctest::Approx(std::pow(oracle::pi, 1 / q) * (p / 2 + 1 / (2 / q - 2 / p))).epsilon(1e-12));
  // the same profile through quadrature (a Gaussian has no exact Morrey path)
  const auto g = FunctionRep::gaussian({0.0, 0.0}, 0.5);
  const double gq = local_morrey_type_norm(g, p, q, FineIndex(1)).value;
  const double gmass = std::pow(oracle::pi * 2.0 / q * 1.0, 1 / q);  // (int g^q)^{1/q}, 4 pi w / q with w = 0.5
  const double gtail = gmass * std::pow(40.0, 2 / p - 2 / q) / (2 / q - 2 / p);
  // t = u^5 removes the t^{-1/5} endpoint behaviour
  const double ghead = oracle::simpson(
      [&](double u) {
        const double t = std::pow(u, 5);
        const double inner = 4 * oracle::pi * 0.5 / q * -std::expm1(-q * t * t / 2.0);
        return u == 0.0 ? 0.0 : std::pow(t, 2 / p - 2 / q - 1) * std::pow(inner, 1 / q) * 5 * std::pow(u, 4);
      },
      0.0, std::pow(40.0, 0.2), 20000);
  CHECK(gq == doctest::Approx(ghead + gtail).epsilon(1e-6));
  // spaced balls: bounded uniformly in J
  double previous = 0.0;
  for (int J = 0; J <= 6; ++J) {
    const double m = local_morrey_type_norm(FunctionRep::spaced_balls(1, J), 2, 1, FineIndex(1)).value;
    CHECK(m > previous);
    CHECK(m < 12.0);
    previous = m;
  }
}

TEST_CASE("Morrey norm examples") {
  const auto v = morrey_norm(disk(), 4, 2);
  CHECK(v.value == doctest::Approx(std::sqrt(oracle::pi)).epsilon(1e-9));
  REQUIRE(v.witness);
  CHECK(norm(v.witness->center) == doctest::Approx(0.0));
  CHECK(v.witness->scale == doctest::Approx(1.0).epsilon(1e-6));
  // |x|^{-n/p}: t^{n/p-n/q} (|S| t^{n - nq/p} / (n - nq/p))^{1/q} is constant in t
  for (int n = 1; n <= 3; ++n) {
    const double p = 3, q = 2;
    const double expected = std::pow(oracle::sphere_area(n) / (n - n * q / p), 1 / q);
    CHECK(morrey_norm(FunctionRep::radial_power(n, n / p), p, q).value == doctest::Approx(expected).epsilon(1e-9));
  }
  oracle::Gen g(8);
  for (int i = 0; i < 5; ++i) {
    const Point shift{g.uniform(-50, 50), g.uniform(-50, 50)};
    CHECK(morrey_norm(disk().translated(shift), 4, 2).value == doctest::Approx(v.value).epsilon(1e-12));
  }
}

TEST_CASE("global Morrey-type norm examples") {
  const auto v = global_morrey_type_norm(disk(), 2, 1, FineIndex(1));
  CHECK(v.value == doctest::Approx(2 * oracle::pi).epsilon(1e-10));
  REQUIRE(v.witness);
  CHECK(norm(v.witness->center) == doctest::Approx(0.0));
  // the two-ball union prefers a centre near the larger ball
  const auto two = FunctionRep::indicator({{{0.0, 0.0}, 1.0}, {{5.0, 0.0}, 2.0}});
  CHECK(global_morrey_type_norm(two, 2, 1, FineIndex(1)).value >= local_morrey_type_norm(two, 2, 1, FineIndex(1)).value);
  // the origin is also a ball centre: {0, (5, 0), (2.5, 0)}
  const auto centers = candidate_centers(two);
  CHECK(centers.size() == 3);
  auto has = [&](Point c) { return std::find(centers.begin(), centers.end(), c) != centers.end(); };
  CHECK(has({0.0, 0.0}));
  CHECK(has({5.0, 0.0}));
  CHECK(has({2.5, 0.0}));
}

TEST_CASE("property: homogeneity N(c f) = |c| N(f)") {
  oracle::Gen g(10);
  const std::vector<FunctionRep> exact{disk(), FunctionRep::spaced_balls(1, 3), FunctionRep::radial_power(3, 1.0, std::nullopt, 2.0)};
  const std::vector<FunctionRep> quad{FunctionRep::gaussian({0.3, 0.0}, 0.5), FunctionRep::weighted(0.5, disk())};
  auto check = [&](const FunctionRep& f, double tol) {
    const double c = g.uniform(-4, 4);
    const auto cf = f.scaled(c);
    const double a = std::abs(c);
    CHECK(lebesgue_norm(cf, 2).value == doctest::Approx(a * lebesgue_norm(f, 2).value).epsilon(tol));
    CHECK(weak_lebesgue_norm(cf, 2).value == doctest::Approx(a * weak_lebesgue_norm(f, 2).value).epsilon(tol));
    CHECK(lorentz_norm(cf, 2, FineIndex(1.5)).value == doctest::Approx(a * lorentz_norm(f, 2, FineIndex(1.5)).value).epsilon(tol));
    CHECK(local_morrey_type_norm(cf, 2, 1, FineIndex(2)).value ==
          doctest::Approx(a * local_morrey_type_norm(f, 2, 1, FineIndex(2)).value).epsilon(tol));
    CHECK(morrey_norm(cf, 3, 1.5).value == doctest::Approx(a * morrey_norm(f, 3, 1.5).value).epsilon(tol));
  };
  for (const auto& f : exact) check(f, 1e-10);
  for (const auto& f : quad) check(f, 1e-5);
}

TEST_CASE("property: Chebyshev weak <= strong") {
  oracle::Gen g(12);
  for (const auto& f : compact_corpus()) {
    const double p = g.uniform(1.2, 4.0);
    CHECK(weak_lebesgue_norm(f, p).value <= lebesgue_norm(f, p).value * (1 + 1e-12));
  }
}

TEST_CASE("property: Hoelder on balls, q2 <= q1") {
  // (int_B |f|^{q2})^{1/q2} <= |B|^{1/q2 - 1/q1} (int_B |f|^{q1})^{1/q1} for every t, so
  // LM_{q2,r} <= v_n^{1/q2 - 1/q1} LM_{q1,r}
  oracle::Gen g(13);
  for (const auto& f : compact_corpus()) {
    const int n = f.dim();
    const double p = g.uniform(2.5, 4.0);
    const double q1 = g.uniform(1.5, 2.4);
    const double q2 = g.uniform(1.0, q1);
    for (FineIndex r : {FineIndex(1.0), FineIndex(3.0), kInf}) {
      const double lhs = local_morrey_type_norm(f, p, q2, r).value;
      const double rhs = std::pow(oracle::unit_ball_volume(n), 1 / q2 - 1 / q1) * local_morrey_type_norm(f, p, q1, r).value;
      CHECK(lhs <= rhs * (1 + 1e-6));
    }
  }
}

TEST_CASE("property: fine index embedding, r1 <= r2") {
  // phi(t) = t^{n/p - n/q} F(t)^{1/q} with F increasing, so on [T, 2T]
  // phi >= 2^{n/p - n/q} phi(T); hence sup phi <= C ||phi||_{L^{r1}(dt/t)} with
  // C = 2^{n/q - n/p} (log 2)^{-1/r1}, and ||phi||_{r2} <= C^{1 - r1/r2} ||phi||_{r1}.
  oracle::Gen g(14);
  for (const auto& f : compact_corpus()) {
    const int n = f.dim();
    const double p = g.uniform(2.0, 4.0), q = g.uniform(1.0, 1.8);
    const double r1 = g.uniform(1.0, 3.0), r2 = r1 + g.uniform(0.5, 4.0);
    const double C = std::pow(2.0, n / q - n / p) * std::pow(std::log(2.0), -1 / r1);
    const double base = local_morrey_type_norm(f, p, q, FineIndex(r1)).value;
    CHECK(local_morrey_type_norm(f, p, q, kInf).value <= C * base * (1 + 1e-6));
    CHECK(local_morrey_type_norm(f, p, q, FineIndex(r2)).value <= std::pow(C, 1 - r1 / r2) * base * (1 + 1e-6));
  }
}

TEST_CASE("property: Morrey dilation law") {
  oracle::Gen g(15);
  for (int i = 0; i < 12; ++i) {
    const int n = g.integer(1, 3);
    Point c0(n, 0.0), c1(n, 0.0);
    c1[0] = g.uniform(3, 6);
    const auto f = FunctionRep::indicator({{c0, 1.0}, {c1, g.uniform(0.3, 1.5)}});
    const double lambda = g.integer(1, 7) / static_cast<double>(g.integer(1, 7));
    const double p = g.uniform(2, 5), q = g.uniform(1, 2);
    CHECK(morrey_norm(f.dilated(lambda), p, q).value ==
          doctest::Approx(std::pow(lambda, -n / p) * morrey_norm(f, p, q).value).epsilon(1e-10));
  }
  const auto gauss = FunctionRep::gaussian({0.0, 0.0}, 1.0);
  CHECK(morrey_norm(gauss.dilated(1.7), 3, 1.5).value ==
        doctest::Approx(std::pow(1.7, -2 / 3.0) * morrey_norm(gauss, 3, 1.5).value).epsilon(1e-6));
}

TEST_CASE("property: r = inf coincidences are exact") {
  oracle::Gen g(16);
  for (const auto& f : compact_corpus()) {
    const double p = g.uniform(2.0, 4.0), q = g.uniform(1.0, 2.0);
    CHECK(lorentz_norm(f, p, kInf).value == weak_lebesgue_norm(f, p).value);
    CHECK(global_morrey_type_norm(f, p, q, kInf).value == morrey_norm(f, p, q).value);
  }
}

TEST_CASE("level-measure engines") {
  // lambda(t) = v_2 t^{-2}: weak L^2 norm sqrt(pi)
  LevelMeasure lm{[](double t) { return oracle::pi / (t * t); }};
  CHECK(weak_norm_from_levels(lm, 2).value == doctest::Approx(std::sqrt(oracle::pi)).epsilon(1e-8));
  // indicator of measure 3 as samples
  const auto sampled = sampled_level_measure({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
  CHECK(weak_norm_from_levels(sampled, 2).value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
}
