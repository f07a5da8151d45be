#include <doctest.h>

#include <cmath>
#include <thread>

#include "morreyheat/error.hpp"
#include "morreyheat/heat.hpp"
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

HeatOptions grid_backend() {
  HeatOptions o;
  o.backend = HeatBackend::grid_convolution;
  return o;
}

double mesh_sum(const FieldMesh& m) {
  double s = 0.0;
  for (double v : m.values) s += v;
  return s * std::pow(m.spacing, static_cast<double>(m.extent.size()));
}

Point mesh_point(const FieldMesh& m, std::size_t flat) {
  Point x(m.extent.size());
  for (std::size_t d = m.extent.size(); d-- > 0;) {
    x[d] = m.origin[d] + static_cast<double>(flat % m.extent[d]) * m.spacing;
    flat /= m.extent[d];
  }
  return x;
}

double laplacian_fd(const HeatField& u, Point x, double h) {
  double s = 0.0;
  const double c = u(x);
  for (std::size_t d = 0; d < x.size(); ++d) {
    Point a = x, b = x;
    a[d] += h;
    b[d] -= h;
    s += u(a) - 2 * c + u(b);
  }
  return s / (h * h);
}

}  // namespace

TEST_CASE("heat kernel examples") {
  CHECK(heat_kernel(1 / (4 * oracle::pi), Point{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(heat_kernel(0.25, Point{1.0}) == doctest::Approx(std::exp(-1.0) / std::sqrt(oracle::pi)).epsilon(1e-15));
  CHECK(heat_kernel(0.7, 1.3, 3) == doctest::Approx(oracle::heat_kernel(0.7, 1.3, 3)).epsilon(1e-15));
  for (int n = 1; n <= 3; ++n)
    for (double t : {0.1, 1.0, 5.0}) {
      const double mass = oracle::simpson([&](double r) { return oracle::sphere_area(n) * std::pow(r, n - 1) * heat_kernel(t, r, n); },
                                          0.0, 40 * std::sqrt(t));
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("validation") {
  const auto disk = FunctionRep::indicator({{{0.0, 0.0}, 1.0}});
  CHECK(code_of([&] { apply_weighted_heat(disk, 0.0, 0.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { apply_weighted_heat(disk, -1.0, 1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { apply_weighted_heat(disk, 0.0, 1.0, 2); }) == ErrorCode::unsupported_order);
  CHECK(code_of([&] { apply_weighted_heat(disk, 0.0, 1.0, 0, std::vector<int>{2, 1}); }) == ErrorCode::unsupported_order);
  CHECK(code_of([&] { apply_weighted_heat(disk, 0.0, 1.0, 0, std::vector<int>{1}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { apply_weighted_heat(disk, 2.0, 1.0); }) == ErrorCode::non_integrable_weight);
  CHECK(code_of([] { apply_weighted_heat(FunctionRep::radial_power(3, 2.0), 1.0, 1.0); }) == ErrorCode::non_integrable_weight);
  HeatOptions closed;
  closed.backend = HeatBackend::closed_form;
  CHECK(code_of([&] { apply_weighted_heat(disk, 0.0, 1.0, 0, 0, closed); }) == ErrorCode::invalid_argument);
  const auto field = apply_weighted_heat(FunctionRep::gaussian({0.0}, 1.0), 0.0, 1.0);
  CHECK(code_of([&] { field(Point{0.0, 0.0}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { field.propagate(1.0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { heat_norm(field, HeatTarget::lebesgue(1.0)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("backend selection") {
  CHECK(apply_weighted_heat(FunctionRep::gaussian({0.0, 0.0}, 1.0), 0.0, 1.0).backend() == HeatBackend::closed_form);
  CHECK(apply_weighted_heat(FunctionRep::radial_power(3, 1.0), 1.0, 1.0).backend() == HeatBackend::radial_quadrature);
  CHECK(apply_weighted_heat(FunctionRep::indicator({{{0.0, 0.0}, 1.0}}), 0.0, 1.0).backend() == HeatBackend::grid_convolution);
  CHECK(std::string(to_string(HeatBackend::grid_convolution)) == "grid-convolution");
}

TEST_CASE("Gaussian closed form") {
  const auto g = FunctionRep::gaussian({0.0, 0.0}, 1.0);
  CHECK(apply_weighted_heat(g, 0.0, 1.0)(Point{0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  const auto off = FunctionRep::gaussian({1.0, -0.5, 0.25}, 0.7, 2.0);
  const auto u = apply_weighted_heat(off, 0.0, 1.3);
  const Point x{0.2, 0.4, -1.0};
  CHECK(u(x) == doctest::Approx(oracle::gaussian_heat(2.0, 0.7, 1.3, distance(x, Point{1.0, -0.5, 0.25}), 3)).epsilon(1e-14));
}

TEST_CASE("Gaussian: closed form against grid convolution, n = 1, 2") {
  for (int n = 1; n <= 2; ++n) {
    const auto g = FunctionRep::gaussian(Point(n, 0.3), 0.5, 1.5);
    const auto grid = apply_weighted_heat(g, 0.0, 0.8, 0, 0, grid_backend());
    const auto& m = grid.mesh();
    double worst = 0.0;
    for (std::size_t i = 0; i < m.values.size(); i += 7) {
      const Point x = mesh_point(m, i);
      worst = std::max(worst, std::abs(m.values[i] - oracle::gaussian_heat(1.5, 0.5, 0.8, distance(x, Point(n, 0.3)), n)));
    }
    CHECK(worst <= 1e-6);
    // mass
    CHECK(mesh_sum(m) == doctest::Approx(1.5 * std::pow(4 * oracle::pi * 0.5, 0.5 * n)).epsilon(1e-6));
  }
}

TEST_CASE("semigroup law and mass conservation on the grid backend") {
  for (const auto& f : {FunctionRep::gaussian({0.0, 0.0}, 0.3), FunctionRep::indicator({{{0.0, 0.0}, 1.0}, {{2.5, 0.0}, 0.5}})}) {
    const auto once = apply_weighted_heat(f, 0.0, 0.9, 0, 0, grid_backend());
    const auto twice = apply_weighted_heat(f, 0.0, 0.4, 0, 0, grid_backend()).propagate(0.5);
    CHECK(twice.time() == doctest::Approx(0.9));
    double worst = 0.0;
    for (const Point& x : {Point{0.0, 0.0}, Point{0.5, 0.5}, Point{2.5, 0.1}, Point{-1.0, 2.0}, Point{4.0, -3.0}})
      worst = std::max(worst, std::abs(once(x) - twice(x)));
    CHECK(worst <= 1e-6);
    CHECK(mesh_sum(once.mesh()) == doctest::Approx(whole_space_integral(f, 1.0).value).epsilon(1e-6));
  }
}

TEST_CASE("value at the origin of the smoothed |x|^{-beta}") {
  for (int n = 1; n <= 3; ++n)
    for (double beta : {0.3, 0.5 * n}) {
      if (beta >= n) continue;
      const auto u = apply_weighted_heat(FunctionRep::radial_power(n, beta), 0.0, 1.7);
      CHECK(u(Point(n, 0.0)) == doctest::Approx(oracle::power_heat_at_origin(beta, 1.7, n)).epsilon(1e-8));
    }
  // weight and power add up: |x|^{-1} |x|^{-0.5}
  const auto u = apply_weighted_heat(FunctionRep::radial_power(3, 0.5), 1.0, 1.0);
  CHECK(u(Point(3, 0.0)) == doctest::Approx(oracle::power_heat_at_origin(1.5, 1.0, 3)).epsilon(1e-8));
}

TEST_CASE("radial quadrature away from the origin") {
  // e^{t Delta} |x|^{-1} in 3D at radius R: erf(R / (2 sqrt t)) / R
  const auto u = apply_weighted_heat(FunctionRep::radial_power(3, 1.0), 0.0, 1.0);
  for (double R : {0.1, 1.0, 3.0, 10.0}) CHECK(u(Point{0.0, R, 0.0}) == doctest::Approx(std::erf(R / 2) / R).epsilon(1e-8));
}

TEST_CASE("heat-equation consistency: d_t u = Laplacian u") {
  const double h = 2e-3;
  {
    const auto f = FunctionRep::radial_power(3, 1.0);
    const auto u0 = apply_weighted_heat(f, 1.0, 1.0);
    const auto u1 = apply_weighted_heat(f, 1.0, 1.0, 1);
    for (const Point& x : {Point{0.5, 0.0, 0.0}, Point{0.3, 1.0, -0.4}, Point{2.0, 1.0, 0.5}})
      CHECK(u1(x) == doctest::Approx(laplacian_fd(u0, x, h)).epsilon(1e-4));
  }
  {
    const auto f = FunctionRep::gaussian({0.4, 0.0}, 0.6);
    const auto u0 = apply_weighted_heat(f, 0.0, 0.5);
    const auto u1 = apply_weighted_heat(f, 0.0, 0.5, 1);
    for (const Point& x : {Point{0.0, 0.0}, Point{1.0, -1.0}})
      CHECK(u1(x) == doctest::Approx(laplacian_fd(u0, x, h)).epsilon(1e-4));
  }
}

TEST_CASE("spatial derivatives against finite differences") {
  const double h = 1e-3;
  const auto f = FunctionRep::radial_power(2, 0.5);
  const auto u = apply_weighted_heat(f, 0.5, 0.7);
  const auto dx = apply_weighted_heat(f, 0.5, 0.7, 0, std::vector<int>{1, 0});
  const auto dxy = apply_weighted_heat(f, 0.5, 0.7, 0, std::vector<int>{1, 1});
  const auto dyy = apply_weighted_heat(f, 0.5, 0.7, 0, std::vector<int>{0, 2});
  for (const Point& x : {Point{0.4, 0.3}, Point{1.5, -0.7}}) {
    auto at = [&](double a, double b) { return u(Point{x[0] + a, x[1] + b}); };
    CHECK(dx(x) == doctest::Approx((at(h, 0) - at(-h, 0)) / (2 * h)).epsilon(1e-5));
    CHECK(dxy(x) == doctest::Approx((at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h)).epsilon(1e-4));
    CHECK(dyy(x) == doctest::Approx((at(0, h) - 2 * at(0, 0) + at(0, -h)) / (h * h)).epsilon(1e-4));
  }
}

TEST_CASE("property: positivity and contraction for gamma = 0") {
  oracle::Gen g(21);
  const std::vector<FunctionRep> sources{FunctionRep::indicator({{{0.0, 0.0}, 1.0}}),
                                         FunctionRep::indicator({{{0.0}, 0.5}, {{1.5}, 0.3}}, 2.0),
                                         FunctionRep::gaussian({0.5, 0.0}, 0.4, 3.0)};
  for (const auto& f : sources) {
    const double sup = f.amplitude();
    const auto u = apply_weighted_heat(f, 0.0, g.uniform(0.1, 2.0));
    for (int i = 0; i < 30; ++i) {
      Point x(f.dim());
      for (double& c : x) c = g.uniform(-3, 3);
      const double v = u(x);
      CHECK(v >= -1e-12);
      CHECK(v <= sup * (1 + 1e-9));
    }
  }
}

TEST_CASE("heat norms") {
  // Gaussian, n = 1, w = 1, t = 1: peak (1/2)^{1/2}, T = 2
  const auto g = FunctionRep::gaussian({0.0}, 1.0);
  const auto u = apply_weighted_heat(g, 0.0, 1.0);
  const double exact = oracle::gaussian_lp(std::sqrt(0.5), 2.0, 2.0, 1);
  CHECK(heat_norm(u, HeatTarget::lebesgue(2)).value == doctest::Approx(exact).epsilon(1e-12));
  HeatNormOptions forced;
  forced.force_quadrature = true;
  CHECK(std::abs(heat_norm(u, HeatTarget::lebesgue(2), forced).value - exact) <= 1e-6);
  const auto ug = apply_weighted_heat(g, 0.0, 1.0, 0, 0, grid_backend());
  CHECK(std::abs(heat_norm(ug, HeatTarget::lebesgue(2)).value - exact) <= 1e-6);

  // zero source
  for (const auto& target : {HeatTarget::lebesgue(2), HeatTarget::weak(3), HeatTarget::lorentz(2, FineIndex(2))})
    CHECK(heat_norm(apply_weighted_heat(FunctionRep::zero(2), 0.0, 1.0), target).value == 0.0);

  // homogeneous source: t^{-E} N(t) constant
  SpaceParams P;
  P.n = 3;
  P.p = 3;
  P.q = 2;
  P.s = 6;
  P.gamma = 1;
  const double E = smoothing_exponent(P);
  std::vector<double> normalized;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto w = apply_weighted_heat(FunctionRep::radial_power(3, 1.0), 1.0, t);
    normalized.push_back(heat_norm(w, HeatTarget::lebesgue(6)).value * std::pow(t, -E));
  }
  CHECK(normalized[1] == doctest::Approx(normalized[0]).epsilon(0.01));
  CHECK(normalized[2] == doctest::Approx(normalized[0]).epsilon(0.01));
}

TEST_CASE("grid norms for the disk agree with a coarser mesh") {
  const auto u = apply_weighted_heat(FunctionRep::indicator({{{0.0, 0.0}, 1.0}}), 0.0, 0.5);
  const double l2 = heat_norm(u, HeatTarget::lebesgue(2)).value;
  // ||e^{t Delta} chi||_2^2 = int int chi chi K_{2t} = by Parseval, checked through the mesh sum
  double s = 0.0;
  const auto& m = u.mesh();
  for (double v : m.values) s += v * v;
  CHECK(l2 == doctest::Approx(std::sqrt(s * m.spacing * m.spacing)).epsilon(1e-3));
  CHECK(heat_norm(u, HeatTarget::weak(2)).value <= l2);
  HeatNormOptions strict;
  strict.mesh_tolerance = 1e-14;
  // lattice sums are spectrally accurate for L^s; the level measure is only second order
  CHECK(code_of([&] { heat_norm(u, HeatTarget::weak(2), strict); }) == ErrorCode::mesh_underresolved);
}

TEST_CASE("memoised mesh is stable under concurrent access") {
  const auto u = apply_weighted_heat(FunctionRep::gaussian({0.0, 0.0}, 0.5), 0.0, 0.5, 0, 0, grid_backend());
  std::vector<const FieldMesh*> seen(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) threads.emplace_back([&, i] { seen[i] = &u.mesh(); });
  for (auto& t : threads) t.join();
  for (auto* m : seen) CHECK(m == seen[0]);
  const std::vector<Point> xs{{0.0, 0.0}, {0.3, 0.2}, {1.0, -1.0}};
  CHECK(u.evaluate_many(xs) == u.evaluate_many(xs));
  CHECK(u.evaluate_many(xs)[1] == u(xs[1]));
}
