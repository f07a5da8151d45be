#include <algorithm>
#include <cmath>
#include <limits>

#include "morreyheat/error.hpp"
#include "morreyheat/functions.hpp"
#include "morreyheat/polar.hpp"
#include "morreyheat/quadrature.hpp"
#include "morreyheat/special.hpp"

namespace morreyheat {
namespace detail {
double abs_value(const FunctionRep& f, std::span<const double> x);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_origin(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

bool same_point(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

// int_lo^hi rho^{m-1} drho for lo < hi, hi possibly infinite.
double power_moment(double m, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if ((lo == 0.0 && m <= 0.0) || (std::isinf(hi) && m >= 0.0))
    throw Error(ErrorCode::non_integrable, "radial power integral diverges");
  if (m == 0.0) return std::log(hi / lo);
  if (std::isinf(hi)) return -std::pow(lo, m) / m;
  return (std::pow(hi, m) - std::pow(lo, m)) / m;
}

// int_{lo <= |x| <= hi} phi(|x|)^power dx for an origin-radial profile.
IntegralValue radial_profile_integral(int n, const RadialProfile& p, double hi_radius, double power,
                                      const IntegrationOptions& opt) {
  const double lo = p.inner;
  const double hi = std::min(hi_radius, p.outer);
  if (p.amplitude == 0.0 || hi <= lo) return {0.0, 0.0, true};
  const double m = n - p.power * power;
  const double pref = std::pow(std::abs(p.amplitude), power) * unit_sphere_area(n);
  if (lo == 0.0 && m <= 0.0) throw Error(ErrorCode::non_integrable, "singularity at the origin is not integrable");
  if (!p.has_gaussian()) return {pref * power_moment(m, lo, hi), 0.0, true};
  const double c = power / (4.0 * p.gauss_width);
  if (m > 0.0) return {pref * gaussian_moment(m, c, lo, hi), 0.0, true};
  // Negative moment away from the origin: no incomplete-gamma shortcut.
  QuadOptions qo;
  qo.rel_tol = opt.rel_tol;
  qo.abs_tol = opt.abs_tol;
  const double top = std::isinf(hi) ? lo + 40.0 * std::sqrt(p.gauss_width / power) + 40.0 : hi;
  auto g = [&](double rho) { return std::pow(rho, m - 1.0) * std::exp(-c * rho * rho); };
  const QuadResult r = integrate(g, lo, top, qo);
  return {pref * r.value, pref * r.error, false};
}

IntegralValue indicator_integral(int n, const std::vector<Ball>& balls, double amp, std::span<const double> center,
                                 double radius, double power) {
  const Ball probe{Point(center.begin(), center.end()), radius};
  double vol = 0.0;
  if (std::isinf(radius)) {
    for (const Ball& b : balls) vol += ball_volume(n, b.radius);
  } else {
    for (const Ball& b : balls) vol += ball_intersection_volume(probe, b);
  }
  return {std::pow(std::abs(amp), power) * vol, 0.0, true};
}

// Overlap of the cell [lo, lo + h]^n with B(center, radius); exact for n = 1, otherwise
// a midpoint subsample on partially covered cells.
double cell_ball_overlap(std::span<const double> lo, double h, std::span<const double> center, double radius,
                         bool& exact) {
  const std::size_t n = lo.size();
  double near2 = 0.0, far2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lo[i] - center[i], b = a + h;
    const double nearest = (a > 0.0) ? a : (b < 0.0 ? b : 0.0);
    const double farthest = std::max(std::abs(a), std::abs(b));
    near2 += nearest * nearest;
    far2 += farthest * farthest;
  }
  const double r2 = radius * radius;
  if (near2 >= r2) return 0.0;
  if (far2 <= r2) return std::pow(h, static_cast<double>(n));
  if (n == 1) {
    const double a = std::max(lo[0], center[0] - radius);
    const double b = std::min(lo[0] + h, center[0] + radius);
    return std::max(0.0, b - a);
  }
  exact = false;
  const int m = n == 2 ? 16 : 8;
  const double sub = h / m;
  std::size_t total = 1, hits = 0;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = lo[i] + (static_cast<double>(rem % m) + 0.5) * sub - center[i];
      rem /= m;
      d2 += x * x;
    }
    if (d2 < r2) ++hits;
  }
  return std::pow(h, static_cast<double>(n)) * static_cast<double>(hits) / static_cast<double>(total);
}

IntegralValue grid_integral(const GridSample& g, double amp, std::span<const double> center, double radius,
                            double power) {
  const std::size_t n = g.origin.size();
  const double a = std::pow(std::abs(amp), power);
  bool exact = true;
  double sum = 0.0;
  Point lo(n);
  for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
    if (g.values[flat] == 0.0) continue;
    std::size_t rem = flat;
    for (std::size_t axis = n; axis-- > 0;) {
      lo[axis] = g.origin[axis] + static_cast<double>(rem % g.extent[axis]) * g.spacing;
      rem /= g.extent[axis];
    }
    const double w = std::isinf(radius) ? std::pow(g.spacing, static_cast<double>(n))
                                        : cell_ball_overlap(lo, g.spacing, center, radius, exact);
    if (w > 0.0) sum += w * std::pow(std::abs(g.values[flat]), power);
  }
  // Subsampled boundary cells: report a conservative error of a few percent of the boundary share.
  return {a * sum, exact ? 0.0 : 1e-3 * a * sum, exact};
}

const FunctionRep* indicator_core(const FunctionRep& f, double& gamma) {
  gamma = 0.0;
  const FunctionRep* cur = &f;
  while (const auto* w = std::get_if<Weighted>(&cur->variant())) {
    gamma += w->gamma;
    cur = w->inner.get();
  }
  return indicator_balls(*cur) ? cur : nullptr;
}

const GaussianBump* gaussian_core(const FunctionRep& f) {
  const FunctionRep* cur = &f;
  while (const auto* w = std::get_if<Weighted>(&cur->variant())) cur = w->inner.get();
  return std::get_if<GaussianBump>(&cur->variant());
}

bool origin_anchored(const FunctionRep& f) {
  return std::holds_alternative<RadialPower>(f.variant()) || std::holds_alternative<Weighted>(f.variant());
}

IntegralValue polar_ball_integral(const FunctionRep& f, std::span<const double> center, double radius,
                                  double power, const IntegrationOptions& opt) {
  const int n = f.dim();
  if (n > 3) throw Error(ErrorCode::unsupported_dimension, "generic quadrature supports n <= 3");
  const Point origin = zero_point(n);
  const double sing = origin_singularity(f);
  const bool origin_inside = distance(origin, center) <= radius;
  if (sing > 0.0 && origin_inside && sing * power >= n)
    throw Error(ErrorCode::non_integrable, "q times the singularity exponent reaches the dimension");

  QuadOptions qo;
  qo.rel_tol = opt.rel_tol;
  qo.abs_tol = opt.abs_tol;

  PolarProblem base;
  base.n = n;
  base.constraints.push_back({Point(center.begin(), center.end()), radius});
  if (sing > 0.0 && origin_inside) {
    base.pole = origin;
    base.singular_exponent = sing * power;
  } else if (const GaussianBump* g = gaussian_core(f); g && !origin_anchored(f)) {
    base.pole = g->center;
  } else if (origin_anchored(f)) {
    base.pole = origin;
  } else {
    base.pole = Point(center.begin(), center.end());
  }
  if (const GaussianBump* g = gaussian_core(f)) base.features.push_back({g->center, std::sqrt(g->width / power)});
  // Keep the radial range inside the support when the ball is much larger.
  if (auto sb = support_bound(f); sb && distance(sb->center, center) + radius > sb->radius)
    base.constraints.push_back(*sb);
  if (origin_anchored(f) && same_point(base.pole, origin)) {
    if (auto prof = origin_radial_profile(f)) {
      base.rho_min = prof->inner;
      base.rho_max = prof->outer;
    }
  }
  auto integrand = [&](std::span<const double> y) {
    const double v = detail::abs_value(f, y);
    return v == 0.0 ? 0.0 : std::pow(v, power);
  };

  double gamma = 0.0;
  const FunctionRep* core = indicator_core(f, gamma);
  if (core == nullptr) {
    const QuadResult r = polar_integrate(base, integrand, qo);
    return {r.value, r.error, false};
  }
  // Linearity over the disjoint balls keeps every piece an intersection of two balls.
  IntegralValue total;
  const std::vector<Ball> balls = *indicator_balls(*core);
  for (const Ball& b : balls) {
    if (distance(b.center, center) >= b.radius + radius) continue;
    PolarProblem piece = base;
    piece.constraints.push_back(b);
    if (!(sing > 0.0 && origin_inside && distance(origin, b.center) <= b.radius)) {
      piece.singular_exponent = 0.0;
      if (gamma == 0.0) piece.pole = distance(b.center, center) < radius ? b.center : piece.pole;
    }
    const QuadResult r = polar_integrate(piece, integrand, qo);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

}  // namespace

IntegralValue ball_integral(const FunctionRep& f, std::span<const double> center, double radius, double power,
                            const IntegrationOptions& opt) {
  const int n = f.dim();
  if (static_cast<int>(center.size()) != n) throw Error(ErrorCode::invalid_argument, "centre dimension mismatch");
  if (!(power >= 1.0) || !std::isfinite(power)) throw Error(ErrorCode::invalid_argument, "power must be >= 1");
  if (!(radius >= 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be non-negative");
  if (radius == 0.0 || f.amplitude() == 0.0) return {0.0, 0.0, true};
  if (opt.force_quadrature) return polar_ball_integral(f, center, radius, power, opt);

  if (auto balls = indicator_balls(f)) return indicator_integral(n, *balls, f.amplitude(), center, radius, power);
  if (const auto* g = std::get_if<GridSample>(&f.variant())) return grid_integral(*g, f.amplitude(), center, radius, power);
  if (is_origin(center)) {
    if (auto prof = origin_radial_profile(f)) return radial_profile_integral(n, *prof, radius, power, opt);
  }
  if (const auto* g = std::get_if<GaussianBump>(&f.variant()); g && same_point(center, g->center)) {
    RadialProfile prof;
    prof.amplitude = f.amplitude();
    prof.gauss_width = g->width;
    return radial_profile_integral(n, prof, radius, power, opt);
  }
  if (std::isinf(radius)) return whole_space_integral(f, power, opt);
  return polar_ball_integral(f, center, radius, power, opt);
}

IntegralValue whole_space_integral(const FunctionRep& f, double power, const IntegrationOptions& opt) {
  const int n = f.dim();
  if (!(power >= 1.0) || !std::isfinite(power)) throw Error(ErrorCode::invalid_argument, "power must be >= 1");
  if (f.amplitude() == 0.0) return {0.0, 0.0, true};
  const Point origin = zero_point(n);
  if (!opt.force_quadrature) {
    if (auto balls = indicator_balls(f)) return indicator_integral(n, *balls, f.amplitude(), origin, kInf, power);
    if (const auto* g = std::get_if<GridSample>(&f.variant())) return grid_integral(*g, f.amplitude(), origin, kInf, power);
    if (auto prof = origin_radial_profile(f)) return radial_profile_integral(n, *prof, kInf, power, opt);
    if (const auto* g = std::get_if<GaussianBump>(&f.variant())) {
      const double value = std::pow(std::abs(f.amplitude()), power) *
                           std::pow(4.0 * M_PI * g->width / power, 0.5 * n);
      return {value, 0.0, true};
    }
  }
  auto bound = support_bound(f);
  if (!bound) throw Error(ErrorCode::non_integrable, "function has unbounded support and no closed form");
  // Origin-anchored weights put a singularity at 0 that may lie outside the support ball;
  // enlarge so the polar pole sits inside.
  if (origin_singularity(f) > 0.0) {
    bound->radius = std::max(bound->radius, norm(bound->center) + bound->radius);
    bound->center = origin;
  }
  IntegrationOptions inner = opt;
  if (opt.force_quadrature) return polar_ball_integral(f, bound->center, bound->radius, power, inner);
  return ball_integral(f, bound->center, bound->radius, power, inner);
}

namespace {

// Largest rho in [p.inner, p.outer] with phi(rho) > level, for a non-increasing profile.
// Returns p.inner when the super-level set is empty.
double profile_level_radius(const RadialProfile& p, double level, bool& exact) {
  const double a = std::abs(p.amplitude);
  auto phi = [&](double rho) {
    RadialProfile q = p;
    q.amplitude = a;
    return q(rho);
  };
  if (!(phi(p.inner) > level)) return p.inner;
  if (std::isfinite(p.outer) && phi(p.outer) > level) return p.outer;
  if (!p.has_gaussian()) {
    if (p.power == 0.0) throw Error(ErrorCode::infinite_measure, "constant profile without an outer cut");
    return std::pow(a / level, 1.0 / p.power);
  }
  if (p.power == 0.0) return std::sqrt(4.0 * p.gauss_width * std::log(a / level));
  // log phi is strictly decreasing; bracket then bisect to machine precision.
  exact = false;
  double lo = std::max(p.inner, 1e-300), hi = std::max(2.0 * lo, 1.0);
  auto above = [&](double rho) {
    return std::log(a) - p.power * std::log(rho) - rho * rho / (4.0 * p.gauss_width) > std::log(level);
  };
  if (!above(lo)) lo = p.inner;
  while (above(hi)) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? lo : hi) = mid;
  }
  return std::min(0.5 * (lo + hi), p.outer);
}

}  // namespace

DistributionValue distribution(const FunctionRep& f, double level) {
  if (!(level > 0.0)) throw Error(ErrorCode::invalid_argument, "level must be positive");
  const int n = f.dim();
  if (f.amplitude() == 0.0) return {0.0, true};
  if (auto step = step_distribution(f)) {
    // measure{|f| > level} = measure{|f| >= smallest value above level}.
    const auto it = std::upper_bound(step->values.begin(), step->values.end(), level);
    if (it == step->values.end()) return {0.0, true};
    return {step->measures[static_cast<std::size_t>(it - step->values.begin())], true};
  }
  if (auto prof = origin_radial_profile(f)) {
    bool exact = true;
    const double rho = profile_level_radius(*prof, level, exact);
    const double m = unit_ball_volume(n) * (std::pow(rho, n) - std::pow(prof->inner, n));
    if (!std::isfinite(m)) throw Error(ErrorCode::infinite_measure, "super-level set measure overflows");
    return {std::max(0.0, m), exact};
  }
  if (const auto* g = std::get_if<GaussianBump>(&f.variant())) {
    const double a = std::abs(f.amplitude());
    if (a <= level) return {0.0, true};
    const double rho = std::sqrt(4.0 * g->width * std::log(a / level));
    return {ball_volume(n, rho), true};
  }
  auto bound = support_bound(f);
  if (!bound) throw Error(ErrorCode::infinite_measure, "cannot bound the super-level set");
  if (n > 3) throw Error(ErrorCode::unsupported_dimension, "generic quadrature supports n <= 3");
  if (origin_singularity(f) > 0.0) {
    bound->radius = norm(bound->center) + bound->radius;
    bound->center = zero_point(n);
  }
  PolarProblem prob;
  prob.n = n;
  prob.pole = bound->center;
  prob.constraints.push_back(*bound);
  QuadOptions qo;
  qo.rel_tol = 1e-6;
  qo.abs_tol = 1e-10;
  const QuadResult r = polar_integrate(prob, [&](std::span<const double> y) {
    return detail::abs_value(f, y) > level ? 1.0 : 0.0;
  }, qo);
  return {r.value, false};
}

DistributionProfile distribution_profile(const FunctionRep& f, std::span<const double> levels) {
  DistributionProfile out;
  double prev = 0.0;
  for (double level : levels) {
    if (!(level > prev)) throw Error(ErrorCode::invalid_argument, "levels must be positive and increasing");
    prev = level;
    const DistributionValue d = distribution(f, level);
    out.levels.push_back(level);
    out.measures.push_back(d.measure);
    out.exact.push_back(d.exact);
  }
  return out;
}

}  // namespace morreyheat
