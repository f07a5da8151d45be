#include "morreyheat/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_gamma.h>

#include "morreyheat/error.hpp"

namespace morreyheat {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Point translated(std::span<const double> x, std::span<const double> shift) {
  assert(x.size() == shift.size());
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += shift[i];
  return out;
}

Point zero_point(int dim) { return Point(static_cast<std::size_t>(dim), 0.0); }

double unit_ball_volume(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "dimension must be positive");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

double ball_volume(int n, double radius) { return unit_ball_volume(n) * std::pow(radius, n); }

double cap_volume(int n, double radius, double height) {
  if (height <= 0.0) return 0.0;
  if (height >= 2.0 * radius) return ball_volume(n, radius);
  if (height > radius) return ball_volume(n, radius) - cap_volume(n, radius, 2.0 * radius - height);
  const double x = std::clamp(height * (2.0 * radius - height) / (radius * radius), 0.0, 1.0);
  return 0.5 * ball_volume(n, radius) * gsl_sf_beta_inc(0.5 * (n + 1), 0.5, x);
}

double ball_intersection_volume(int n, double r1, double r2, double d) {
  if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) return ball_volume(n, std::min(r1, r2));
  // Signed distance from the first center to the radical hyperplane.
  const double c1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h1 = r1 - c1;
  const double h2 = r2 - (d - c1);
  return cap_volume(n, r1, h1) + cap_volume(n, r2, h2);
}

double ball_intersection_volume(const Ball& a, const Ball& b) {
  const int n = static_cast<int>(a.center.size());
  return ball_intersection_volume(n, a.radius, b.radius, distance(a.center, b.center));
}

}  // namespace morreyheat
