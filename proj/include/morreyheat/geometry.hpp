#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace morreyheat {

using Point = std::vector<double>;

struct Ball {
  Point center;
  double radius = 0.0;
};

double norm(std::span<const double> x);
double distance(std::span<const double> a, std::span<const double> b);
Point translated(std::span<const double> x, std::span<const double> shift);
Point zero_point(int dim);

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Surface measure of the unit sphere S^{n-1}; equals n times the ball volume.
double unit_sphere_area(int n);

double ball_volume(int n, double radius);

/// Volume of the cap of height h (0 <= h <= 2r) cut from an n-ball of radius r.
double cap_volume(int n, double radius, double height);

/// Exact volume of B(c1, r1) intersected with B(c2, r2) for centers at distance d.
/// Works in every dimension through the regularized incomplete beta function.
double ball_intersection_volume(int n, double r1, double r2, double d);

double ball_intersection_volume(const Ball& a, const Ball& b);

}  // namespace morreyheat
