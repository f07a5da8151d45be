#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "morreyheat/geometry.hpp"
#include "morreyheat/quadrature.hpp"

namespace morreyheat {

/// A smooth concentration of the integrand (Gaussian bump, kernel peak) used only
/// to place breakpoints.
struct PolarFeature {
  Point center;
  double width = 1.0;
};

/// Integral of g over the intersection of `constraints` (all of R^n when empty),
/// restricted to rho_min <= |y - pole| <= rho_max, in spherical coordinates
/// about `pole`. For singular_exponent > 0 the integrand may behave like
/// |y - pole|^{-singular_exponent} (< n) and the innermost radial segment is
/// integrated in u = rho^{n - singular_exponent}. Dimensions 1..3.
struct PolarProblem {
  int n = 1;
  Point pole;
  double singular_exponent = 0.0;
  std::vector<Ball> constraints;
  double rho_min = 0.0;
  double rho_max = std::numeric_limits<double>::infinity();
  std::vector<double> rho_breaks;
  std::vector<PolarFeature> features;
};

using PolarIntegrand = std::function<double(std::span<const double>)>;

QuadResult polar_integrate(const PolarProblem& problem, const PolarIntegrand& g, const QuadOptions& opt = {});

}  // namespace morreyheat
