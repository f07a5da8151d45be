#pragma once

#include <array>

namespace morreyheat {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Lower incomplete gamma integral: int_lo^hi rho^{m-1} exp(-c rho^2) d rho for m > 0, c > 0.
double gaussian_moment(double m, double c, double lo, double hi);

/// Physicists' Hermite polynomial H_m(y).
double hermite(int m, double y);

/// m-th derivative of the 1-D heat kernel (4 pi t)^{-1/2} exp(-x^2 / 4t).
double heat_kernel_1d_derivative(int m, double t, double x);

/// Scaled spherical means of exp(z * omega_1) over S^{n-1} and their z-derivatives.
///   moments[i] = exp(-z) * d^i/dz^i mean(exp(z c)),  i = 0..4
///   over_z     = exp(-z) * mean'(z) / z   (finite at z = 0, equal to 1/n there)
struct SphericalMoments {
  std::array<double, 5> moments{};
  double over_z = 0.0;
};

SphericalMoments spherical_moments(int n, double z);

}  // namespace morreyheat
