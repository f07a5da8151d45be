#include "morreyheat/special.hpp"

#include <cmath>
#include <numbers>

#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>

#include "morreyheat/error.hpp"

namespace morreyheat {

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return gsl_sf_gamma_inc_P(a, x);
}

double gaussian_moment(double m, double c, double lo, double hi) {
  // Substituting u = c rho^2 gives (1/2) c^{-m/2} int u^{m/2-1} e^{-u} du.
  const double a = 0.5 * m;
  const double scale = 0.5 * std::pow(c, -a) * std::tgamma(a);
  return scale * (gamma_p(a, c * hi * hi) - gamma_p(a, c * lo * lo));
}

double hermite(int m, double y) {
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = 2.0 * y;
  for (int j = 1; j < m; ++j) {
    const double next = 2.0 * y * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double heat_kernel_1d_derivative(int m, double t, double x) {
  const double g = std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
  if (m == 0) return g;
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(4.0 * t, -0.5 * m) * hermite(m, x / (2.0 * std::sqrt(t))) * g;
}

SphericalMoments spherical_moments(int n, double z) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "dimension must be positive");
  SphericalMoments out;
  const double nu = 0.5 * n - 1.0;
  if (z <= 10.0) {
    // mean(z) = sum_k c_k z^{2k}, c_0 = 1, c_k = c_{k-1} / (4 k (k + nu)).
    std::array<double, 5> acc{};
    double over_z = 0.0;
    double ck = 1.0;
    const double ez = std::exp(-z);
    std::array<double, 164> zp;
    zp[0] = 1.0;
    for (std::size_t j = 1; j < zp.size(); ++j) zp[j] = zp[j - 1] * z;
    for (int k = 0; k < 80; ++k) {
      if (k > 0) ck /= 4.0 * k * (k + nu);
      const int deg = 2 * k;
      double falling = 1.0;
      for (int i = 0; i < 5 && i <= deg; ++i) {
        acc[i] += ck * falling * zp[deg - i];
        falling *= deg - i;
      }
      if (k >= 1) over_z += ck * deg * zp[deg - 2];
      const double d4 = (deg + 1.0) * (deg + 1.0) * (deg + 1.0) * (deg + 1.0);
      if (k > 4 && ck * zp[deg] * d4 < 1e-18 * acc[0]) break;
    }
    for (int i = 0; i < 5; ++i) out.moments[i] = acc[i] * ez;
    out.over_z = over_z * ez;
    return out;
  }
  double s0 = 0.0;
  double s1 = 0.0;
  if (n == 1) {
    const double e2 = std::exp(-2.0 * z);
    s0 = 0.5 * (1.0 + e2);
    s1 = 0.5 * (1.0 - e2);
  } else {
    const double g = std::tgamma(nu + 1.0);
    s0 = g * std::pow(2.0 / z, nu) * gsl_sf_bessel_Inu_scaled(nu, z);
    s1 = g * std::pow(2.0, nu) * std::pow(z, -nu) * gsl_sf_bessel_Inu_scaled(nu + 1.0, z);
  }
  const double c = n - 1.0;
  const double s2 = s0 - c * s1 / z;
  const double s3 = s1 - c * (s2 / z - s1 / (z * z));
  const double s4 = s2 - c * (s3 / z - 2.0 * s2 / (z * z) + 2.0 * s1 / (z * z * z));
  out.moments = {s0, s1, s2, s3, s4};
  out.over_z = s1 / z;
  return out;
}

}  // namespace morreyheat
