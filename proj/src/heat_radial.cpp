#include <algorithm>
#include <cmath>
#include <numbers>

#include "heat_internal.hpp"
#include "morreyheat/error.hpp"
#include "morreyheat/quadrature.hpp"
#include "morreyheat/special.hpp"

namespace morreyheat::detail {
namespace {

constexpr std::array<std::array<double, 5>, 5> kBinomial = {{
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
}};

class ProfileEngine final : public RadialEngine {
 public:
  ProfileEngine(int n, const RadialProfile& p, double t, int max_order, double rel_tol)
      : n_(n), p_(p), t_(t), max_order_(max_order), rel_tol_(rel_tol) {
    coef_ = std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * unit_sphere_area(n);
    double s = std::sqrt(t);
    if (std::isfinite(p.outer)) s += p.outer;
    if (p.has_gaussian()) s += std::sqrt(p.gauss_width);
    scale_ = s;
  }

  double scale() const override { return scale_; }

  RadialBundle bundle(double r) const override {
    const double sq = std::sqrt(t_);
    const double lo = std::max(p_.inner, r - 40.0 * sq);
    const double hi = std::min(p_.outer, r + 40.0 * sq);
    RadialBundle out;
    if (!(hi > lo) || p_.amplitude == 0.0) return out;

    std::array<double, 5> herm{};
    for (int j = 0; j <= max_order_; ++j)
      herm[j] = ((j % 2 == 0) ? 1.0 : -1.0) * std::pow(4.0 * t_, -0.5 * j) * hermite(j, r / (2.0 * sq));

    // Everything except the profile weight rho^{n-1} phi(rho).
    auto kernel_part = [&](double rho) {
      std::array<double, 6> c{};
      const double a = rho / (2.0 * t_);
      const SphericalMoments s = spherical_moments(n_, r * a);
      const double e = std::exp(-(r - rho) * (r - rho) / (4.0 * t_));
      std::array<double, 5> ai{1.0, a, a * a, a * a * a, a * a * a * a};
      for (int m = 0; m <= max_order_; ++m) {
        double sum = 0.0;
        for (int i = 0; i <= m; ++i) sum += kBinomial[m][i] * herm[m - i] * ai[i] * s.moments[i];
        c[m] = e * sum;
      }
      c[5] = e * (-s.moments[0] / (2.0 * t_) + a * a * s.over_z);
      return c;
    };
    auto gauss = [&](double rho) {
      return p_.has_gaussian() ? std::exp(-rho * rho / (4.0 * p_.gauss_width)) : 1.0;
    };
    auto plain = [&](double rho) {
      std::array<double, 6> c = kernel_part(rho);
      const double w = std::pow(rho, n_ - 1) * p_(rho);
      for (double& v : c) v *= w;
      return c;
    };

    std::vector<double> breaks{lo, hi, r};
    for (double k : {3.0, 10.0}) {
      breaks.push_back(r - k * sq);
      breaks.push_back(r + k * sq);
    }
    if (p_.has_gaussian()) breaks.push_back(3.0 * std::sqrt(p_.gauss_width));
    std::vector<double> pts = clip_breakpoints(breaks, lo, hi);

    QuadOptions qo;
    qo.rel_tol = rel_tol_;
    qo.abs_tol = 0.0;
    qo.max_intervals = 4000;
    std::array<double, 6> total{};
    std::size_t first = 0;
    const double beta = p_.power;
    if (lo == 0.0 && beta > n_ - 1) {
      // rho = u^{1/m}, m = n - beta > 0, absorbs rho^{n-1-beta} into the measure.
      const double m = n_ - beta;
      auto sub = [&](double u) {
        std::array<double, 6> c{};
        if (u <= 0.0) return c;
        const double rho = std::pow(u, 1.0 / m);
        c = kernel_part(rho);
        const double w = p_.amplitude * gauss(rho) / m;
        for (double& v : c) v *= w;
        return c;
      };
      const std::array<double, 2> seg{0.0, std::pow(pts[1], m)};
      const auto res = integrate_n<6>(sub, std::span<const double>(seg), qo);
      for (int i = 0; i < 6; ++i) total[i] += res.value[i];
      first = 1;
    }
    if (first + 1 < pts.size()) {
      std::vector<double> rest(pts.begin() + static_cast<std::ptrdiff_t>(first), pts.end());
      const auto res = integrate_n<6>(plain, std::span<const double>(rest), qo);
      for (int i = 0; i < 6; ++i) total[i] += res.value[i];
    }
    for (int m = 0; m < 5; ++m) out.d[m] = coef_ * total[m];
    out.d1_over_r = coef_ * total[5];
    return out;
  }

 private:
  int n_;
  RadialProfile p_;
  double t_;
  int max_order_;
  double rel_tol_;
  double coef_ = 0.0;
  double scale_ = 1.0;
};

class GaussianEngine final : public RadialEngine {
 public:
  GaussianEngine(double peak, double total_time, double scale) : peak_(peak), T_(total_time), scale_(scale) {}
  double scale() const override { return scale_; }
  RadialBundle bundle(double r) const override {
    RadialBundle out;
    const double g = peak_ * std::exp(-r * r / (4.0 * T_));
    const double y = r / (2.0 * std::sqrt(T_));
    for (int m = 0; m < 5; ++m)
      out.d[m] = ((m % 2 == 0) ? 1.0 : -1.0) * std::pow(4.0 * T_, -0.5 * m) * hermite(m, y) * g;
    out.d1_over_r = -g / (2.0 * T_);
    return out;
  }

 private:
  double peak_;
  double T_;
  double scale_;
};

double log_moment(double a, double b, int n) {
  // log of int_{S^{n-1}} |w_1|^a |w_2|^b dw (b = 0 allowed for any n >= 1).
  return std::log(2.0) + std::lgamma(0.5 * (a + 1.0)) + std::lgamma(0.5 * (b + 1.0)) +
         (n - 2) * 0.5 * std::log(std::numbers::pi) - std::lgamma(0.5 * (a + b + n));
}

}  // namespace

std::shared_ptr<const RadialEngine> make_profile_engine(int n, const RadialProfile& profile, double t, int max_order,
                                                        double rel_tol) {
  return std::make_shared<ProfileEngine>(n, profile, t, std::clamp(max_order, 0, 4), rel_tol);
}

std::shared_ptr<const RadialEngine> make_gaussian_engine(double peak, double total_time, double scale) {
  return std::make_shared<GaussianEngine>(peak, total_time, scale);
}

DerivedBundle derive(const RadialEngine& engine, int n, int k, double t, double r) {
  DerivedBundle out;
  if (k == 0) {
    const RadialBundle b = engine.bundle(r);
    out.v = b.d[0];
    out.v1 = b.d[1];
    out.v2 = b.d[2];
    out.v1_over_r = b.d1_over_r;
    return out;
  }
  // V = Delta u = u'' + (n-1) u'/r; the r-derivatives divide by r, so below r0 the
  // odd derivative is continued linearly and the even one held constant.
  const double r0 = 1e-3 * std::sqrt(t);
  const double re = std::max(r, r0);
  const RadialBundle b = engine.bundle(re);
  const double q = (b.d[2] - b.d1_over_r) / re;
  const double v1 = b.d[3] + (n - 1) * q;
  const double v2 = b.d[4] + (n - 1) * (b.d[3] - 2.0 * q) / re;
  if (r >= r0) {
    out.v = b.d[2] + (n - 1) * b.d1_over_r;
    out.v1 = v1;
    out.v2 = v2;
    out.v1_over_r = v1 / r;
    return out;
  }
  const RadialBundle at = engine.bundle(r);
  out.v = at.d[2] + (n - 1) * at.d1_over_r;
  out.v1 = v1 * r / r0;
  out.v1_over_r = v1 / r0;
  out.v2 = v2;
  return out;
}

double directional(const DerivedBundle& b, std::span<const double> y, const std::vector<int>& alpha) {
  int order = 0;
  for (int a : alpha) order += a;
  if (order == 0) return b.v;
  const double r = norm(y);
  auto c = [&](std::size_t i) {
    if (r == 0.0) return i == 0 ? 1.0 : 0.0;
    return y[i] / r;
  };
  std::vector<std::size_t> axes;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int j = 0; j < alpha[i]; ++j) axes.push_back(i);
  if (order == 1) return b.v1 * c(axes[0]);
  if (axes[0] == axes[1]) {
    const double ci = c(axes[0]);
    return b.v2 * ci * ci + b.v1_over_r * (1.0 - ci * ci);
  }
  return (b.v2 - b.v1_over_r) * c(axes[0]) * c(axes[1]);
}

double angular_power_integral(const DerivedBundle& b, int n, const std::vector<int>& alpha, double s) {
  int order = 0, max_axis = 0;
  for (int a : alpha) {
    order += a;
    max_axis = std::max(max_axis, a);
  }
  if (order == 0) return unit_sphere_area(n) * std::pow(std::abs(b.v), s);
  if (order == 1) return std::pow(std::abs(b.v1), s) * std::exp(log_moment(s, 0.0, n));
  if (max_axis == 1) return std::pow(std::abs(b.v2 - b.v1_over_r), s) * std::exp(log_moment(s, s, n));
  const double A = b.v2, B = b.v1_over_r;
  if (n == 1) return 2.0 * std::pow(std::abs(A), s);
  // |A cos^2 + B sin^2|^s against |S^{n-2}| sin^{n-2}, folded onto [0, pi/2].
  auto g = [&](double th) {
    const double c = std::cos(th), sn = std::sin(th);
    return std::pow(std::abs(A * c * c + B * sn * sn), s) * std::pow(sn, n - 2);
  };
  std::vector<double> pts{0.0, 0.5 * std::numbers::pi};
  if (A * B < 0.0) pts.insert(pts.begin() + 1, std::atan(std::sqrt(-A / B)));
  QuadOptions qo;
  qo.rel_tol = 1e-12;
  qo.abs_tol = 0.0;
  const QuadResult res = integrate(g, std::span<const double>(pts), qo);
  return 2.0 * unit_sphere_area(n - 1) * res.value;
}

std::vector<std::vector<int>> kernel_terms(int n, int k, const std::vector<int>& alpha) {
  if (k == 0) return {alpha};
  std::vector<std::vector<int>> terms;
  for (int j = 0; j < n; ++j) {
    std::vector<int> a = alpha;
    a[j] += 2;
    terms.push_back(std::move(a));
  }
  return terms;
}

double kernel_derivative(double t, std::span<const double> y, int k, const std::vector<int>& alpha) {
  double total = 0.0;
  for (const auto& orders : kernel_terms(static_cast<int>(y.size()), k, alpha)) {
    double prod = 1.0;
    for (std::size_t i = 0; i < y.size(); ++i) prod *= heat_kernel_1d_derivative(orders[i], t, y[i]);
    total += prod;
  }
  return total;
}

}  // namespace morreyheat::detail
