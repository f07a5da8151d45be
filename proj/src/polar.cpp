#include "morreyheat/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "morreyheat/error.hpp"

namespace morreyheat {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Interval = std::pair<double, double>;
using IntervalSet = std::vector<Interval>;

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  IntervalSet out;
  for (const auto& x : a)
    for (const auto& y : b) {
      const double lo = std::max(x.first, y.first);
      const double hi = std::min(x.second, y.second);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Arc [center - half, center + half] on the circle, expressed inside [0, 2 pi).
IntervalSet arc(double center, double half) {
  if (half >= std::numbers::pi) return {{0.0, kTwoPi}};
  double a = std::fmod(center - half, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  const double b = a + 2.0 * half;
  if (b <= kTwoPi) return {{a, b}};
  return {{0.0, b - kTwoPi}, {a, kTwoPi}};
}

// Directions omega with pole + rho*omega inside the ball satisfy omega . dhat > kappa.
// Returns +inf when no direction qualifies and -inf when all do.
double cap_threshold(double rho, double d, double r) {
  if (d == 0.0) return rho < r ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  const double kappa = (rho * rho + d * d - r * r) / (2.0 * rho * d);
  if (kappa <= -1.0) return -std::numeric_limits<double>::infinity();
  if (kappa >= 1.0) return std::numeric_limits<double>::infinity();
  return kappa;
}

struct Direction {
  double d = 0.0;      // distance from pole
  double theta = 0.0;  // azimuth
  double phi = 0.0;    // polar angle (n = 3)
};

Direction direction_of(const Point& pole, const Point& c) {
  Direction dir;
  const std::size_t n = pole.size();
  Point v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = c[i] - pole[i];
  dir.d = norm(v);
  if (n >= 2) {
    dir.theta = std::atan2(v[1], v[0]);
    if (dir.theta < 0.0) dir.theta += kTwoPi;
  }
  if (n == 3) dir.phi = dir.d > 0.0 ? std::acos(std::clamp(v[2] / dir.d, -1.0, 1.0)) : 0.0;
  return dir;
}

std::vector<double> in_interval(const std::vector<double>& pts, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double p : pts)
    if (p > lo && p < hi) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

void add_periodic(std::vector<double>& pts, double x) {
  x = std::fmod(x, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  pts.push_back(x);
}

class Integrator {
 public:
  Integrator(const PolarProblem& p, const PolarIntegrand& g, const QuadOptions& opt)
      : p_(p), g_(g), opt_(opt), inner_opt_(opt) {
    inner_opt_.rel_tol = opt.rel_tol * 0.1;
    inner_opt_.abs_tol = opt.abs_tol * 1e-3;
    for (const Ball& b : p.constraints) caps_.push_back({direction_of(p.pole, b.center), b.radius});
    for (const PolarFeature& f : p.features) feats_.push_back({direction_of(p.pole, f.center), f.width});
  }

  QuadResult run() {
    const int n = p_.n;
    if (n < 1 || n > 3) throw Error(ErrorCode::unsupported_dimension, "polar quadrature supports n <= 3");
    if (!(p_.singular_exponent < n)) throw Error(ErrorCode::non_integrable, "singular exponent must be below n");
    double rho_hi = p_.rho_max;
    for (const Cap& c : caps_) rho_hi = std::min(rho_hi, c.dir.d + c.radius);
    if (!std::isfinite(rho_hi)) throw Error(ErrorCode::invalid_argument, "polar quadrature needs a bounded radial range");
    const double rho_lo = p_.rho_min;
    if (!(rho_hi > rho_lo)) return {};

    std::vector<double> breaks = p_.rho_breaks;
    for (const Cap& c : caps_) {
      breaks.push_back(c.dir.d - c.radius);
      breaks.push_back(std::abs(c.dir.d - c.radius));
      breaks.push_back(c.dir.d + c.radius);
      breaks.push_back(std::sqrt(std::max(0.0, c.dir.d * c.dir.d - c.radius * c.radius)));
    }
    for (const Feat& f : feats_)
      for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) breaks.push_back(f.dir.d + k * f.width);
    std::vector<double> pts = clip_breakpoints(breaks, rho_lo, rho_hi);

    QuadResult total;
    auto radial = [&](double rho) { return std::pow(rho, n - 1) * angular(rho); };
    std::size_t first = 0;
    if (p_.singular_exponent > 0.0 && rho_lo == 0.0) {
      // u = rho^m removes the integrable singularity at the pole.
      const double m = n - p_.singular_exponent;
      const double beta = p_.singular_exponent;
      auto sub = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double rho = std::pow(u, 1.0 / m);
        return std::pow(rho, beta) * angular(rho) / m;
      };
      const QuadResult r = integrate(sub, 0.0, std::pow(pts[1], m), opt_);
      accumulate(total, r);
      first = 1;
    }
    if (first + 1 < pts.size()) {
      std::vector<double> rest(pts.begin() + static_cast<std::ptrdiff_t>(first), pts.end());
      accumulate(total, integrate(radial, std::span<const double>(rest), opt_));
    }
    return total;
  }

 private:
  struct Cap {
    Direction dir;
    double radius;
  };
  struct Feat {
    Direction dir;
    double width;
  };

  static void accumulate(QuadResult& total, const QuadResult& r) {
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }

  double eval(std::span<const double> omega, double rho) const {
    const std::size_t n = p_.pole.size();
    double y[3];
    for (std::size_t i = 0; i < n; ++i) y[i] = p_.pole[i] + rho * omega[i];
    return g_(std::span<const double>(y, n));
  }

  double angular(double rho) const {
    if (rho <= 0.0) return 0.0;
    switch (p_.n) {
      case 1: return angular_1d(rho);
      case 2: return angular_2d(rho);
      default: return angular_3d(rho);
    }
  }

  double angular_1d(double rho) const {
    double sum = 0.0;
    for (double sign : {-1.0, 1.0}) {
      const double y = p_.pole[0] + sign * rho;
      bool inside = true;
      for (const Ball& b : p_.constraints)
        if (std::abs(y - b.center[0]) >= b.radius) inside = false;
      if (!inside) continue;
      sum += eval(std::span<const double>(&sign, 1), rho);
    }
    return sum;
  }

  IntervalSet theta_set_2d(double rho) const {
    IntervalSet allowed{{0.0, kTwoPi}};
    for (const Cap& c : caps_) {
      const double kappa = cap_threshold(rho, c.dir.d, c.radius);
      if (kappa == std::numeric_limits<double>::infinity()) return {};
      if (kappa == -std::numeric_limits<double>::infinity()) continue;
      allowed = intersect(allowed, arc(c.dir.theta, std::acos(kappa)));
      if (allowed.empty()) return {};
    }
    return allowed;
  }

  double angular_2d(double rho) const {
    const IntervalSet allowed = theta_set_2d(rho);
    if (allowed.empty()) return 0.0;
    std::vector<double> marks;
    for (const Feat& f : feats_) {
      if (f.dir.d == 0.0) continue;  // centred on the pole: no angular structure
      const double hw = std::min(std::numbers::pi, f.width / rho);
      for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) add_periodic(marks, f.dir.theta + k * hw);
    }
    for (int i = 0; i < 4; ++i) marks.push_back(kTwoPi * i / 4.0);
    auto integrand = [&](double theta) {
      const double omega[2] = {std::cos(theta), std::sin(theta)};
      return eval(std::span<const double>(omega, 2), rho);
    };
    double sum = 0.0;
    for (const auto& [lo, hi] : allowed) sum += integrate(integrand, in_interval(marks, lo, hi), inner_opt_).value;
    return sum;
  }

  double angular_3d(double rho) const {
    Interval phi_range{0.0, std::numbers::pi};
    std::vector<double> phi_marks{0.25 * std::numbers::pi, 0.5 * std::numbers::pi, 0.75 * std::numbers::pi};
    for (const Cap& c : caps_) {
      const double kappa = cap_threshold(rho, c.dir.d, c.radius);
      if (kappa == std::numeric_limits<double>::infinity()) return 0.0;
      if (kappa == -std::numeric_limits<double>::infinity()) continue;
      const double h = std::acos(kappa);
      phi_range.first = std::max(phi_range.first, c.dir.phi - h);
      phi_range.second = std::min(phi_range.second, c.dir.phi + h);
      phi_marks.push_back(c.dir.phi - h);
      phi_marks.push_back(h - c.dir.phi);
      phi_marks.push_back(c.dir.phi + h);
      phi_marks.push_back(2.0 * std::numbers::pi - c.dir.phi - h);
      phi_marks.push_back(c.dir.phi);
    }
    if (!(phi_range.second > phi_range.first)) return 0.0;
    for (const Feat& f : feats_) {
      if (f.dir.d == 0.0) continue;
      const double hw = std::min(std::numbers::pi, f.width / rho);
      for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) phi_marks.push_back(f.dir.phi + k * hw);
    }
    auto over_phi = [&](double phi) {
      const double sp = std::sin(phi);
      const double cp = std::cos(phi);
      IntervalSet allowed{{0.0, kTwoPi}};
      for (const Cap& c : caps_) {
        const double kappa = cap_threshold(rho, c.dir.d, c.radius);
        if (kappa == -std::numeric_limits<double>::infinity()) continue;
        const double ch = kappa;  // cos of the cap half-angle
        const double spc = std::sin(c.dir.phi);
        const double cpc = std::cos(c.dir.phi);
        const double denom = sp * spc;
        if (denom < 1e-300) {
          if (cp * cpc > ch) continue;
          return 0.0;
        }
        const double k2 = (ch - cp * cpc) / denom;
        if (k2 <= -1.0) continue;
        if (k2 >= 1.0) return 0.0;
        allowed = intersect(allowed, arc(c.dir.theta, std::acos(k2)));
        if (allowed.empty()) return 0.0;
      }
      std::vector<double> marks;
      for (int i = 0; i < 4; ++i) marks.push_back(kTwoPi * i / 4.0);
      for (const Feat& f : feats_) {
        if (sp < 1e-12) break;
        if (f.dir.d == 0.0) continue;
        const double hw = std::min(std::numbers::pi, f.width / (rho * sp));
        for (double k : {-3.0, -1.0, 0.0, 1.0, 3.0}) add_periodic(marks, f.dir.theta + k * hw);
      }
      auto integrand = [&](double theta) {
        const double omega[3] = {sp * std::cos(theta), sp * std::sin(theta), cp};
        return eval(std::span<const double>(omega, 3), rho);
      };
      double sum = 0.0;
      for (const auto& [lo, hi] : allowed) sum += integrate(integrand, in_interval(marks, lo, hi), inner_opt_).value;
      return sum * sp;
    };
    return integrate(over_phi, in_interval(phi_marks, phi_range.first, phi_range.second), inner_opt_).value;
  }

  const PolarProblem& p_;
  const PolarIntegrand& g_;
  QuadOptions opt_;
  QuadOptions inner_opt_;
  std::vector<Cap> caps_;
  std::vector<Feat> feats_;
};

}  // namespace

QuadResult polar_integrate(const PolarProblem& problem, const PolarIntegrand& g, const QuadOptions& opt) {
  if (static_cast<int>(problem.pole.size()) != problem.n)
    throw Error(ErrorCode::invalid_argument, "pole dimension mismatch");
  return Integrator(problem, g, opt).run();
}

}  // namespace morreyheat
