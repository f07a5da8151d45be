#pragma once

// Reference values computed without the library: direct formulas, std::tgamma
// and a plain composite Simpson rule.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

inline double unit_ball_volume(int n) { return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

inline double sphere_area(int n) { return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n); }

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double heat_kernel(double t, double r, int n) {
  return std::pow(4.0 * pi * t, -0.5 * n) * std::exp(-r * r / (4.0 * t));
}

// e^{t Delta} of A exp(-|x - c|^2 / 4w) at distance r from c.
inline double gaussian_heat(double amplitude, double w, double t, double r, int n) {
  const double T = w + t;
  return amplitude * std::pow(w / T, 0.5 * n) * std::exp(-r * r / (4.0 * T));
}

// || A exp(-|x|^2 / 4T) ||_{L^p(R^n)}.
inline double gaussian_lp(double amplitude, double T, double p, int n) {
  return amplitude * std::pow(4.0 * pi * T / p, 0.5 * n / p);
}

// e^{t Delta}[|.|^{-beta}](0).
inline double power_heat_at_origin(double beta, double t, int n) {
  return std::pow(2.0, -beta) * std::tgamma(0.5 * (n - beta)) / std::tgamma(0.5 * n) * std::pow(t, -0.5 * beta);
}

// int_{B(0,R)} |x|^{-a q} dx.
inline double radial_power_ball(double a, double q, double R, int n) {
  return sphere_area(n) * std::pow(R, n - a * q) / (n - a * q);
}

inline double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// splitmix64; deterministic across platforms, unlike the std distributions.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
