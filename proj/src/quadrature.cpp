#include "morreyheat/quadrature.hpp"

namespace morreyheat {

std::vector<double> clip_breakpoints(std::vector<double> points, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double p : points)
    if (p > lo && p < hi && std::isfinite(p)) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

}  // namespace morreyheat
