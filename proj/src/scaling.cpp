#include "morreyheat/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "morreyheat/error.hpp"

namespace morreyheat {

FineIndex::FineIndex(double value) : value_(value) {
  if (!(value >= 1.0) || !std::isfinite(value))
    throw Error(ErrorCode::invalid_argument, "fine index must be a finite real >= 1 or infinity");
}

double FineIndex::value() const {
  if (infinite_) throw Error(ErrorCode::invalid_argument, "fine index is infinite");
  return value_;
}

void SpaceParams::validate() const {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "n must be a positive integer");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must be a finite real > 1");
  if (!(q >= 1.0)) throw Error(ErrorCode::invalid_argument, "q must be >= 1");
  if (q > p) throw Error(ErrorCode::invalid_argument, "q must not exceed p");
  if (!(s > 1.0) || !std::isfinite(s)) throw Error(ErrorCode::invalid_argument, "s must be a finite real > 1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::invalid_argument, "gamma must be >= 0");
  if (k < 0 || alpha_order < 0) throw Error(ErrorCode::invalid_argument, "derivative orders must be non-negative");
}

AdmissibilityWindow admissibility_window(const SpaceParams& params) {
  params.validate();
  const double n = params.n;
  AdmissibilityWindow w;
  w.lower = n / params.q - n / params.p;
  w.upper = n - n / params.p;
  w.admissible = w.lower < params.gamma && params.gamma < w.upper;
  w.weak_claim = w.admissible && params.q <= params.s;
  w.strong_claim = w.admissible && params.q < params.s;
  return w;
}

double smoothing_exponent(const SpaceParams& params) {
  const double n = params.n;
  return -0.5 * n * (1.0 / params.p - 1.0 / params.s) - params.k - 0.5 * params.alpha_order - 0.5 * params.gamma;
}

EndpointSelection select_endpoints(const SpaceParams& params) {
  const AdmissibilityWindow window = admissibility_window(params);
  if (!window.admissible)
    throw Error(ErrorCode::inadmissible, "gamma lies outside (n/q - n/p, n - n/p)");
  const double n = params.n;
  const double gap = n / params.q - params.gamma;
  if (std::abs(gap) <= 1e-12 * std::max(1.0, n / params.q))
    throw Error(ErrorCode::degenerate_endpoint, "gamma = n/q makes the upper endpoint infinite");
  if (gap < 0.0)
    throw Error(ErrorCode::degenerate_endpoint, "gamma > n/q leaves no finite upper endpoint");
  if (params.q > params.s)
    throw Error(ErrorCode::inadmissible, "q > s: no smoothing claim applies");

  EndpointSelection e;
  e.p0 = n / gap;
  e.p1 = n / (n - params.gamma);
  const double inv_p = 1.0 / params.p;
  const double inv_p0 = 1.0 / e.p0;
  const double inv_p1 = 1.0 / e.p1;
  e.theta = (inv_p - inv_p0) / (inv_p1 - inv_p0);

  // s1 must stay above q (strong claim) or 1 (weak claim with q = s), and above
  // theta * s so that 1/s0 stays positive.
  const double floor = std::max(params.q < params.s ? params.q : 1.0, e.theta * params.s);
  e.s1 = 0.5 * (floor + params.s);
  const double inv_s0 = (1.0 / params.s - e.theta / e.s1) / (1.0 - e.theta);
  if (!(inv_s0 > 0.0)) throw Error(ErrorCode::inadmissible, "no finite s0 for the chosen s1");
  e.s0 = 1.0 / inv_s0;
  if (!(e.s0 > params.s) || !(e.p0 > params.p) || !(params.p > e.p1))
    throw Error(ErrorCode::inadmissible, "endpoint ordering violated");
  return e;
}

}  // namespace morreyheat
