#pragma once

#include <limits>

namespace morreyheat {

/// Fine index r in [1, inf]. Infinity is a distinct state, never a large float.
class FineIndex {
 public:
  constexpr FineIndex() = default;
  explicit FineIndex(double value);
  static constexpr FineIndex infinity() { return FineIndex(Tag{}); }

  bool is_infinite() const noexcept { return infinite_; }
  double value() const;  // throws for infinity
  bool operator==(const FineIndex&) const = default;

 private:
  struct Tag {};
  constexpr explicit FineIndex(Tag) : infinite_(true) {}
  double value_ = 1.0;
  bool infinite_ = false;
};

struct SpaceParams {
  int n = 1;
  double p = 2.0;
  double q = 1.0;
  FineIndex r = FineIndex::infinity();
  double s = 2.0;
  double gamma = 0.0;
  int k = 0;
  int alpha_order = 0;

  /// Throws Error(invalid_argument) on p <= 1, q < 1, q > p, s <= 1, n < 1 or negative orders.
  void validate() const;
};

struct AdmissibilityWindow {
  double lower = 0.0;  // n/q - n/p
  double upper = 0.0;  // n - n/p
  bool admissible = false;   // lower < gamma < upper
  bool weak_claim = false;   // admissible and q <= s
  bool strong_claim = false; // admissible and q < s
};

AdmissibilityWindow admissibility_window(const SpaceParams& params);

/// Time-decay exponent -(n/2)(1/p - 1/s) - k - |alpha|/2 - gamma/2.
double smoothing_exponent(const SpaceParams& params);

struct EndpointSelection {
  double p0 = 0.0;
  double p1 = 0.0;
  double theta = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;
};

/// Endpoint exponents for the interpolation argument:
/// n/q - n/p0 = n - n/p1 = gamma, theta from 1/p = (1-theta)/p0 + theta/p1,
/// then s1 in (max(q, theta*s), s) and s0 solving the matching identity for s.
EndpointSelection select_endpoints(const SpaceParams& params);

}  // namespace morreyheat
