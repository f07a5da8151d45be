#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "morreyheat/functions.hpp"
#include "morreyheat/kernels.hpp"
#include "morreyheat/scaling.hpp"
#include "morreyheat/spaces.hpp"

namespace morreyheat {

/// (4 pi t)^{-n/2} exp(-|x|^2 / 4t) with n = x.size().
double heat_kernel(double t, std::span<const double> x);
double heat_kernel(double t, double radius, int n);

enum class HeatBackend { closed_form, radial_quadrature, grid_convolution };

const char* to_string(HeatBackend backend);

struct HeatOptions {
  /// Force a backend; rejected with invalid_argument when it cannot represent the source.
  std::optional<HeatBackend> backend;
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  /// Grid backend: spacing h <= sqrt(t) / resolution.
  double resolution = 8.0;
  /// Grid backend: Gaussian tail margin, in units of sqrt(t).
  double tail_widths = 10.0;
  std::size_t max_grid_points = std::size_t{1} << 24;
  Exec exec = Exec::parallel;
};

/// Sampled values of a grid-backend field on the points origin + j * spacing.
struct FieldMesh {
  Point origin;
  double spacing = 0.0;
  std::vector<std::size_t> extent;
  std::vector<double> values;
};

/// d_t^k d_x^alpha e^{t Delta}[|.|^{-gamma} f], evaluable anywhere (including x = 0).
class HeatField {
 public:
  const FunctionRep& source() const;
  double time() const;
  double gamma() const;
  int k() const;
  const std::vector<int>& alpha() const;
  HeatBackend backend() const;
  int dim() const;

  double operator()(std::span<const double> x) const;
  std::vector<double> evaluate_many(const std::vector<Point>& xs) const;

  /// Grid backend only: the field on its output mesh (coarsen = 1, 2, ... keeps every
  /// coarsen-th point). Memoised; repeated calls return identical values.
  const FieldMesh& mesh(std::size_t coarsen = 1) const;

  /// Grid backend with k = 0 and alpha = 0: e^{s Delta} applied to this field.
  HeatField propagate(double s) const;

  struct Impl;
  explicit HeatField(std::shared_ptr<const Impl> impl);
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

HeatField apply_weighted_heat(const FunctionRep& f, double gamma, double t, int k, std::vector<int> alpha,
                              const HeatOptions& opt = {});
/// alpha = alpha_order * e_1.
HeatField apply_weighted_heat(const FunctionRep& f, double gamma, double t, int k = 0, int alpha_order = 0,
                              const HeatOptions& opt = {});

struct HeatTarget {
  enum class Kind { lebesgue, weak, lorentz };
  Kind kind = Kind::lebesgue;
  double p = 2.0;
  FineIndex r = FineIndex::infinity();

  static HeatTarget lebesgue(double p) { return {Kind::lebesgue, p, FineIndex::infinity()}; }
  static HeatTarget weak(double p) { return {Kind::weak, p, FineIndex::infinity()}; }
  static HeatTarget lorentz(double p, FineIndex r) { return {Kind::lorentz, p, r}; }
};

struct HeatNormOptions {
  NormOptions norm;
  /// Skip closed forms and integrate the field numerically.
  bool force_quadrature = false;
  /// Relative disagreement between mesh resolutions that triggers mesh_underresolved.
  double mesh_tolerance = 0.01;
};

NormValue heat_norm(const HeatField& field, const HeatTarget& target, const HeatNormOptions& opt = {});

}  // namespace morreyheat
