#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "morreyheat/heat.hpp"
#include "morreyheat/kernels.hpp"

namespace morreyheat::detail {

double abs_value(const FunctionRep& f, std::span<const double> x);

/// Radial derivatives u^{(m)}(r), m = 0..4, and u'(r)/r of a radial field u.
struct RadialBundle {
  std::array<double, 5> d{};
  double d1_over_r = 0.0;
};

/// V = d_t^k u and what the spatial derivatives of the radial field V need.
struct DerivedBundle {
  double v = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v1_over_r = 0.0;
};

class RadialEngine {
 public:
  virtual ~RadialEngine() = default;
  virtual RadialBundle bundle(double r) const = 0;
  /// Length scale beyond which the field is in its far-field regime.
  virtual double scale() const = 0;
};

/// e^{t Delta} of an origin-radial profile by one-dimensional quadrature in rho.
std::shared_ptr<const RadialEngine> make_profile_engine(int n, const RadialProfile& profile, double t, int max_order,
                                                        double rel_tol);
/// B exp(-r^2 / 4T): the heat flow of a Gaussian, exactly.
std::shared_ptr<const RadialEngine> make_gaussian_engine(double peak, double total_time, double scale);

/// d_t^k of the radial field from its radial derivatives (k in {0, 1}).
DerivedBundle derive(const RadialEngine& engine, int n, int k, double t, double r);

/// The Cartesian derivative d^alpha of a radial field V at offset y from its centre.
double directional(const DerivedBundle& b, std::span<const double> y, const std::vector<int>& alpha);

/// int over S^{n-1} of |d^alpha V(r omega)|^s d omega.
double angular_power_integral(const DerivedBundle& b, int n, const std::vector<int>& alpha, double s);

/// One separable term of d_t^k d^alpha G_t: per-axis derivative orders.
std::vector<std::vector<int>> kernel_terms(int n, int k, const std::vector<int>& alpha);

/// d_t^k d^alpha G_t(y) from one-dimensional Hermite factors.
double kernel_derivative(double t, std::span<const double> y, int k, const std::vector<int>& alpha);

struct GridSource {
  bool cells = true;  // piecewise constant cells, or point samples with weight spacing^n
  Point origin;       // lower corner of cell 0, or the location of point 0
  double spacing = 0.0;
  Tensor values;
};

struct GridPlan {
  GridSource source;
  Point out_origin;  // location of output point 0
  double out_spacing = 0.0;
  std::vector<std::size_t> out_extent;
};

GridPlan plan_grid(const FunctionRep& f, double t, const HeatOptions& opt);
GridPlan plan_from_mesh(const FieldMesh& mesh, double t, const HeatOptions& opt);
/// The field on the plan's output mesh.
FieldMesh convolve_on_mesh(const GridPlan& plan, double t, int k, const std::vector<int>& alpha, Exec exec);
double convolve_at(const GridPlan& plan, double t, int k, const std::vector<int>& alpha, std::span<const double> x);

}  // namespace morreyheat::detail

namespace morreyheat {

struct HeatField::Impl {
  FunctionRep source = FunctionRep::zero(1);
  double t = 1.0;
  double gamma = 0.0;
  int k = 0;
  std::vector<int> alpha;
  HeatBackend backend = HeatBackend::closed_form;
  int n = 1;
  HeatOptions options;
  bool zero = false;

  // Radial structure (closed-form Gaussians and origin-radial sources).
  Point center;
  std::shared_ptr<const detail::RadialEngine> radial;
  // Non-radial sources evaluated point by point in polar coordinates about the origin.
  std::optional<FunctionRep> pointwise;
  // Grid convolution.
  std::shared_ptr<const detail::GridPlan> grid;
  // Time the grid plan convolves with (differs from t after propagate).
  double grid_time = 0.0;

  mutable std::shared_mutex memo_mutex;
  mutable std::map<double, detail::DerivedBundle> radial_memo;
  mutable std::map<std::size_t, std::unique_ptr<FieldMesh>> mesh_memo;

  Impl() = default;
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  detail::DerivedBundle derived(double r) const;
};

}  // namespace morreyheat
