#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "morreyheat/geometry.hpp"

namespace morreyheat {

class FunctionRep;

/// |x|^{-exponent} restricted to inner_cut <= |x| <= outer_cut.
struct RadialPower {
  double exponent = 1.0;
  std::optional<double> inner_cut;
  std::optional<double> outer_cut;
};

/// exp(-|x - center|^2 / (4 width)).
struct GaussianBump {
  Point center;
  double width = 1.0;
};

/// Indicator of a union of pairwise disjoint balls.
struct IndicatorBallUnion {
  std::vector<Ball> balls;
};

/// chi_{B(1)} plus the unit balls centred at +-10^j e_1 for j = 1..order.
struct SpacedBallsG {
  int order = 0;
};

/// Piecewise constant on the cells [origin + i h, origin + (i + 1) h), zero outside.
/// Values are row-major with the first axis slowest.
struct GridSample {
  Point origin;
  double spacing = 1.0;
  std::vector<std::size_t> extent;
  std::vector<double> values;

  std::size_t cell_count() const;
  Point cell_center(std::size_t flat_index) const;
};

/// |x|^{-gamma} times the inner function.
struct Weighted {
  double gamma = 0.0;
  std::shared_ptr<const FunctionRep> inner;
};

/// Immutable representable function: amplitude times one of the closed family above.
class FunctionRep {
 public:
  using Variant = std::variant<RadialPower, GaussianBump, IndicatorBallUnion, SpacedBallsG, GridSample, Weighted>;

  static FunctionRep radial_power(int dim, double exponent, std::optional<double> inner_cut = std::nullopt,
                                  std::optional<double> outer_cut = std::nullopt, double amplitude = 1.0);
  static FunctionRep gaussian(Point center, double width, double amplitude = 1.0);
  static FunctionRep indicator(std::vector<Ball> balls, double amplitude = 1.0);
  static FunctionRep indicator(int dim, std::vector<Ball> balls, double amplitude = 1.0);
  static FunctionRep spaced_balls(int dim, int order, double amplitude = 1.0);
  static FunctionRep grid(GridSample sample, double amplitude = 1.0);
  static FunctionRep weighted(double gamma, FunctionRep inner, double amplitude = 1.0);
  static FunctionRep zero(int dim);

  int dim() const noexcept { return dim_; }
  double amplitude() const noexcept { return amplitude_; }
  const Variant& variant() const noexcept { return rep_; }
  std::string variant_name() const;

  FunctionRep scaled(double factor) const;
  /// x -> f(x - shift). Origin-anchored variants (RadialPower, Weighted) cannot move.
  FunctionRep translated(std::span<const double> shift) const;
  /// x -> f(lambda x), lambda > 0.
  FunctionRep dilated(double lambda) const;

 private:
  FunctionRep(int dim, double amplitude, Variant rep);
  int dim_ = 1;
  double amplitude_ = 1.0;
  Variant rep_;
};

/// phi(rho) = amplitude * rho^{-power} * exp(-rho^2 / (4 gauss_width)) on inner <= rho <= outer.
/// gauss_width = inf means no Gaussian factor; outer = inf means no outer cut.
struct RadialProfile {
  double amplitude = 1.0;
  double power = 0.0;
  double gauss_width = std::numeric_limits<double>::infinity();
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();

  double operator()(double rho) const;
  bool has_gaussian() const;
  bool singular_at_origin() const { return power > 0.0 && inner == 0.0; }
};

/// Radial description when f is radial about the origin (RadialPower, centred Gaussian,
/// one ball at the origin, weighted versions of those).
std::optional<RadialProfile> origin_radial_profile(const FunctionRep& f);

/// The generating balls of indicator variants (IndicatorBallUnion, SpacedBallsG).
std::optional<std::vector<Ball>> indicator_balls(const FunctionRep& f);

/// A ball outside of which f vanishes (Gaussians: below 1e-18 of the peak).
std::optional<Ball> support_bound(const FunctionRep& f);

/// Exponent of the point singularity at the origin (0 if bounded there).
double origin_singularity(const FunctionRep& f);

double evaluate(const FunctionRep& f, std::span<const double> x);

struct IntegralValue {
  double value = 0.0;
  double error = 0.0;
  bool exact = false;
};

struct IntegrationOptions {
  bool force_quadrature = false;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
};

/// int_{B(center, radius)} |f|^power.
IntegralValue ball_integral(const FunctionRep& f, std::span<const double> center, double radius, double power,
                            const IntegrationOptions& opt = {});

/// int_{R^n} |f|^power (finite-support or closed-form cases).
IntegralValue whole_space_integral(const FunctionRep& f, double power, const IntegrationOptions& opt = {});

struct DistributionValue {
  double measure = 0.0;
  bool exact = false;
};

/// Lebesgue measure of {|f| > level}.
DistributionValue distribution(const FunctionRep& f, double level);

struct DistributionProfile {
  std::vector<double> levels;
  std::vector<double> measures;
  std::vector<bool> exact;
};

DistributionProfile distribution_profile(const FunctionRep& f, std::span<const double> levels);

/// Step-function view of |f|: sorted distinct positive values v_1 < ... < v_m and
/// measure{|f| >= v_k}. Available for indicator and grid variants.
struct StepDistribution {
  std::vector<double> values;
  std::vector<double> measures;
};

std::optional<StepDistribution> step_distribution(const FunctionRep& f);

nlohmann::json to_json(const FunctionRep& f);
/// Dimension comes from "dim", from centres/origins, or from dim_hint.
FunctionRep function_from_json(const nlohmann::json& j, std::optional<int> dim_hint = std::nullopt);

}  // namespace morreyheat
