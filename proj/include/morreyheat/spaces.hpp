#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "morreyheat/functions.hpp"
#include "morreyheat/kernels.hpp"
#include "morreyheat/scaling.hpp"

namespace morreyheat {

enum class NormMethod { closed_form, quadrature, grid, sup_search };

const char* to_string(NormMethod method);

/// Where a supremum was attained: a ball (center, radius) or, with an empty
/// center, a level of the distribution function.
struct SupWitness {
  Point center;
  double scale = 0.0;
};

struct NormValue {
  double value = 0.0;
  double error = 0.0;
  NormMethod method = NormMethod::closed_form;
  std::optional<SupWitness> witness;
};

struct NormOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  /// Log-spaced search grid: grid_points samples over [lo / grid_span, hi * grid_span].
  std::size_t grid_points = 200;
  double grid_span = 1e4;
  /// A range extension that grows the value by more than this twice in a row is divergent.
  double divergence_growth = 0.01;
  Exec exec = Exec::parallel;
};

NormValue lebesgue_norm(const FunctionRep& f, double p, const NormOptions& opt = {});
NormValue weak_lebesgue_norm(const FunctionRep& f, double p, const NormOptions& opt = {});
/// Literal r-mean of t * lambda_f(t)^{1/p} against dt/t; r = inf is the weak norm.
NormValue lorentz_norm(const FunctionRep& f, double p, FineIndex r, const NormOptions& opt = {});

/// Balls centred at the origin only.
NormValue local_morrey_type_norm(const FunctionRep& f, double p, double q, FineIndex r, const NormOptions& opt = {});
/// Supremum over candidate centres and radii; a certified lower bound for the true sup.
NormValue morrey_norm(const FunctionRep& f, double p, double q, const NormOptions& opt = {});
NormValue global_morrey_type_norm(const FunctionRep& f, double p, double q, FineIndex r, const NormOptions& opt = {});

/// The r-mean (or sup for r = inf) of t^{n/p - n/q} (int_{B(center, t)} |f|^q)^{1/q}.
NormValue morrey_profile_norm(const FunctionRep& f, std::span<const double> center, double p, double q, FineIndex r,
                              const NormOptions& opt = {});

/// A distribution function given directly: measure(level) = |{|g| > level}| and
/// sup = ess sup |g| (infinity when unbounded).
struct LevelMeasure {
  std::function<double(double)> measure;
  double sup = std::numeric_limits<double>::infinity();
};

NormValue weak_norm_from_levels(const LevelMeasure& levels, double p, const NormOptions& opt = {});
NormValue lorentz_norm_from_levels(const LevelMeasure& levels, double p, FineIndex r, const NormOptions& opt = {});

/// Distribution of a sampled function: sample i stands for a cell of measure
/// measures[i]. Each cell is counted half at its own value and the result is
/// interpolated linearly between sample values (second order for monotone fields).
LevelMeasure sampled_level_measure(std::vector<double> values, std::vector<double> measures);

/// Origin, ball centres and their pairwise midpoints, Gaussian centres, grid cell centres.
std::vector<Point> candidate_centers(const FunctionRep& f);

}  // namespace morreyheat
