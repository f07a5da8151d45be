#include "morreyheat/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "morreyheat/error.hpp"

namespace morreyheat {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gaussian tails are dropped once they fall below 1e-18 of the peak.
double gaussian_reach(double width) { return std::sqrt(4.0 * width * std::log(1e18)); }

int dim_of(const std::vector<Ball>& balls) {
  if (balls.empty()) throw Error(ErrorCode::invalid_argument, "cannot infer dimension from an empty ball list");
  return static_cast<int>(balls.front().center.size());
}

void require(bool cond, const char* message) {
  if (!cond) throw Error(ErrorCode::invalid_argument, message);
}

bool is_origin(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

}  // namespace

std::size_t GridSample::cell_count() const {
  return std::accumulate(extent.begin(), extent.end(), std::size_t{1}, std::multiplies<>());
}

Point GridSample::cell_center(std::size_t flat_index) const {
  Point c(origin.size());
  for (std::size_t axis = origin.size(); axis-- > 0;) {
    const std::size_t i = flat_index % extent[axis];
    flat_index /= extent[axis];
    c[axis] = origin[axis] + (static_cast<double>(i) + 0.5) * spacing;
  }
  return c;
}

FunctionRep::FunctionRep(int dim, double amplitude, Variant rep) : dim_(dim), amplitude_(amplitude), rep_(std::move(rep)) {
  require(dim >= 1, "dimension must be positive");
  require(std::isfinite(amplitude), "amplitude must be finite");
}

FunctionRep FunctionRep::radial_power(int dim, double exponent, std::optional<double> inner_cut,
                                      std::optional<double> outer_cut, double amplitude) {
  require(exponent > 0.0 && std::isfinite(exponent), "radial power exponent must be positive");
  if (inner_cut && *inner_cut <= 0.0) inner_cut.reset();
  if (outer_cut) require(*outer_cut > 0.0, "outer cut must be positive");
  if (inner_cut && outer_cut) require(*outer_cut > *inner_cut, "outer cut must exceed inner cut");
  return FunctionRep(dim, amplitude, RadialPower{exponent, inner_cut, outer_cut});
}

FunctionRep FunctionRep::gaussian(Point center, double width, double amplitude) {
  require(width > 0.0 && std::isfinite(width), "gaussian width must be positive");
  const int dim = static_cast<int>(center.size());
  return FunctionRep(dim, amplitude, GaussianBump{std::move(center), width});
}

FunctionRep FunctionRep::indicator(std::vector<Ball> balls, double amplitude) {
  const int dim = dim_of(balls);
  return indicator(dim, std::move(balls), amplitude);
}

FunctionRep FunctionRep::indicator(int dim, std::vector<Ball> balls, double amplitude) {
  for (const Ball& b : balls) {
    require(static_cast<int>(b.center.size()) == dim, "ball centre dimension mismatch");
    require(b.radius > 0.0 && std::isfinite(b.radius), "ball radius must be positive");
  }
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if (distance(balls[i].center, balls[j].center) < balls[i].radius + balls[j].radius)
        throw Error(ErrorCode::overlap_detected, "indicator balls must be pairwise disjoint");
  return FunctionRep(dim, amplitude, IndicatorBallUnion{std::move(balls)});
}

FunctionRep FunctionRep::spaced_balls(int dim, int order, double amplitude) {
  require(order >= 0, "truncation order must be non-negative");
  require(order <= 300, "truncation order too large for double precision centres");
  return FunctionRep(dim, amplitude, SpacedBallsG{order});
}

FunctionRep FunctionRep::grid(GridSample sample, double amplitude) {
  require(sample.spacing > 0.0 && std::isfinite(sample.spacing), "grid spacing must be positive");
  require(!sample.origin.empty() && sample.extent.size() == sample.origin.size(), "grid origin/extent mismatch");
  require(sample.cell_count() == sample.values.size(), "grid values do not match extent");
  for (double v : sample.values) require(std::isfinite(v), "grid values must be finite");
  const int dim = static_cast<int>(sample.origin.size());
  return FunctionRep(dim, amplitude, std::move(sample));
}

FunctionRep FunctionRep::weighted(double gamma, FunctionRep inner, double amplitude) {
  require(gamma >= 0.0 && std::isfinite(gamma), "weight exponent must be >= 0");
  const int dim = inner.dim();
  return FunctionRep(dim, amplitude, Weighted{gamma, std::make_shared<const FunctionRep>(std::move(inner))});
}

FunctionRep FunctionRep::zero(int dim) { return FunctionRep(dim, 0.0, IndicatorBallUnion{}); }

std::string FunctionRep::variant_name() const {
  static const char* names[] = {"RadialPower", "GaussianBump", "IndicatorBallUnion",
                                "SpacedBallsG", "GridSample", "Weighted"};
  return names[rep_.index()];
}

FunctionRep FunctionRep::scaled(double factor) const {
  FunctionRep out = *this;
  out.amplitude_ *= factor;
  return out;
}

FunctionRep FunctionRep::translated(std::span<const double> shift) const {
  require(static_cast<int>(shift.size()) == dim_, "shift dimension mismatch");
  if (is_origin(shift)) return *this;
  if (const auto* g = std::get_if<GaussianBump>(&rep_))
    return gaussian(morreyheat::translated(g->center, shift), g->width, amplitude_);
  if (const auto* grid_rep = std::get_if<GridSample>(&rep_)) {
    GridSample moved = *grid_rep;
    moved.origin = morreyheat::translated(moved.origin, shift);
    return grid(std::move(moved), amplitude_);
  }
  if (auto balls = indicator_balls(*this)) {
    for (Ball& b : *balls) b.center = morreyheat::translated(b.center, shift);
    return indicator(dim_, std::move(*balls), amplitude_);
  }
  throw Error(ErrorCode::invalid_argument, variant_name() + " is anchored at the origin and cannot be translated");
}

FunctionRep FunctionRep::dilated(double lambda) const {
  require(lambda > 0.0 && std::isfinite(lambda), "dilation factor must be positive");
  auto shrink = [lambda](Point p) {
    for (double& v : p) v /= lambda;
    return p;
  };
  if (const auto* rp = std::get_if<RadialPower>(&rep_)) {
    std::optional<double> in = rp->inner_cut, out = rp->outer_cut;
    if (in) *in /= lambda;
    if (out) *out /= lambda;
    return radial_power(dim_, rp->exponent, in, out, amplitude_ * std::pow(lambda, -rp->exponent));
  }
  if (const auto* g = std::get_if<GaussianBump>(&rep_))
    return gaussian(shrink(g->center), g->width / (lambda * lambda), amplitude_);
  if (const auto* grid_rep = std::get_if<GridSample>(&rep_)) {
    GridSample d = *grid_rep;
    d.origin = shrink(d.origin);
    d.spacing /= lambda;
    return grid(std::move(d), amplitude_);
  }
  if (const auto* w = std::get_if<Weighted>(&rep_))
    return weighted(w->gamma, w->inner->dilated(lambda), amplitude_ * std::pow(lambda, -w->gamma));
  auto balls = *indicator_balls(*this);
  for (Ball& b : balls) {
    b.center = shrink(b.center);
    b.radius /= lambda;
  }
  return indicator(dim_, std::move(balls), amplitude_);
}

double RadialProfile::operator()(double rho) const {
  if (amplitude == 0.0) return 0.0;
  if (rho < inner || rho > outer) return 0.0;
  double v = amplitude;
  if (power > 0.0) {
    if (rho == 0.0) return kInf;
    v *= std::pow(rho, -power);
  }
  if (has_gaussian()) v *= std::exp(-rho * rho / (4.0 * gauss_width));
  return v;
}

bool RadialProfile::has_gaussian() const { return std::isfinite(gauss_width); }

std::optional<RadialProfile> origin_radial_profile(const FunctionRep& f) {
  RadialProfile p;
  p.amplitude = f.amplitude();
  if (f.amplitude() == 0.0) {
    p.outer = 0.0;
    return p;
  }
  const auto& rep = f.variant();
  if (const auto* rp = std::get_if<RadialPower>(&rep)) {
    p.power = rp->exponent;
    p.inner = rp->inner_cut.value_or(0.0);
    p.outer = rp->outer_cut.value_or(kInf);
    return p;
  }
  if (const auto* g = std::get_if<GaussianBump>(&rep)) {
    if (!is_origin(g->center)) return std::nullopt;
    p.gauss_width = g->width;
    return p;
  }
  if (const auto* w = std::get_if<Weighted>(&rep)) {
    auto inner = origin_radial_profile(*w->inner);
    if (!inner) return std::nullopt;
    inner->amplitude *= f.amplitude();
    inner->power += w->gamma;
    return inner;
  }
  if (std::holds_alternative<IndicatorBallUnion>(rep) || std::holds_alternative<SpacedBallsG>(rep)) {
    const auto balls = *indicator_balls(f);
    if (balls.empty()) {
      p.amplitude = 0.0;
      p.outer = 0.0;
      return p;
    }
    if (balls.size() != 1 || !is_origin(balls.front().center)) return std::nullopt;
    p.outer = balls.front().radius;
    return p;
  }
  return std::nullopt;
}

std::optional<std::vector<Ball>> indicator_balls(const FunctionRep& f) {
  if (const auto* u = std::get_if<IndicatorBallUnion>(&f.variant())) return u->balls;
  if (const auto* g = std::get_if<SpacedBallsG>(&f.variant())) {
    const int n = f.dim();
    std::vector<Ball> balls;
    balls.push_back({zero_point(n), 1.0});
    for (int j = 1; j <= g->order; ++j) {
      const double offset = std::pow(10.0, j);
      for (double sign : {1.0, -1.0}) {
        Point c = zero_point(n);
        c[0] = sign * offset;
        balls.push_back({std::move(c), 1.0});
      }
    }
    return balls;
  }
  return std::nullopt;
}

std::optional<Ball> support_bound(const FunctionRep& f) {
  const int n = f.dim();
  const auto& rep = f.variant();
  if (const auto* rp = std::get_if<RadialPower>(&rep)) {
    if (!rp->outer_cut) return std::nullopt;
    return Ball{zero_point(n), *rp->outer_cut};
  }
  if (const auto* g = std::get_if<GaussianBump>(&rep)) return Ball{g->center, gaussian_reach(g->width)};
  if (const auto* w = std::get_if<Weighted>(&rep)) return support_bound(*w->inner);
  if (const auto* grid_rep = std::get_if<GridSample>(&rep)) {
    Point c(grid_rep->origin.size());
    double half_diag = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double len = grid_rep->spacing * static_cast<double>(grid_rep->extent[i]);
      c[i] = grid_rep->origin[i] + 0.5 * len;
      half_diag += 0.25 * len * len;
    }
    return Ball{c, std::sqrt(half_diag)};
  }
  if (const auto* g = std::get_if<SpacedBallsG>(&rep)) return Ball{zero_point(n), std::pow(10.0, g->order) + 1.0};
  const auto balls = *indicator_balls(f);
  if (balls.empty()) return Ball{zero_point(n), 0.0};
  Point lo = balls.front().center, hi = balls.front().center;
  for (const Ball& b : balls)
    for (int i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], b.center[i] - b.radius);
      hi[i] = std::max(hi[i], b.center[i] + b.radius);
    }
  Point c(n);
  for (int i = 0; i < n; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  double r = 0.0;
  for (const Ball& b : balls) r = std::max(r, distance(c, b.center) + b.radius);
  return Ball{c, r};
}

namespace {

bool touches_origin(const FunctionRep& f) {
  const auto& rep = f.variant();
  if (f.amplitude() == 0.0) return false;
  if (const auto* rp = std::get_if<RadialPower>(&rep)) return !rp->inner_cut;
  if (std::holds_alternative<GaussianBump>(rep)) return true;
  if (const auto* w = std::get_if<Weighted>(&rep)) return touches_origin(*w->inner);
  if (const auto* g = std::get_if<GridSample>(&rep)) {
    for (std::size_t i = 0; i < g->origin.size(); ++i)
      if (g->origin[i] > 0.0 || g->origin[i] + g->spacing * static_cast<double>(g->extent[i]) < 0.0) return false;
    return true;
  }
  const std::vector<Ball> balls = *indicator_balls(f);
  for (const Ball& b : balls)
    if (norm(b.center) <= b.radius) return true;
  return false;
}

}  // namespace

double origin_singularity(const FunctionRep& f) {
  if (f.amplitude() == 0.0) return 0.0;
  const auto& rep = f.variant();
  if (const auto* rp = std::get_if<RadialPower>(&rep)) return rp->inner_cut ? 0.0 : rp->exponent;
  if (const auto* w = std::get_if<Weighted>(&rep)) {
    if (!touches_origin(*w->inner)) return 0.0;
    return w->gamma + origin_singularity(*w->inner);
  }
  return 0.0;
}

namespace detail {

// |f(x)| with +inf at an essential singularity instead of throwing.
double abs_value(const FunctionRep& f, std::span<const double> x) {
  const double a = std::abs(f.amplitude());
  if (a == 0.0) return 0.0;
  const auto& rep = f.variant();
  if (const auto* rp = std::get_if<RadialPower>(&rep)) {
    const double r = norm(x);
    if (rp->inner_cut && r < *rp->inner_cut) return 0.0;
    if (rp->outer_cut && r > *rp->outer_cut) return 0.0;
    if (r == 0.0) return kInf;
    return a * std::pow(r, -rp->exponent);
  }
  if (const auto* g = std::get_if<GaussianBump>(&rep)) {
    const double d = distance(x, g->center);
    return a * std::exp(-d * d / (4.0 * g->width));
  }
  if (const auto* u = std::get_if<IndicatorBallUnion>(&rep)) {
    for (const Ball& b : u->balls)
      if (distance(x, b.center) < b.radius) return a;
    return 0.0;
  }
  if (const auto* sg = std::get_if<SpacedBallsG>(&rep)) {
    // Only the ball nearest along e_1 can contain x.
    double off = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) off += x[i] * x[i];
    auto inside = [&](double c) { return (x[0] - c) * (x[0] - c) + off < 1.0; };
    if (inside(0.0)) return a;
    for (int j = 1; j <= sg->order; ++j) {
      const double c = std::pow(10.0, j);
      if (inside(c) || inside(-c)) return a;
    }
    return 0.0;
  }
  if (const auto* g = std::get_if<GridSample>(&rep)) {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < g->origin.size(); ++i) {
      const double rel = (x[i] - g->origin[i]) / g->spacing;
      if (!(rel >= 0.0) || rel >= static_cast<double>(g->extent[i])) return 0.0;
      flat = flat * g->extent[i] + static_cast<std::size_t>(rel);
    }
    return a * std::abs(g->values[flat]);
  }
  const auto& w = std::get<Weighted>(rep);
  const double inner = abs_value(*w.inner, x);
  if (inner == 0.0) return 0.0;
  if (w.gamma == 0.0) return a * inner;
  const double r = norm(x);
  if (r == 0.0) return kInf;
  return a * std::pow(r, -w.gamma) * inner;
}

}  // namespace detail

double evaluate(const FunctionRep& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) throw Error(ErrorCode::invalid_argument, "point dimension mismatch");
  const double v = detail::abs_value(f, x);
  if (std::isinf(v)) throw Error(ErrorCode::singular_point, "evaluated at the essential singularity");
  // Every representable function is non-negative up to its amplitude sign; grids keep their own sign.
  double sign = f.amplitude() < 0.0 ? -1.0 : 1.0;
  if (const auto* g = std::get_if<GridSample>(&f.variant()); g && v != 0.0) {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < g->origin.size(); ++i)
      flat = flat * g->extent[i] + static_cast<std::size_t>((x[i] - g->origin[i]) / g->spacing);
    if (g->values[flat] < 0.0) sign = -sign;
  }
  return sign * v;
}

std::optional<StepDistribution> step_distribution(const FunctionRep& f) {
  const double a = std::abs(f.amplitude());
  StepDistribution out;
  if (auto balls = indicator_balls(f)) {
    if (a == 0.0 || balls->empty()) return out;
    double vol = 0.0;
    for (const Ball& b : *balls) vol += ball_volume(f.dim(), b.radius);
    out.values.push_back(a);
    out.measures.push_back(vol);
    return out;
  }
  if (const auto* g = std::get_if<GridSample>(&f.variant())) {
    if (a == 0.0) return out;
    std::vector<double> mags;
    mags.reserve(g->values.size());
    for (double v : g->values)
      if (v != 0.0) mags.push_back(a * std::abs(v));
    std::sort(mags.begin(), mags.end());
    const double cell = std::pow(g->spacing, f.dim());
    // Walk from the top: measure{|f| >= v} counts every cell at or above v.
    std::size_t i = mags.size();
    while (i > 0) {
      const double v = mags[i - 1];
      std::size_t j = i;
      while (j > 0 && mags[j - 1] == v) --j;
      out.values.push_back(v);
      out.measures.push_back(static_cast<double>(mags.size() - j) * cell);
      i = j;
    }
    std::reverse(out.values.begin(), out.values.end());
    std::reverse(out.measures.begin(), out.measures.end());
    return out;
  }
  return std::nullopt;
}

}  // namespace morreyheat
