#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "heat_internal.hpp"
#include "morreyheat/error.hpp"
#include "morreyheat/polar.hpp"
#include "morreyheat/quadrature.hpp"

namespace morreyheat {
namespace {

using detail::DerivedBundle;

int order_of(const std::vector<int>& alpha) {
  int total = 0;
  for (int a : alpha) total += a;
  return total;
}

bool is_zero_source(const FunctionRep& f) {
  if (f.amplitude() == 0.0) return true;
  if (auto balls = indicator_balls(f)) return balls->empty();
  if (const auto* g = std::get_if<GridSample>(&f.variant()))
    return std::all_of(g->values.begin(), g->values.end(), [](double v) { return v == 0.0; });
  return false;
}

bool grid_capable(const FunctionRep& f) {
  return std::holds_alternative<GridSample>(f.variant()) || std::holds_alternative<GaussianBump>(f.variant()) ||
         indicator_balls(f).has_value();
}

bool prefers_grid(const FunctionRep& f) {
  return std::holds_alternative<GridSample>(f.variant()) || indicator_balls(f).has_value();
}

double pointwise_value(const HeatField::Impl& m, std::span<const double> x) {
  const FunctionRep& ws = *m.pointwise;
  PolarProblem pb;
  pb.n = m.n;
  pb.pole = zero_point(m.n);
  pb.singular_exponent = origin_singularity(ws);
  pb.features.push_back({Point(x.begin(), x.end()), std::sqrt(m.t)});
  if (const auto* g = std::get_if<GaussianBump>(&m.source.variant()))
    pb.features.push_back({g->center, std::sqrt(g->width)});
  auto integrand = [&](std::span<const double> y) {
    Point d(m.n);
    for (int i = 0; i < m.n; ++i) d[i] = x[i] - y[i];
    return detail::kernel_derivative(m.t, d, m.k, m.alpha) * evaluate(ws, y);
  };
  QuadOptions qo;
  qo.rel_tol = m.options.rel_tol;
  qo.abs_tol = m.options.abs_tol;
  qo.max_intervals = 4000;
  if (auto balls = indicator_balls(m.source)) {
    double total = 0.0;
    for (const Ball& b : *balls) {
      pb.constraints = {b};
      total += polar_integrate(pb, integrand, qo).value;
    }
    return total;
  }
  if (auto sb = support_bound(m.source)) pb.constraints = {*sb};
  return polar_integrate(pb, integrand, qo).value;
}

}  // namespace

double heat_kernel(double t, std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return heat_kernel(t, std::sqrt(r2), static_cast<int>(x.size()));
}

double heat_kernel(double t, double radius, int n) {
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "heat kernel needs t > 0");
  if (n < 1) throw Error(ErrorCode::invalid_argument, "dimension must be positive");
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-radius * radius / (4.0 * t));
}

const char* to_string(HeatBackend backend) {
  switch (backend) {
    case HeatBackend::closed_form: return "closed-form";
    case HeatBackend::radial_quadrature: return "radial-quadrature";
    case HeatBackend::grid_convolution: return "grid-convolution";
  }
  return "unknown";
}

HeatField::HeatField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

const FunctionRep& HeatField::source() const { return impl_->source; }
double HeatField::time() const { return impl_->t; }
double HeatField::gamma() const { return impl_->gamma; }
int HeatField::k() const { return impl_->k; }
const std::vector<int>& HeatField::alpha() const { return impl_->alpha; }
HeatBackend HeatField::backend() const { return impl_->backend; }
int HeatField::dim() const { return impl_->n; }

DerivedBundle HeatField::Impl::derived(double r) const {
  {
    std::shared_lock lock(memo_mutex);
    const auto it = radial_memo.find(r);
    if (it != radial_memo.end()) return it->second;
  }
  const DerivedBundle b = detail::derive(*radial, n, k, t, r);
  std::unique_lock lock(memo_mutex);
  return radial_memo.emplace(r, b).first->second;
}

double HeatField::operator()(std::span<const double> x) const {
  const Impl& m = *impl_;
  if (static_cast<int>(x.size()) != m.n) throw Error(ErrorCode::invalid_argument, "point dimension mismatch");
  if (m.zero) return 0.0;
  if (m.radial) {
    Point y(m.n);
    for (int i = 0; i < m.n; ++i) y[i] = x[i] - m.center[i];
    return detail::directional(m.derived(norm(y)), y, m.alpha);
  }
  if (m.grid) return detail::convolve_at(*m.grid, m.grid_time, m.k, m.alpha, x);
  return pointwise_value(m, x);
}

std::vector<double> HeatField::evaluate_many(const std::vector<Point>& xs) const {
  return map_indices<double>(xs.size(), [&](std::size_t i) { return (*this)(xs[i]); }, impl_->options.exec);
}

const FieldMesh& HeatField::mesh(std::size_t coarsen) const {
  const Impl& m = *impl_;
  if (!m.grid) throw Error(ErrorCode::invalid_argument, "mesh() needs a grid-convolution field");
  if (coarsen == 0) throw Error(ErrorCode::invalid_argument, "coarsen factor must be positive");
  {
    std::shared_lock lock(m.memo_mutex);
    const auto it = m.mesh_memo.find(coarsen);
    if (it != m.mesh_memo.end()) return *it->second;
  }
  FieldMesh built;
  if (coarsen == 1) {
    built = detail::convolve_on_mesh(*m.grid, m.grid_time, m.k, m.alpha, m.options.exec);
  } else {
    const FieldMesh& fine = mesh(1);
    const std::size_t n = fine.extent.size();
    built.origin = fine.origin;
    built.spacing = fine.spacing * static_cast<double>(coarsen);
    built.extent.resize(n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      built.extent[i] = (fine.extent[i] - 1) / coarsen + 1;
      total *= built.extent[i];
    }
    built.values.resize(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat, src = 0, stride = 1;
      for (std::size_t i = n; i-- > 0;) {
        src += (rem % built.extent[i]) * coarsen * stride;
        rem /= built.extent[i];
        stride *= fine.extent[i];
      }
      built.values[flat] = fine.values[src];
    }
  }
  std::unique_lock lock(m.memo_mutex);
  const auto it = m.mesh_memo.emplace(coarsen, std::make_unique<FieldMesh>(std::move(built))).first;
  return *it->second;
}

HeatField HeatField::propagate(double s) const {
  const Impl& m = *impl_;
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::invalid_argument, "propagation time must be positive");
  if (!m.grid || m.k != 0 || order_of(m.alpha) != 0)
    throw Error(ErrorCode::invalid_argument, "propagate needs a grid-convolution field with k = 0 and alpha = 0");
  auto next = std::make_shared<Impl>();
  next->source = m.source;
  next->t = m.t + s;
  next->gamma = m.gamma;
  next->k = 0;
  next->alpha = m.alpha;
  next->backend = HeatBackend::grid_convolution;
  next->n = m.n;
  next->options = m.options;
  next->grid = std::make_shared<const detail::GridPlan>(detail::plan_from_mesh(mesh(1), s, m.options));
  next->grid_time = s;
  return HeatField(next);
}

HeatField apply_weighted_heat(const FunctionRep& f, double gamma, double t, int k, std::vector<int> alpha,
                              const HeatOptions& opt) {
  const int n = f.dim();
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::invalid_argument, "t must be positive and finite");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::invalid_argument, "gamma must be >= 0");
  if (alpha.empty()) alpha.assign(n, 0);
  if (static_cast<int>(alpha.size()) != n) throw Error(ErrorCode::invalid_argument, "alpha length must equal the dimension");
  if (k < 0 || std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; }))
    throw Error(ErrorCode::invalid_argument, "derivative orders must be non-negative");
  if (k > 1 || order_of(alpha) > 2) throw Error(ErrorCode::unsupported_order, "only k <= 1 and |alpha| <= 2 are supported");

  auto impl = std::make_shared<HeatField::Impl>();
  impl->source = f;
  impl->t = t;
  impl->gamma = gamma;
  impl->k = k;
  impl->alpha = alpha;
  impl->n = n;
  impl->options = opt;
  impl->center = zero_point(n);

  const FunctionRep ws = gamma > 0.0 ? FunctionRep::weighted(gamma, f) : f;
  const double sing = origin_singularity(ws);
  if (sing >= n)
    throw Error(ErrorCode::non_integrable_weight,
                "gamma plus the source singularity must stay below the dimension (got " + std::to_string(sing) + ")");

  const std::optional<HeatBackend> want = opt.backend;
  if (is_zero_source(f)) {
    impl->zero = true;
    impl->backend = want.value_or(HeatBackend::closed_form);
    return HeatField(impl);
  }
  const auto* gb = std::get_if<GaussianBump>(&f.variant());
  if (want == HeatBackend::closed_form && !(gb && gamma == 0.0))
    throw Error(ErrorCode::invalid_argument, "closed-form backend needs a Gaussian source with gamma = 0");
  if (want == HeatBackend::grid_convolution && !(gamma == 0.0 && grid_capable(f)))
    throw Error(ErrorCode::invalid_argument,
                "grid backend needs gamma = 0 and a grid sample, indicator union or Gaussian source");

  if (want == HeatBackend::closed_form || (!want && gb && gamma == 0.0)) {
    const double T = gb->width + t;
    const double peak = f.amplitude() * std::pow(gb->width / T, 0.5 * n);
    impl->backend = HeatBackend::closed_form;
    impl->center = gb->center;
    impl->radial = detail::make_gaussian_engine(peak, T, std::sqrt(T));
    return HeatField(impl);
  }
  if (want == HeatBackend::grid_convolution || (!want && gamma == 0.0 && prefers_grid(f))) {
    try {
      impl->grid = std::make_shared<const detail::GridPlan>(detail::plan_grid(f, t, opt));
      impl->grid_time = t;
      impl->backend = HeatBackend::grid_convolution;
      return HeatField(impl);
    } catch (const Error& e) {
      // Too large for a grid: fall through to quadrature unless the grid was requested.
      if (want || e.code() != ErrorCode::invalid_argument) throw;
    }
  }
  impl->backend = HeatBackend::radial_quadrature;
  if (auto profile = origin_radial_profile(ws)) {
    impl->radial = detail::make_profile_engine(n, *profile, t, order_of(alpha) + 2 * k, opt.rel_tol);
    return HeatField(impl);
  }
  if (n > 3) throw Error(ErrorCode::unsupported_dimension, "pointwise quadrature supports n <= 3");
  impl->pointwise = ws;
  return HeatField(impl);
}

HeatField apply_weighted_heat(const FunctionRep& f, double gamma, double t, int k, int alpha_order,
                              const HeatOptions& opt) {
  if (alpha_order < 0) throw Error(ErrorCode::invalid_argument, "derivative orders must be non-negative");
  std::vector<int> alpha(f.dim(), 0);
  alpha[0] = alpha_order;
  return apply_weighted_heat(f, gamma, t, k, std::move(alpha), opt);
}

// ---------------------------------------------------------------------------
// Norms

namespace {

using Impl = HeatField::Impl;

NormValue from_levels(const LevelMeasure& levels, const HeatTarget& target, const NormOptions& opt) {
  if (target.kind == HeatTarget::Kind::weak) return weak_norm_from_levels(levels, target.p, opt);
  return lorentz_norm_from_levels(levels, target.p, target.r, opt);
}

void check_agreement(double fine, double coarse, double tolerance) {
  if (std::abs(fine - coarse) > tolerance * std::abs(fine))
    throw Error(ErrorCode::mesh_underresolved, "norms at two mesh resolutions differ by more than the tolerance (" +
                                                   std::to_string(fine) + " vs " + std::to_string(coarse) + ")");
}

NormValue radial_lebesgue(const Impl& m, double p, const HeatNormOptions& opt) {
  const int n = m.n;
  const double s = m.radial->scale();
  auto F = [&](double r) {
    const double a = detail::angular_power_integral(m.derived(r), n, m.alpha, p);
    return n == 1 ? a : std::pow(r, n - 1) * a;
  };
  QuadOptions qo;
  qo.rel_tol = std::max(opt.norm.rel_tol, 1e-9);
  qo.abs_tol = 0.0;
  qo.max_intervals = 4000;
  const std::vector<double> pts{0.0, 0.25 * s, 0.5 * s, s, 2.0 * s, 4.0 * s, 8.0 * s};
  const QuadResult core = integrate(F, std::span<const double>(pts), qo);
  double total = core.value, err = core.error;

  // Doubling blocks; a geometric block ratio is summed in closed form.
  double lo = 8.0 * s, prev = -1.0, prev_ratio = -1.0;
  bool done = false;
  for (int j = 0; j < 400 && !done; ++j) {
    const QuadResult b = integrate(F, lo, 2.0 * lo, qo);
    total += b.value;
    err += b.error;
    lo *= 2.0;
    if (b.value <= 1e-16 * total) {
      done = true;
      break;
    }
    if (prev > 0.0) {
      const double ratio = b.value / prev;
      if ((ratio > 1.001 && j > 5) || (ratio > 0.999 && j > 30))
        throw Error(ErrorCode::divergent, "L^p integral of the heat field diverges at infinity");
      if (prev_ratio > 0.0 && ratio < 1.0 && std::abs(ratio - prev_ratio) < 1e-4 * ratio) {
        const double tail = b.value * ratio / (1.0 - ratio);
        total += tail;
        err += std::abs(ratio - prev_ratio) * tail / (1.0 - ratio);
        done = true;
        break;
      }
      prev_ratio = ratio;
    }
    prev = b.value;
  }
  if (!done) throw Error(ErrorCode::divergent, "L^p integral of the heat field did not converge at infinity");
  const double value = std::pow(total, 1.0 / p);
  return {value, value * err / (p * std::max(total, 1e-300)), NormMethod::quadrature, std::nullopt};
}

// |V| on 0 and a logarithmic radius grid, until the field is negligible or 1e8 scales out.
void radial_samples(const Impl& m, int per_decade, std::vector<double>& rs, std::vector<double>& vs) {
  const double s = m.radial->scale();
  rs.assign(1, 0.0);
  vs.assign(1, std::abs(m.derived(0.0).v));
  double vmax = vs[0];
  for (int decade = 0; decade < 12; ++decade) {
    std::vector<double> chunk(per_decade);
    for (int i = 0; i < per_decade; ++i)
      chunk[i] = s * 1e-4 * std::pow(10.0, decade + static_cast<double>(i) / per_decade);
    const auto vals = map_indices<double>(
        chunk.size(), [&](std::size_t i) { return std::abs(m.derived(chunk[i]).v); }, m.options.exec);
    for (int i = 0; i < per_decade; ++i) {
      rs.push_back(chunk[i]);
      vs.push_back(vals[i]);
      vmax = std::max(vmax, vals[i]);
    }
    if (chunk.back() > 10.0 * s && vals.back() < 1e-14 * vmax) break;
  }
}

LevelMeasure shell_levels(std::vector<double> rs, std::vector<double> vs, int n) {
  auto R = std::make_shared<const std::vector<double>>(std::move(rs));
  auto V = std::make_shared<const std::vector<double>>(std::move(vs));
  const double vn = unit_ball_volume(n);
  LevelMeasure out;
  out.sup = *std::max_element(V->begin(), V->end());
  out.measure = [R, V, vn, n](double lam) {
    const auto& r = *R;
    const auto& v = *V;
    auto vol = [&](double x) { return vn * std::pow(x, n); };
    // Crossing inside [a, b]: log-log interpolation, linear where a log is unavailable.
    auto cross = [&](double a, double b, double va, double vb) {
      if (a > 0.0 && va > 0.0 && vb > 0.0) return a * std::pow(b / a, std::log(va / lam) / std::log(va / vb));
      return a + (va - lam) / (va - vb) * (b - a);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      const double a = r[i], b = r[i + 1], va = v[i], vb = v[i + 1];
      if (va > lam && vb > lam) total += vol(b) - vol(a);
      else if (va > lam) total += vol(cross(a, b, va, vb)) - vol(a);
      else if (vb > lam) total += vol(b) - vol(cross(a, b, va, vb));
    }
    const std::size_t L = r.size() - 1;
    if (v[L] > lam) {
      const double e = std::log(v[L] / v[L - 1]) / std::log(r[L] / r[L - 1]);
      if (!(e < 0.0)) return std::numeric_limits<double>::infinity();
      total += vol(r[L] * std::pow(lam / v[L], 1.0 / e)) - vol(r[L]);
    }
    return total;
  };
  return out;
}

// Every other sample, keeping the last.
template <class T>
std::vector<T> halve(const std::vector<T>& v) {
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  if ((v.size() - 1) % 2 != 0) out.push_back(v.back());
  return out;
}

NormValue radial_levels_norm(const Impl& m, const HeatTarget& target, const HeatNormOptions& opt) {
  std::vector<double> rs, vs;
  radial_samples(m, 40, rs, vs);
  const NormValue fine = from_levels(shell_levels(rs, vs, m.n), target, opt.norm);
  const NormValue coarse = from_levels(shell_levels(halve(rs), halve(vs), m.n), target, opt.norm);
  check_agreement(fine.value, coarse.value, opt.mesh_tolerance);
  return {fine.value, std::abs(fine.value - coarse.value) + fine.error, NormMethod::quadrature, std::nullopt};
}

// Directional fields: equal-area direction cells times logarithmic radial shells.
LevelMeasure direction_levels(const Impl& m, int per_decade, int angular) {
  const int n = m.n;
  const double s = m.radial->scale();
  std::vector<Point> dirs;
  std::vector<double> dir_weight;
  if (n == 1) {
    dirs = {{1.0}, {-1.0}};
    dir_weight = {1.0, 1.0};
  } else if (n == 2) {
    for (int j = 0; j < 4 * angular; ++j) {
      const double th = (j + 0.5) * 2.0 * std::numbers::pi / (4 * angular);
      dirs.push_back({std::cos(th), std::sin(th)});
      dir_weight.push_back(2.0 * std::numbers::pi / (4 * angular));
    }
  } else if (n == 3) {
    for (int a = 0; a < angular; ++a) {
      const double z = -1.0 + (a + 0.5) * 2.0 / angular;
      const double rho = std::sqrt(1.0 - z * z);
      for (int b = 0; b < 2 * angular; ++b) {
        const double ph = (b + 0.5) * std::numbers::pi / angular;
        dirs.push_back({rho * std::cos(ph), rho * std::sin(ph), z});
        dir_weight.push_back(4.0 * std::numbers::pi / (2.0 * angular * angular));
      }
    }
  } else {
    throw Error(ErrorCode::unsupported_dimension, "directional level sets support n <= 3");
  }
  std::vector<double> rs{0.0};
  for (int i = 0; i <= 12 * per_decade; ++i) rs.push_back(s * 1e-4 * std::pow(10.0, static_cast<double>(i) / per_decade));
  std::vector<double> values, measures;
  double vmax = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double lo = i == 0 ? 0.0 : 0.5 * (rs[i - 1] + rs[i]);
    const double hi = i + 1 < rs.size() ? 0.5 * (rs[i] + rs[i + 1]) : rs[i];
    const double shell = (std::pow(hi, n) - std::pow(lo, n)) / n;
    const DerivedBundle b = m.derived(rs[i]);
    double row_max = 0.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      Point y = dirs[d];
      for (double& c : y) c *= std::max(rs[i], 1e-300);
      const double v = std::abs(detail::directional(b, y, m.alpha));
      values.push_back(v);
      measures.push_back(shell * dir_weight[d]);
      row_max = std::max(row_max, v);
    }
    vmax = std::max(vmax, row_max);
    if (rs[i] > 10.0 * s && row_max < 1e-14 * vmax) break;
  }
  return sampled_level_measure(std::move(values), std::move(measures));
}

NormValue lattice_norm(const FieldMesh& mesh, const HeatTarget& target, const NormOptions& opt) {
  const std::size_t n = mesh.extent.size();
  if (target.kind == HeatTarget::Kind::lebesgue) {
    GridSample g;
    g.spacing = mesh.spacing;
    g.extent = mesh.extent;
    g.values = mesh.values;
    g.origin = mesh.origin;
    for (double& o : g.origin) o -= 0.5 * mesh.spacing;
    return lebesgue_norm(FunctionRep::grid(std::move(g)), target.p, opt);
  }
  const double cell = std::pow(mesh.spacing, static_cast<double>(n));
  return from_levels(sampled_level_measure(mesh.values, std::vector<double>(mesh.values.size(), cell)), target, opt);
}

NormValue mesh_norm(const FieldMesh& fine_mesh, const FieldMesh& coarse_mesh, const HeatTarget& target,
                    const HeatNormOptions& opt) {
  const NormValue fine = lattice_norm(fine_mesh, target, opt.norm);
  const NormValue coarse = lattice_norm(coarse_mesh, target, opt.norm);
  check_agreement(fine.value, coarse.value, opt.mesh_tolerance);
  return {fine.value, std::abs(fine.value - coarse.value) + fine.error, NormMethod::grid, std::nullopt};
}

// Point-by-point fields sampled on a Cartesian lattice over the support plus the kernel tail.
NormValue cartesian_norm(const HeatField& field, const HeatTarget& target, const HeatNormOptions& opt) {
  const Impl& m = field.impl();
  const int n = m.n;
  const auto sb = support_bound(m.source);
  if (!sb) throw Error(ErrorCode::invalid_argument, "sampled heat norms need a source with bounded support");
  const double half = sb->radius + m.options.tail_widths * std::sqrt(m.t);
  constexpr double kMaxPoints = 1 << 16;
  double h = std::sqrt(m.t) / 4.0;
  h = std::max(h, 2.0 * half / (std::pow(kMaxPoints, 1.0 / n) - 1.0));
  FieldMesh mesh;
  mesh.spacing = h;
  mesh.extent.assign(n, static_cast<std::size_t>(std::ceil(2.0 * half / h)) + 1);
  mesh.origin.resize(n);
  for (int i = 0; i < n; ++i) mesh.origin[i] = sb->center[i] - half;
  std::size_t total = 1;
  for (std::size_t e : mesh.extent) total *= e;
  std::vector<Point> xs(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point x(n);
    std::size_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      x[i] = mesh.origin[i] + static_cast<double>(rem % mesh.extent[i]) * h;
      rem /= mesh.extent[i];
    }
    xs[flat] = std::move(x);
  }
  mesh.values = field.evaluate_many(xs);
  FieldMesh coarse;
  coarse.origin = mesh.origin;
  coarse.spacing = 2.0 * h;
  coarse.extent.resize(n);
  std::size_t ctotal = 1;
  for (int i = 0; i < n; ++i) ctotal *= (coarse.extent[i] = (mesh.extent[i] - 1) / 2 + 1);
  coarse.values.resize(ctotal);
  for (std::size_t flat = 0; flat < ctotal; ++flat) {
    std::size_t rem = flat, src = 0, stride = 1;
    for (int i = n - 1; i >= 0; --i) {
      src += (rem % coarse.extent[i]) * 2 * stride;
      rem /= coarse.extent[i];
      stride *= mesh.extent[i];
    }
    coarse.values[flat] = mesh.values[src];
  }
  return mesh_norm(mesh, coarse, target, opt);
}

}  // namespace

NormValue heat_norm(const HeatField& field, const HeatTarget& target, const HeatNormOptions& opt) {
  const Impl& m = field.impl();
  if (!(target.p > 1.0) || !std::isfinite(target.p))
    throw Error(ErrorCode::invalid_argument, "target exponent must be finite and > 1");
  if (m.zero) return {0.0, 0.0, NormMethod::closed_form, std::nullopt};
  const bool plain = m.k == 0 && order_of(m.alpha) == 0;

  if (m.backend == HeatBackend::closed_form && plain && !opt.force_quadrature) {
    const auto& g = std::get<GaussianBump>(m.source.variant());
    const double T = g.width + m.t;
    const FunctionRep u = FunctionRep::gaussian(g.center, T, m.source.amplitude() * std::pow(g.width / T, 0.5 * m.n));
    switch (target.kind) {
      case HeatTarget::Kind::lebesgue: return lebesgue_norm(u, target.p, opt.norm);
      case HeatTarget::Kind::weak: return weak_lebesgue_norm(u, target.p, opt.norm);
      case HeatTarget::Kind::lorentz: return lorentz_norm(u, target.p, target.r, opt.norm);
    }
  }
  if (m.radial) {
    if (target.kind == HeatTarget::Kind::lebesgue) return radial_lebesgue(m, target.p, opt);
    if (order_of(m.alpha) == 0) return radial_levels_norm(m, target, opt);
    const NormValue fine = from_levels(direction_levels(m, 30, 48), target, opt.norm);
    const NormValue coarse = from_levels(direction_levels(m, 15, 24), target, opt.norm);
    check_agreement(fine.value, coarse.value, opt.mesh_tolerance);
    return {fine.value, std::abs(fine.value - coarse.value) + fine.error, NormMethod::quadrature, std::nullopt};
  }
  if (m.grid) return mesh_norm(field.mesh(1), field.mesh(2), target, opt);
  return cartesian_norm(field, target, opt);
}

}  // namespace morreyheat
