#include <algorithm>
#include <cmath>

#include "heat_internal.hpp"
#include "morreyheat/error.hpp"
#include "morreyheat/special.hpp"

namespace morreyheat::detail {
namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t x : v) p *= x;
  return p;
}

void check_size(const std::vector<std::size_t>& extent, const HeatOptions& opt) {
  double total = 1.0;
  for (std::size_t e : extent) total *= static_cast<double>(e);
  if (total > static_cast<double>(opt.max_grid_points))
    throw Error(ErrorCode::invalid_argument, "grid backend would need more than max_grid_points samples");
}

// Fraction of the cell [lo, lo + h]^n inside one ball: exact for n = 1, subsampled otherwise.
double cell_fraction(std::span<const double> lo, double h, const Ball& b) {
  const std::size_t n = lo.size();
  double near2 = 0.0, far2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lo[i] - b.center[i], c = a + h;
    const double nearest = (a > 0.0) ? a : (c < 0.0 ? c : 0.0);
    near2 += nearest * nearest;
    far2 += std::max(a * a, c * c);
  }
  const double r2 = b.radius * b.radius;
  if (near2 >= r2) return 0.0;
  if (far2 <= r2) return 1.0;
  if (n == 1) {
    const double a = std::max(lo[0], b.center[0] - b.radius);
    const double c = std::min(lo[0] + h, b.center[0] + b.radius);
    return std::max(0.0, c - a) / h;
  }
  const int m = n == 2 ? 16 : 8;
  std::size_t count = 1, hits = 0;
  for (std::size_t i = 0; i < n; ++i) count *= m;
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rem = idx;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = lo[i] + (static_cast<double>(rem % m) + 0.5) * h / m - b.center[i];
      rem /= m;
      d2 += x * x;
    }
    if (d2 < r2) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(count);
}

// Adds amp * chi_B to the cell tensor. The boundary fractions are rescaled so the
// discrete mass equals the exact ball volume.
void deposit_ball(Tensor& cells, const Point& origin, double h, const Ball& b, double amp) {
  const std::size_t n = origin.size();
  std::vector<std::size_t> first(n), count(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = (b.center[i] - b.radius - origin[i]) / h;
    const double hi = (b.center[i] + b.radius - origin[i]) / h;
    first[i] = static_cast<std::size_t>(std::max(0.0, std::floor(lo)));
    const auto last = std::min(static_cast<std::size_t>(std::ceil(hi)), cells.shape[i]);
    count[i] = last > first[i] ? last - first[i] : 0;
  }
  std::vector<std::pair<std::size_t, double>> touched;
  double full = 0.0, partial = 0.0;
  Point corner(n);
  const std::size_t total = product(count);
  for (std::size_t local = 0; local < total; ++local) {
    std::size_t rem = local, flat = 0, stride = 1;
    for (std::size_t ii = n; ii-- > 0;) {
      const std::size_t idx = first[ii] + rem % count[ii];
      rem /= count[ii];
      corner[ii] = origin[ii] + static_cast<double>(idx) * h;
      flat += idx * stride;
      stride *= cells.shape[ii];
    }
    const double frac = cell_fraction(corner, h, b);
    if (frac == 0.0) continue;
    if (frac == 1.0) full += 1.0;
    else partial += frac;
    touched.emplace_back(flat, frac);
  }
  const double cell_volume = std::pow(h, static_cast<double>(n));
  const double exact = ball_volume(static_cast<int>(n), b.radius) / cell_volume;
  const double scale = (n > 1 && partial > 0.0) ? (exact - full) / partial : 1.0;
  for (const auto& [flat, frac] : touched) cells.data[flat] += amp * (frac == 1.0 ? 1.0 : frac * scale);
}

void extend_output(GridPlan& plan, const std::vector<std::size_t>& src_extent, double out_h, std::size_t sub,
                   double margin, const HeatOptions& opt) {
  const std::size_t n = src_extent.size();
  const auto pad = static_cast<std::size_t>(std::ceil(margin / out_h));
  plan.out_spacing = out_h;
  plan.out_origin.assign(n, 0.0);
  plan.out_extent.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    plan.out_extent[i] = src_extent[i] * sub + 2 * pad;
    // Cells: output points sit at sub-cell centres. Points: the lattice continues.
    const double first = plan.source.cells ? plan.source.origin[i] + 0.5 * out_h : plan.source.origin[i];
    plan.out_origin[i] = first - static_cast<double>(pad) * out_h;
  }
  check_size(plan.out_extent, opt);
}

AxisOperator axis_operator(const GridPlan& plan, std::size_t axis, int order, double t,
                           const std::vector<double>& xs) {
  const GridSource& src = plan.source;
  const std::size_t cols = src.values.shape[axis];
  AxisOperator op(xs.size(), cols);
  const double sq = std::sqrt(t);
  const double h = src.spacing;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    for (std::size_t k = 0; k < cols; ++k) {
      double w;
      if (src.cells) {
        const double a = src.origin[axis] + static_cast<double>(k) * h, b = a + h;
        if (order == 0) {
          // int_a^b g(x - y) dy, written with erfc on the far side to keep tails accurate.
          const double ua = (x - a) / (2.0 * sq), ub = (x - b) / (2.0 * sq);
          if (ub > 0.0) w = 0.5 * (std::erfc(ub) - std::erfc(ua));
          else if (ua < 0.0) w = 0.5 * (std::erfc(-ua) - std::erfc(-ub));
          else w = 0.5 * (std::erf(ua) - std::erf(ub));
        } else {
          w = heat_kernel_1d_derivative(order - 1, t, x - a) - heat_kernel_1d_derivative(order - 1, t, x - b);
        }
      } else {
        w = h * heat_kernel_1d_derivative(order, t, x - (src.origin[axis] + static_cast<double>(k) * h));
      }
      op.at(j, k) = w;
    }
  }
  op.trim(1e-18);
  return op;
}

std::vector<double> axis_points(const GridPlan& plan, std::size_t axis) {
  std::vector<double> xs(plan.out_extent[axis]);
  for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = plan.out_origin[axis] + static_cast<double>(j) * plan.out_spacing;
  return xs;
}

}  // namespace

GridPlan plan_grid(const FunctionRep& f, double t, const HeatOptions& opt) {
  const int n = f.dim();
  const double sq = std::sqrt(t);
  const double target = sq / opt.resolution;
  const double margin = opt.tail_widths * sq;
  const double amp = f.amplitude();
  GridPlan plan;

  if (const auto* g = std::get_if<GridSample>(&f.variant())) {
    plan.source.cells = true;
    plan.source.origin = g->origin;
    plan.source.spacing = g->spacing;
    plan.source.values = Tensor(g->extent);
    for (std::size_t i = 0; i < g->values.size(); ++i) plan.source.values.data[i] = amp * g->values[i];
    const auto sub = static_cast<std::size_t>(std::ceil(g->spacing / target - 1e-9));
    extend_output(plan, g->extent, g->spacing / static_cast<double>(std::max<std::size_t>(sub, 1)),
                  std::max<std::size_t>(sub, 1), margin, opt);
    return plan;
  }
  if (auto balls = indicator_balls(f)) {
    double rmin = balls->front().radius;
    Point lo = balls->front().center, hi = balls->front().center;
    for (const Ball& b : *balls) {
      rmin = std::min(rmin, b.radius);
      for (int i = 0; i < n; ++i) {
        lo[i] = std::min(lo[i], b.center[i] - b.radius);
        hi[i] = std::max(hi[i], b.center[i] + b.radius);
      }
    }
    const double h = std::min(target, rmin / opt.resolution);
    std::vector<std::size_t> extent(n);
    for (int i = 0; i < n; ++i) extent[i] = static_cast<std::size_t>(std::ceil((hi[i] - lo[i]) / h));
    check_size(extent, opt);
    plan.source.cells = true;
    plan.source.origin = lo;
    plan.source.spacing = h;
    plan.source.values = Tensor(extent);
    for (const Ball& b : *balls) deposit_ball(plan.source.values, lo, h, b, amp);
    extend_output(plan, extent, h, 1, margin, opt);
    return plan;
  }
  if (const auto* g = std::get_if<GaussianBump>(&f.variant())) {
    const double h = std::min(target, std::sqrt(g->width) / opt.resolution);
    const double reach = support_bound(f)->radius;
    const auto half = static_cast<std::size_t>(std::ceil(reach / h));
    std::vector<std::size_t> extent(n, 2 * half + 1);
    check_size(extent, opt);
    plan.source.cells = false;
    plan.source.spacing = h;
    plan.source.origin.resize(n);
    for (int i = 0; i < n; ++i) plan.source.origin[i] = g->center[i] - static_cast<double>(half) * h;
    plan.source.values = Tensor(extent);
    Point y(n);
    for (std::size_t flat = 0; flat < plan.source.values.size(); ++flat) {
      std::size_t rem = flat;
      double d2 = 0.0;
      for (int i = n - 1; i >= 0; --i) {
        const double off = (static_cast<double>(rem % extent[i]) - static_cast<double>(half)) * h;
        rem /= extent[i];
        d2 += off * off;
      }
      plan.source.values.data[flat] = amp * std::exp(-d2 / (4.0 * g->width));
    }
    extend_output(plan, extent, h, 1, margin, opt);
    return plan;
  }
  throw Error(ErrorCode::invalid_argument, "grid backend supports grid samples, indicator unions and Gaussians");
}

GridPlan plan_from_mesh(const FieldMesh& mesh, double t, const HeatOptions& opt) {
  const double sq = std::sqrt(t);
  if (mesh.spacing > sq / opt.resolution * (1.0 + 1e-9))
    throw Error(ErrorCode::mesh_underresolved, "mesh spacing exceeds sqrt(t) / resolution for the propagation time");
  GridPlan plan;
  plan.source.cells = false;
  plan.source.origin = mesh.origin;
  plan.source.spacing = mesh.spacing;
  plan.source.values = Tensor(mesh.extent);
  plan.source.values.data = mesh.values;
  extend_output(plan, mesh.extent, mesh.spacing, 1, opt.tail_widths * sq, opt);
  return plan;
}

FieldMesh convolve_on_mesh(const GridPlan& plan, double t, int k, const std::vector<int>& alpha, Exec exec) {
  const std::size_t n = plan.out_extent.size();
  FieldMesh mesh;
  mesh.origin = plan.out_origin;
  mesh.spacing = plan.out_spacing;
  mesh.extent = plan.out_extent;
  mesh.values.assign(product(plan.out_extent), 0.0);
  std::vector<std::vector<double>> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = axis_points(plan, i);
  for (const auto& orders : kernel_terms(static_cast<int>(n), k, alpha)) {
    std::vector<AxisOperator> ops;
    for (std::size_t i = 0; i < n; ++i) ops.push_back(axis_operator(plan, i, orders[i], t, xs[i]));
    const Tensor out = apply_separable(plan.source.values, ops, exec);
    for (std::size_t i = 0; i < out.size(); ++i) mesh.values[i] += out.data[i];
  }
  return mesh;
}

double convolve_at(const GridPlan& plan, double t, int k, const std::vector<int>& alpha, std::span<const double> x) {
  const std::size_t n = plan.out_extent.size();
  double total = 0.0;
  for (const auto& orders : kernel_terms(static_cast<int>(n), k, alpha)) {
    std::vector<AxisOperator> ops;
    for (std::size_t i = 0; i < n; ++i) ops.push_back(axis_operator(plan, i, orders[i], t, {x[i]}));
    total += apply_separable(plan.source.values, ops, Exec::serial).data[0];
  }
  return total;
}

}  // namespace morreyheat::detail
