#include "morreyheat/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "morreyheat/error.hpp"
#include "morreyheat/quadrature.hpp"
#include "morreyheat/special.hpp"

namespace morreyheat {

const char* to_string(NormMethod method) {
  switch (method) {
    case NormMethod::closed_form: return "closed-form";
    case NormMethod::quadrature: return "quadrature";
    case NormMethod::grid: return "grid";
    case NormMethod::sup_search: return "sup-search";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDecades = 4.0;  // length of one range extension, in decades

void check_exponent(double p, const char* name) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, std::string(name) + " must be >= 1");
}

NormMethod method_for(const FunctionRep& f, bool exact) {
  if (std::holds_alternative<GridSample>(f.variant())) return NormMethod::grid;
  return exact ? NormMethod::closed_form : NormMethod::quadrature;
}

// x^{1/r} with the error propagated to first order.
NormValue root_of(double integral, double error, double r, NormMethod method) {
  NormValue out;
  out.method = method;
  out.value = integral > 0.0 ? std::pow(integral, 1.0 / r) : 0.0;
  out.error = (method == NormMethod::closed_form || integral <= 0.0) ? 0.0 : out.value * error / (r * integral);
  return out;
}

struct Accum {
  double value = 0.0;
  double error = 0.0;
  bool exact = true;
};

// int h(t) dt/t over [lo, hi] in u = log t, optionally extended in 4-decade blocks
// until the added mass is negligible. Two consecutive blocks adding more than
// `growth` of the running total mean divergence in that direction.
Accum log_integral(const std::function<double(double)>& h, double lo, double hi, bool extend_lo, bool extend_hi,
                   std::vector<double> breaks, const NormOptions& opt) {
  QuadOptions qo;
  qo.rel_tol = opt.rel_tol;
  qo.abs_tol = opt.abs_tol;
  auto g = [&](double u) { return h(std::exp(u)); };
  std::vector<double> pts;
  for (double b : breaks)
    if (b > 0.0 && std::isfinite(b)) pts.push_back(std::log(b));
  pts = clip_breakpoints(pts, std::log(lo), std::log(hi));
  const QuadResult core = integrate(g, std::span<const double>(pts), qo);
  Accum acc{core.value, core.error, false};
  const double step = kDecades * std::log(10.0);
  auto extend = [&](double start, double dir, const char* direction) {
    bool previous_big = false;
    double u = start;
    for (int i = 0; i < 170; ++i) {
      const double next = u + dir * step;
      if (std::abs(next) > 700.0) break;
      const QuadResult piece = integrate(g, std::min(u, next), std::max(u, next), qo);
      const double before = std::abs(acc.value);
      acc.value += piece.value;
      acc.error += piece.error;
      u = next;
      if (piece.value == 0.0) break;
      const double growth = before > 0.0 ? std::abs(piece.value) / before : kInf;
      if (growth > opt.divergence_growth) {
        if (previous_big) throw Error(ErrorCode::divergent, std::string("integral diverges as ") + direction);
        previous_big = true;
      } else {
        previous_big = false;
        if (growth < 0.1 * opt.rel_tol) break;
      }
    }
  };
  if (extend_lo) extend(std::log(lo), -1.0, "t -> 0");
  if (extend_hi) extend(std::log(hi), 1.0, "t -> infinity");
  return acc;
}

struct SupResult {
  double value = 0.0;
  double argmax = 0.0;
};

// Sup of h over t > 0 from a log grid on [lo, hi], widened while the argmax sits
// on an open edge, then refined by golden section in log t.
SupResult search_sup(const std::function<double(double)>& h, double lo, double hi, bool extend_lo, bool extend_hi,
                     const NormOptions& opt) {
  const std::vector<double> ts = log_grid(lo, hi, std::max<std::size_t>(opt.grid_points, 3));
  const std::vector<double> vs = map_indices<double>(ts.size(), [&](std::size_t i) { return h(ts[i]); }, opt.exec);
  std::size_t best = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  SupResult out{vs[best], ts[best]};
  const double ratio = ts[1] / ts[0];

  auto widen = [&](bool downward) {
    const char* direction = downward ? "t -> 0" : "t -> infinity";
    bool previous_big = false;
    double edge = out.argmax;
    for (int i = 0; i < 170; ++i) {
      const double factor = std::pow(10.0, kDecades);
      double block_best = 0.0, block_arg = edge;
      const std::size_t m = 41;
      for (std::size_t k = 1; k <= m; ++k) {
        const double t = downward ? edge / std::pow(factor, double(k) / m) : edge * std::pow(factor, double(k) / m);
        if (!(t > 1e-300 && t < 1e300)) continue;
        const double v = h(t);
        if (v > block_best) {
          block_best = v;
          block_arg = t;
        }
      }
      edge = downward ? edge / factor : edge * factor;
      if (!(edge > 1e-300 && edge < 1e300)) break;
      if (block_best <= out.value) break;
      const double growth = out.value > 0.0 ? block_best / out.value - 1.0 : kInf;
      out = {block_best, block_arg};
      if (growth > opt.divergence_growth) {
        if (previous_big) throw Error(ErrorCode::unbounded, std::string("supremum grows without bound as ") + direction);
        previous_big = true;
      } else {
        previous_big = false;
        if (growth < opt.rel_tol) break;
      }
    }
  };
  if (best == 0 && extend_lo) widen(true);
  if (best + 1 == ts.size() && extend_hi) widen(false);

  const double a = std::log(out.argmax / ratio), b = std::log(out.argmax * ratio);
  const GoldenResult g = golden_section_max([&](double u) { return h(std::exp(u)); }, a, b, 1e-12, 200);
  if (g.value > out.value) out = {g.value, std::exp(g.argmax)};
  return out;
}

// Characteristic length scales of f as seen from `center`.
std::pair<double, double> length_scales(const FunctionRep& f, std::span<const double> center) {
  std::vector<double> s;
  auto add = [&s](double v) {
    if (v > 0.0 && std::isfinite(v)) s.push_back(v);
  };
  const FunctionRep* cur = &f;
  while (const auto* w = std::get_if<Weighted>(&cur->variant())) cur = w->inner.get();
  if (const auto* rp = std::get_if<RadialPower>(&cur->variant())) {
    if (rp->inner_cut) add(*rp->inner_cut);
    if (rp->outer_cut) add(*rp->outer_cut);
  }
  if (const auto* g = std::get_if<GaussianBump>(&cur->variant())) {
    add(std::sqrt(g->width));
    add(distance(center, g->center));
  }
  if (const auto* g = std::get_if<GridSample>(&cur->variant())) add(g->spacing);
  if (auto balls = indicator_balls(*cur)) {
    for (const Ball& b : *balls) {
      add(b.radius);
      add(distance(center, b.center) + b.radius);
    }
  }
  if (auto bound = support_bound(*cur)) add(distance(center, bound->center) + bound->radius);
  add(norm(center));
  if (s.empty()) return {1.0, 1.0};
  return {*std::min_element(s.begin(), s.end()), *std::max_element(s.begin(), s.end())};
}

// ---------------------------------------------------------------------------
// Distribution-function norms.

double gaussian_width_of(const FunctionRep& f) {
  if (const auto* g = std::get_if<GaussianBump>(&f.variant())) return g->width;
  return -1.0;
}

// For |x|^{-beta} on [0, outer] (outer possibly inf), no inner cut, no Gaussian factor.
std::optional<RadialProfile> pure_power_profile(const FunctionRep& f) {
  auto prof = origin_radial_profile(f);
  if (!prof || prof->has_gaussian() || prof->inner > 0.0 || prof->power <= 0.0) return std::nullopt;
  return prof;
}

std::function<double(double)> level_function(const FunctionRep& f, double p) {
  return [&f, p](double level) {
    const double m = distribution(f, level).measure;
    return m > 0.0 ? level * std::pow(m, 1.0 / p) : 0.0;
  };
}

// Bounds on the levels worth scanning: (lo, hi, sup is finite).
std::tuple<double, double, bool> level_range(const FunctionRep& f) {
  const double a = std::abs(f.amplitude());
  if (auto prof = origin_radial_profile(f)) {
    RadialProfile q = *prof;
    q.amplitude = a;
    const double top = q(q.inner);
    if (std::isfinite(top)) return {top * 1e-12, top, true};
  }
  return {a * 1e-8, a * 1e8, false};
}

}  // namespace

NormValue lebesgue_norm(const FunctionRep& f, double p, const NormOptions& opt) {
  check_exponent(p, "p");
  if (f.amplitude() == 0.0) return {};
  IntegrationOptions io;
  io.rel_tol = opt.rel_tol;
  io.abs_tol = opt.abs_tol;
  const IntegralValue iv = whole_space_integral(f, p, io);
  return root_of(iv.value, iv.error, p, method_for(f, iv.exact));
}

NormValue weak_lebesgue_norm(const FunctionRep& f, double p, const NormOptions& opt) {
  check_exponent(p, "p");
  const int n = f.dim();
  const double a = std::abs(f.amplitude());
  if (a == 0.0) return {};
  if (auto step = step_distribution(f)) {
    // On [v_{k-1}, v_k) the measure is M_k, so the sup over that piece is v_k M_k^{1/p}.
    NormValue out;
    out.method = method_for(f, true);
    for (std::size_t k = 0; k < step->values.size(); ++k) {
      const double v = step->values[k] * std::pow(step->measures[k], 1.0 / p);
      if (v > out.value) {
        out.value = v;
        out.witness = SupWitness{{}, step->values[k]};
      }
    }
    return out;
  }
  if (const double w = gaussian_width_of(f); w > 0.0) {
    // t = a e^{-y}: t lambda(t)^{1/p} = a e^{-y} (v_n (4 w y)^{n/2})^{1/p}, maximal at y = n / (2p).
    const double y = n / (2.0 * p);
    NormValue out;
    out.value = a * std::exp(-y) * std::pow(unit_ball_volume(n) * std::pow(4.0 * w * y, 0.5 * n), 1.0 / p);
    out.witness = SupWitness{{}, a * std::exp(-y)};
    return out;
  }
  if (auto prof = pure_power_profile(f)) {
    const double beta = prof->power, vn = unit_ball_volume(n);
    const double crit = n / p;
    const bool critical = std::abs(beta - crit) <= 1e-14 * crit;
    NormValue out;
    if (std::isinf(prof->outer)) {
      if (!critical)
        throw Error(ErrorCode::unbounded, beta > crit ? "level supremum grows as t -> infinity"
                                                       : "level supremum grows as t -> 0");
      out.value = a * std::pow(vn, 1.0 / p);
      out.witness = SupWitness{{}, a};
      return out;
    }
    if (beta > crit && !critical) throw Error(ErrorCode::unbounded, "level supremum grows as t -> infinity");
    // Below t* = a R^{-beta} the level set is the whole ball; above it the profile inverts.
    const double tstar = a * std::pow(prof->outer, -beta);
    out.value = tstar * std::pow(vn * std::pow(prof->outer, n), 1.0 / p);
    out.witness = SupWitness{{}, tstar};
    return out;
  }
  auto [lo, hi, bounded] = level_range(f);
  const SupResult s = search_sup(level_function(f, p), lo, hi, true, !bounded, opt);
  NormValue out;
  out.value = s.value;
  out.error = std::max(opt.rel_tol * s.value, 0.0);
  out.method = NormMethod::sup_search;
  out.witness = SupWitness{{}, s.argmax};
  return out;
}

NormValue lorentz_norm(const FunctionRep& f, double p, FineIndex r_index, const NormOptions& opt) {
  check_exponent(p, "p");
  if (r_index.is_infinite()) return weak_lebesgue_norm(f, p, opt);
  const double r = r_index.value();
  const int n = f.dim();
  const double a = std::abs(f.amplitude());
  if (a == 0.0) return {};
  if (auto step = step_distribution(f)) {
    double sum = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < step->values.size(); ++k) {
      const double v = step->values[k];
      sum += std::pow(step->measures[k], r / p) * (std::pow(v, r) - std::pow(prev, r)) / r;
      prev = v;
    }
    return root_of(sum, 0.0, r, method_for(f, true) == NormMethod::grid ? NormMethod::grid : NormMethod::closed_form);
  }
  if (const double w = gaussian_width_of(f); w > 0.0) {
    const double e = n * r / (2.0 * p);
    const double value = std::pow(a, r) * std::pow(unit_ball_volume(n) * std::pow(4.0 * w, 0.5 * n), r / p) *
                         std::tgamma(e + 1.0) / std::pow(r, e + 1.0);
    return root_of(value, 0.0, r, NormMethod::closed_form);
  }
  if (auto prof = pure_power_profile(f)) {
    const double beta = prof->power, vn = unit_ball_volume(n);
    const double c = r * (1.0 - n / (p * beta));
    if (std::isinf(prof->outer)) {
      throw Error(ErrorCode::divergent, c > 0.0   ? "level integral diverges as t -> infinity"
                                        : c < 0.0 ? "level integral diverges as t -> 0"
                                                  : "level integral diverges as t -> 0 and t -> infinity");
    }
    if (c >= 0.0) throw Error(ErrorCode::divergent, "level integral diverges as t -> infinity");
    const double tstar = a * std::pow(prof->outer, -beta);
    const double region1 = std::pow(tstar, r) * std::pow(vn * std::pow(prof->outer, n), r / p) / r;
    const double region2 = std::pow(vn, r / p) * std::pow(a, n * r / (p * beta)) * std::pow(tstar, c) / (-c);
    return root_of(region1 + region2, 0.0, r, NormMethod::closed_form);
  }
  auto [lo, hi, bounded] = level_range(f);
  const auto lf = level_function(f, p);
  std::vector<double> breaks;
  if (auto prof = origin_radial_profile(f)) {
    RadialProfile q = *prof;
    q.amplitude = a;
    if (std::isfinite(q.outer)) breaks.push_back(q(q.outer));
  }
  const Accum acc = log_integral([&](double t) { return std::pow(lf(t), r); }, lo, hi, true, !bounded, breaks, opt);
  return root_of(acc.value, acc.error, r, NormMethod::quadrature);
}

// ---------------------------------------------------------------------------
// Morrey-type profiles.

namespace {

struct IndicatorProfile {
  int n = 1;
  double weight = 1.0;  // |amplitude|^q
  std::vector<Ball> balls;
  std::vector<double> dist;

  double integral(double t) const {
    double v = 0.0;
    for (std::size_t i = 0; i < balls.size(); ++i) v += ball_intersection_volume(n, t, balls[i].radius, dist[i]);
    return weight * v;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b{0.0};
    for (std::size_t i = 0; i < balls.size(); ++i) {
      const double d = dist[i], R = balls[i].radius;
      if (d - R > 0.0) b.push_back(d - R);
      if (R - d > 0.0) b.push_back(R - d);
      b.push_back(d + R);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    b.push_back(kInf);
    return b;
  }

  // Classification on [ta, tb]: constant part C, growth coefficient G (I = C + G v_n t^n), any partial balls.
  void classify(double ta, double tb, double& C, double& G, bool& partial) const {
    C = G = 0.0;
    partial = false;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      const double d = dist[i], R = balls[i].radius;
      if (tb <= d - R) continue;
      if (tb <= R - d) {
        G += 1.0;
      } else if (ta >= d + R) {
        C += ball_volume(n, R);
      } else {
        partial = true;
      }
    }
    C *= weight;
    G *= weight;
  }
};

// Antiderivative-free power integral int_a^b t^{m-1} dt (b may be inf).
double power_integral(double m, double a, double b) {
  if (std::isinf(b)) {
    if (m >= 0.0) throw Error(ErrorCode::divergent, "radius integral diverges as t -> infinity");
    return -std::pow(a, m) / m;
  }
  if (a == 0.0 && m <= 0.0) throw Error(ErrorCode::divergent, "radius integral diverges as t -> 0");
  if (m == 0.0) return std::log(b / a);
  return (std::pow(b, m) - std::pow(a, m)) / m;
}

NormValue indicator_profile_norm(const IndicatorProfile& prof, std::span<const double> center, double p, double q,
                                 FineIndex r_index, const NormOptions& opt) {
  const int n = prof.n;
  const double e = n / p - n / q;
  const double vn = unit_ball_volume(n);
  const std::vector<double> b = prof.breakpoints();
  const Point c(center.begin(), center.end());
  auto h = [&](double t) {
    const double I = prof.integral(t);
    return I > 0.0 ? std::pow(t, e) * std::pow(I, 1.0 / q) : 0.0;
  };
  QuadOptions qo;
  qo.rel_tol = opt.rel_tol;
  qo.abs_tol = opt.abs_tol;

  if (r_index.is_infinite()) {
    NormValue out;
    out.method = NormMethod::closed_form;
    auto consider = [&](double t, double v) {
      if (v > out.value) {
        out.value = v;
        out.witness = SupWitness{c, t};
      }
    };
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      const double ta = b[k], tb = b[k + 1];
      double C, G;
      bool partial;
      prof.classify(ta, tb, C, G, partial);
      if (!partial) {
        if (G > 0.0) consider(tb, h(tb));               // t^{n/p} increasing
        else if (C > 0.0) {
          if (e > 0.0) throw Error(ErrorCode::unbounded, "supremum grows as t -> infinity");
          consider(ta, h(ta));                          // t^{e} non-increasing
        }
        continue;
      }
      // Partial overlap: scan the piece then polish the best sample.
      out.method = NormMethod::sup_search;
      const std::size_t m = 64;
      double best_t = ta, best_v = -1.0;
      for (std::size_t i = 0; i <= m; ++i) {
        const double t = ta + (tb - ta) * static_cast<double>(i) / m;
        const double v = t > 0.0 ? h(t) : 0.0;
        if (v > best_v) {
          best_v = v;
          best_t = t;
        }
      }
      const double step = (tb - ta) / m;
      const GoldenResult g =
          golden_section_max(h, std::max(ta, best_t - step), std::min(tb, best_t + step), 1e-14, 200);
      consider(best_t, best_v);
      consider(g.argmax, g.value);
    }
    if (out.method == NormMethod::sup_search) out.error = opt.rel_tol * out.value;
    return out;
  }

  const double r = r_index.value();
  Accum acc;
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const double ta = b[k], tb = b[k + 1];
    double C, G;
    bool partial;
    prof.classify(ta, tb, C, G, partial);
    if (!partial) {
      if (G > 0.0) acc.value += std::pow(G * vn, r / q) * power_integral(r * n / p, ta, tb);
      else if (C > 0.0) acc.value += std::pow(C, r / q) * power_integral(r * e, ta, tb);
      continue;
    }
    acc.exact = false;
    const QuadResult piece = integrate([&](double t) { return t > 0.0 ? std::pow(h(t), r) / t : 0.0; }, ta, tb, qo);
    acc.value += piece.value;
    acc.error += piece.error;
  }
  NormValue out = root_of(acc.value, acc.error, r, acc.exact ? NormMethod::closed_form : NormMethod::quadrature);
  out.witness = SupWitness{c, 0.0};
  return out;
}

}  // namespace

NormValue morrey_profile_norm(const FunctionRep& f, std::span<const double> center, double p, double q,
                              FineIndex r_index, const NormOptions& opt) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  if (q > p) throw Error(ErrorCode::invalid_argument, "q must not exceed p");
  if (!r_index.is_infinite() && !(q < p))
    throw Error(ErrorCode::invalid_argument, "finite r needs q < p for a nontrivial space");
  const int n = f.dim();
  if (static_cast<int>(center.size()) != n) throw Error(ErrorCode::invalid_argument, "centre dimension mismatch");
  const Point c(center.begin(), center.end());
  if (f.amplitude() == 0.0) return NormValue{0.0, 0.0, NormMethod::closed_form, SupWitness{c, 0.0}};

  if (auto balls = indicator_balls(f)) {
    IndicatorProfile prof;
    prof.n = n;
    prof.weight = std::pow(std::abs(f.amplitude()), q);
    prof.balls = *balls;
    for (const Ball& b : prof.balls) prof.dist.push_back(distance(b.center, center));
    return indicator_profile_norm(prof, center, p, q, r_index, opt);
  }

  const double e = n / p - n / q;
  IntegrationOptions io;
  io.rel_tol = opt.rel_tol;
  io.abs_tol = opt.abs_tol;
  auto h = [&](double t) {
    const IntegralValue iv = ball_integral(f, center, t, q, io);
    return iv.value > 0.0 ? std::pow(t, e) * std::pow(iv.value, 1.0 / q) : 0.0;
  };
  auto [lo, hi] = length_scales(f, center);
  lo /= opt.grid_span;
  hi *= opt.grid_span;

  if (r_index.is_infinite()) {
    const SupResult s = search_sup(h, lo, hi, true, true, opt);
    NormValue out;
    out.value = s.value;
    out.error = opt.rel_tol * s.value;
    out.method = NormMethod::sup_search;
    out.witness = SupWitness{c, s.argmax};
    return out;
  }
  const double r = r_index.value();
  std::vector<double> breaks;
  const auto prof = origin_radial_profile(f);
  if (prof) {
    breaks.push_back(prof->inner + norm(center));
    breaks.push_back(prof->outer + norm(center));
  }
  // Outside the support the ball integral is constant, so h^r = h(top)^r (t/top)^{e r}.
  // Likewise h is a pure power below the outer cut of an origin-centred |x|^{-a}.
  double top = hi, bottom = lo;
  const auto bound = support_bound(f);
  if (bound) top = distance(center, bound->center) + bound->radius;
  double low_power = 0.0;
  const bool pure_low = prof && norm(center) == 0.0 && prof->inner == 0.0 && !prof->has_gaussian() &&
                        std::isfinite(prof->outer);
  if (pure_low) {
    low_power = (n / p - prof->power) * r;
    if (!(low_power > 0.0)) throw Error(ErrorCode::divergent, "integral diverges as t -> 0");
    bottom = std::min(prof->outer, top);
  }
  auto hr = [&](double t) { return std::pow(h(t), r); };
  Accum acc;
  if (bottom < top) acc = log_integral(hr, bottom, top, !pure_low, !bound, breaks, opt);
  if (bound) acc.value += hr(top) / (-e * r);
  if (pure_low) acc.value += hr(bottom) / low_power;
  NormValue out = root_of(acc.value, acc.error, r, NormMethod::quadrature);
  out.witness = SupWitness{c, 0.0};
  return out;
}

NormValue local_morrey_type_norm(const FunctionRep& f, double p, double q, FineIndex r, const NormOptions& opt) {
  return morrey_profile_norm(f, zero_point(f.dim()), p, q, r, opt);
}

std::vector<Point> candidate_centers(const FunctionRep& f) {
  const int n = f.dim();
  std::vector<Point> out{zero_point(n)};
  const FunctionRep* cur = &f;
  while (const auto* w = std::get_if<Weighted>(&cur->variant())) cur = w->inner.get();
  if (auto balls = indicator_balls(*cur)) {
    for (const Ball& b : *balls) out.push_back(b.center);
    for (std::size_t i = 0; i < balls->size(); ++i)
      for (std::size_t j = i + 1; j < balls->size(); ++j) {
        Point m(n);
        for (int k = 0; k < n; ++k) m[k] = 0.5 * ((*balls)[i].center[k] + (*balls)[j].center[k]);
        out.push_back(std::move(m));
      }
  }
  if (const auto* g = std::get_if<GaussianBump>(&cur->variant())) out.push_back(g->center);
  if (const auto* g = std::get_if<GridSample>(&cur->variant())) {
    // Every cell centre for small grids; otherwise a stride plus the peak cell.
    const std::size_t cells = g->cell_count();
    const std::size_t stride = std::max<std::size_t>(1, cells / 256);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < cells; ++i)
      if (std::abs(g->values[i]) > std::abs(g->values[peak])) peak = i;
    for (std::size_t i = 0; i < cells; i += stride) out.push_back(g->cell_center(i));
    out.push_back(g->cell_center(peak));
  }
  std::vector<Point> unique;
  for (Point& p : out)
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
  return unique;
}

namespace {

NormValue sup_over_centers(const FunctionRep& f, double p, double q, FineIndex r, const NormOptions& opt) {
  const std::vector<Point> centers = candidate_centers(f);
  NormOptions inner = opt;
  if (opt.exec == Exec::parallel && centers.size() > 1) inner.exec = Exec::serial;
  const std::vector<NormValue> vals = map_indices<NormValue>(
      centers.size(), [&](std::size_t i) { return morrey_profile_norm(f, centers[i], p, q, r, inner); }, opt.exec);
  // Strict comparison keeps the earliest candidate (the origin first) on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i].value > vals[best].value) best = i;
  NormValue out = vals[best];
  if (centers.size() > 1) out.method = NormMethod::sup_search;
  return out;
}

}  // namespace

NormValue morrey_norm(const FunctionRep& f, double p, double q, const NormOptions& opt) {
  return sup_over_centers(f, p, q, FineIndex::infinity(), opt);
}

NormValue global_morrey_type_norm(const FunctionRep& f, double p, double q, FineIndex r, const NormOptions& opt) {
  if (r.is_infinite()) return morrey_norm(f, p, q, opt);
  return sup_over_centers(f, p, q, r, opt);
}

NormValue weak_norm_from_levels(const LevelMeasure& levels, double p, const NormOptions& opt) {
  check_exponent(p, "p");
  if (levels.sup == 0.0) return {};
  auto h = [&](double level) {
    const double m = levels.measure(level);
    return m > 0.0 ? level * std::pow(m, 1.0 / p) : 0.0;
  };
  const bool bounded = std::isfinite(levels.sup);
  const double lo = bounded ? levels.sup * 1e-12 : 1e-8;
  const double hi = bounded ? levels.sup : 1e8;
  const SupResult s = search_sup(h, lo, hi, true, !bounded, opt);
  NormValue out;
  out.value = s.value;
  out.error = opt.rel_tol * s.value;
  out.method = NormMethod::sup_search;
  out.witness = SupWitness{{}, s.argmax};
  return out;
}

NormValue lorentz_norm_from_levels(const LevelMeasure& levels, double p, FineIndex r_index, const NormOptions& opt) {
  if (r_index.is_infinite()) return weak_norm_from_levels(levels, p, opt);
  check_exponent(p, "p");
  if (levels.sup == 0.0) return {};
  const double r = r_index.value();
  auto h = [&](double level) {
    const double m = levels.measure(level);
    return m > 0.0 ? std::pow(level * std::pow(m, 1.0 / p), r) : 0.0;
  };
  const bool bounded = std::isfinite(levels.sup);
  const double lo = bounded ? levels.sup * 1e-12 : 1e-8;
  const double hi = bounded ? levels.sup : 1e8;
  const Accum acc = log_integral(h, lo, hi, true, !bounded, {}, opt);
  return root_of(acc.value, acc.error, r, NormMethod::quadrature);
}

LevelMeasure sampled_level_measure(std::vector<double> values, std::vector<double> measures) {
  if (values.size() != measures.size()) throw Error(ErrorCode::invalid_argument, "values/measures size mismatch");
  std::vector<std::pair<double, double>> s;
  s.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0 && measures[i] > 0.0) s.emplace_back(std::abs(values[i]), measures[i]);
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  // Distinct levels in decreasing order with the half-cell corrected measure at each.
  auto lv = std::make_shared<std::vector<double>>();
  auto ms = std::make_shared<std::vector<double>>();
  double above = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    double cell = 0.0;
    while (j < s.size() && s[j].first == s[i].first) cell += s[j++].second;
    lv->push_back(s[i].first);
    ms->push_back(above + 0.5 * cell);
    above += cell;
    i = j;
  }
  const double total = above;
  LevelMeasure out;
  out.sup = lv->empty() ? 0.0 : lv->front();
  out.measure = [lv, ms, total](double level) {
    if (lv->empty() || level >= lv->front()) return 0.0;
    if (level < lv->back()) return total;
    // lv is decreasing: find k with lv[k] <= level < lv[k-1].
    const auto it = std::lower_bound(lv->begin(), lv->end(), level, std::greater<>());
    const std::size_t k = static_cast<std::size_t>(it - lv->begin());
    if (k == 0) return (*ms)[0];
    const double a = (*lv)[k - 1], b = (*lv)[k];
    const double w = (a - level) / (a - b);
    return (*ms)[k - 1] + w * ((*ms)[k] - (*ms)[k - 1]);
  };
  return out;
}

}  // namespace morreyheat
