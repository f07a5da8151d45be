#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace morreyheat {

struct QuadOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

template <std::size_t N>
struct QuadResultN {
  std::array<double, N> value{};
  std::array<double, N> error{};
  int evaluations = 0;
  bool converged = true;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Segment {
  double a = 0.0;
  double b = 0.0;
  std::array<double, N> value{};
  std::array<double, N> error{};
  std::array<double, N> absval{};
  double key = 0.0;
};

template <std::size_t N, class F>
Segment<N> kronrod15(F& f, double a, double b) {
  Segment<N> s;
  s.a = a;
  s.b = b;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> gauss{};
  std::array<double, N> kron{};
  std::array<double, N> absk{};
  std::array<std::array<double, N>, 15> samples;
  const std::array<double, N> fc = f(center);
  samples[7] = fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    samples[i] = f(center - dx);
    samples[14 - i] = f(center + dx);
  }
  for (std::size_t c = 0; c < N; ++c) {
    double k = kKronrodWeights[7] * fc[c];
    double g = kGaussWeights[3] * fc[c];
    double ak = kKronrodWeights[7] * std::abs(fc[c]);
    for (std::size_t i = 0; i < 7; ++i) {
      const double lo = samples[i][c];
      const double hi = samples[14 - i][c];
      k += kKronrodWeights[i] * (lo + hi);
      ak += kKronrodWeights[i] * (std::abs(lo) + std::abs(hi));
      if (i % 2 == 1) g += kGaussWeights[i / 2] * (lo + hi);
    }
    const double mean = 0.5 * k;
    double asc = kKronrodWeights[7] * std::abs(fc[c] - mean);
    for (std::size_t i = 0; i < 7; ++i)
      asc += kKronrodWeights[i] * (std::abs(samples[i][c] - mean) + std::abs(samples[14 - i][c] - mean));
    kron[c] = k * half;
    gauss[c] = g * half;
    absk[c] = ak * std::abs(half);
    asc *= std::abs(half);
    double err = std::abs(kron[c] - gauss[c]);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absk[c];
    s.error[c] = std::max(err, roundoff);
  }
  s.value = kron;
  s.absval = absk;
  return s;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of a vector-valued integrand over the
/// union of consecutive intervals defined by `points` (sorted, at least two entries).
/// A component converges when its error is below max(abs_tol, rel_tol * integral of |f_c|).
template <std::size_t N, class F>
QuadResultN<N> integrate_n(F&& f, std::span<const double> points, const QuadOptions& opt = {}) {
  using Seg = detail::Segment<N>;
  QuadResultN<N> out;
  std::vector<double> pts(points.begin(), points.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) return out;

  std::vector<Seg> heap;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    heap.push_back(detail::kronrod15<N>(f, pts[i], pts[i + 1]));
    out.evaluations += 15;
  }
  std::array<double, N> weight{};
  auto totals = [&](std::array<double, N>& val, std::array<double, N>& err, std::array<double, N>& absv) {
    val.fill(0.0);
    err.fill(0.0);
    absv.fill(0.0);
    for (const Seg& s : heap)
      for (std::size_t c = 0; c < N; ++c) {
        val[c] += s.value[c];
        err[c] += s.error[c];
        absv[c] += s.absval[c];
      }
  };
  std::array<double, N> val, err, absv;
  totals(val, err, absv);
  for (std::size_t c = 0; c < N; ++c) weight[c] = 1.0 / std::max({absv[c] * opt.rel_tol, opt.abs_tol, 1e-300});
  auto key_of = [&](const Seg& s) {
    double k = 0.0;
    for (std::size_t c = 0; c < N; ++c) k = std::max(k, s.error[c] * weight[c]);
    return k;
  };
  auto cmp = [](const Seg& x, const Seg& y) { return x.key < y.key; };
  for (Seg& s : heap) s.key = key_of(s);
  std::make_heap(heap.begin(), heap.end(), cmp);

  auto done = [&]() {
    for (std::size_t c = 0; c < N; ++c)
      if (err[c] > std::max(opt.abs_tol, opt.rel_tol * absv[c])) return false;
    return true;
  };

  int intervals = static_cast<int>(heap.size());
  while (!done()) {
    if (intervals >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Seg worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in double precision.
      worst.key = 0.0;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      out.converged = false;
      break;
    }
    Seg left = detail::kronrod15<N>(f, worst.a, mid);
    Seg right = detail::kronrod15<N>(f, mid, worst.b);
    out.evaluations += 30;
    for (std::size_t c = 0; c < N; ++c) {
      val[c] += left.value[c] + right.value[c] - worst.value[c];
      err[c] += left.error[c] + right.error[c] - worst.error[c];
      absv[c] += left.absval[c] + right.absval[c] - worst.absval[c];
    }
    left.key = key_of(left);
    right.key = key_of(right);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cmp);
    ++intervals;
  }
  // Re-sum to avoid drift from the incremental updates.
  totals(val, err, absv);
  out.value = val;
  out.error = err;
  return out;
}

template <class F>
QuadResult integrate(F&& f, std::span<const double> points, const QuadOptions& opt = {}) {
  auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate_n<1>(wrapped, points, opt);
  return {r.value[0], r.error[0], r.evaluations, r.converged};
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  const std::array<double, 2> pts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts), opt);
}

/// Sorted, de-duplicated breakpoints restricted to [lo, hi], always including both ends.
std::vector<double> clip_breakpoints(std::vector<double> points, double lo, double hi);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct GoldenResult {
  double argmax = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of a unimodal function on [a, b].
template <class F>
GoldenResult golden_section_max(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
  constexpr double invphi = 0.6180339887498948482;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && std::abs(b - a) > tol * (std::abs(c) + std::abs(d)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

}  // namespace morreyheat
