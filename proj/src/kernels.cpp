#include "morreyheat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "morreyheat/error.hpp"

namespace morreyheat {

Tensor::Tensor(std::vector<std::size_t> dims) : shape(std::move(dims)) {
  data.assign(std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>()), 0.0);
}

AxisOperator::AxisOperator(std::size_t r, std::size_t c)
    : rows(r), cols(c), weights(r * c, 0.0), lo(r, 0), hi(r, c) {}

void AxisOperator::trim(double cutoff) {
  for (std::size_t j = 0; j < rows; ++j) {
    const double* row = &weights[j * cols];
    double peak = 0.0;
    for (std::size_t k = 0; k < cols; ++k) peak = std::max(peak, std::abs(row[k]));
    const double floor = cutoff * peak;
    std::size_t a = 0, b = cols;
    while (a < b && std::abs(row[a]) <= floor) ++a;
    while (b > a && std::abs(row[b - 1]) <= floor) --b;
    lo[j] = a;
    hi[j] = b;
  }
}

namespace {

struct Layout {
  std::size_t outer = 1;
  std::size_t inner = 1;
};

Layout layout_of(const Tensor& in, std::size_t axis, const AxisOperator& op) {
  if (axis >= in.shape.size()) throw Error(ErrorCode::invalid_argument, "axis out of range");
  if (in.shape[axis] != op.cols) throw Error(ErrorCode::invalid_argument, "operator width does not match axis");
  Layout l;
  for (std::size_t i = 0; i < axis; ++i) l.outer *= in.shape[i];
  for (std::size_t i = axis + 1; i < in.shape.size(); ++i) l.inner *= in.shape[i];
  return l;
}

Tensor output_for(const Tensor& in, std::size_t axis, const AxisOperator& op) {
  std::vector<std::size_t> dims = in.shape;
  dims[axis] = op.rows;
  return Tensor(std::move(dims));
}

// One output line: out[a, j, :] = sum_k op(j, k) in[a, k, :].
inline void row_kernel(const Tensor& in, Tensor& out, const AxisOperator& op, const Layout& l, std::size_t a,
                       std::size_t j) {
  double* dst = &out.data[(a * op.rows + j) * l.inner];
  for (std::size_t k = op.lo[j]; k < op.hi[j]; ++k) {
    const double w = op.at(j, k);
    if (w == 0.0) continue;
    const double* src = &in.data[(a * op.cols + k) * l.inner];
    for (std::size_t b = 0; b < l.inner; ++b) dst[b] += w * src[b];
  }
}

}  // namespace

Tensor apply_axis_serial(const Tensor& in, std::size_t axis, const AxisOperator& op) {
  const Layout l = layout_of(in, axis, op);
  Tensor out = output_for(in, axis, op);
  for (std::size_t a = 0; a < l.outer; ++a)
    for (std::size_t j = 0; j < op.rows; ++j) row_kernel(in, out, op, l, a, j);
  return out;
}

Tensor apply_axis_parallel(const Tensor& in, std::size_t axis, const AxisOperator& op) {
  const Layout l = layout_of(in, axis, op);
  Tensor out = output_for(in, axis, op);
  const long long total = static_cast<long long>(l.outer * op.rows);
  // Each (a, j) pair owns a disjoint output line, so no synchronisation is needed.
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < total; ++idx) {
    const std::size_t a = static_cast<std::size_t>(idx) / op.rows;
    const std::size_t j = static_cast<std::size_t>(idx) % op.rows;
    row_kernel(in, out, op, l, a, j);
  }
  return out;
}

Tensor apply_axis(const Tensor& in, std::size_t axis, const AxisOperator& op, Exec exec) {
  return exec == Exec::serial ? apply_axis_serial(in, axis, op) : apply_axis_parallel(in, axis, op);
}

Tensor apply_separable(Tensor t, const std::vector<AxisOperator>& ops, Exec exec) {
  if (ops.size() != t.shape.size()) throw Error(ErrorCode::invalid_argument, "one operator per axis required");
  for (std::size_t axis = 0; axis < ops.size(); ++axis) t = apply_axis(t, axis, ops[axis], exec);
  return t;
}

}  // namespace morreyheat
