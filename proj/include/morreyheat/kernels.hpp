#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace morreyheat {

enum class Exec { serial, parallel };

/// out[i] = fn(i). The parallel variant runs under OpenMP; the first exception
/// (lowest index) is rethrown after the loop so both variants fail identically.
template <class T, class F>
std::vector<T> map_indices(std::size_t count, F&& fn, Exec exec = Exec::parallel) {
  std::vector<T> out(count);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Dense row-major array with an arbitrary number of axes.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims);
  std::size_t size() const { return data.size(); }
};

/// Banded linear map along one axis: row j touches columns [lo[j], hi[j]).
struct AxisOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;  // rows x cols, row-major
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;

  AxisOperator(std::size_t rows, std::size_t cols);
  double& at(std::size_t j, std::size_t k) { return weights[j * cols + k]; }
  double at(std::size_t j, std::size_t k) const { return weights[j * cols + k]; }
  /// Recompute the bands, dropping weights below cutoff times the row maximum.
  void trim(double cutoff = 0.0);
};

/// out[..., j, ...] = sum_k op(j, k) in[..., k, ...] along `axis`.
Tensor apply_axis_serial(const Tensor& in, std::size_t axis, const AxisOperator& op);
Tensor apply_axis_parallel(const Tensor& in, std::size_t axis, const AxisOperator& op);
Tensor apply_axis(const Tensor& in, std::size_t axis, const AxisOperator& op, Exec exec = Exec::parallel);

/// Applies one operator per axis in turn (a separable convolution).
Tensor apply_separable(Tensor t, const std::vector<AxisOperator>& ops, Exec exec = Exec::parallel);

}  // namespace morreyheat
