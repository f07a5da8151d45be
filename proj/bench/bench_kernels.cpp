#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "morreyheat/heat.hpp"
#include "morreyheat/kernels.hpp"

namespace {

using namespace morreyheat;

AxisOperator gaussian_band(std::size_t size, double width) {
  AxisOperator op(size, size);
  for (std::size_t j = 0; j < size; ++j)
    for (std::size_t k = 0; k < size; ++k) {
      const double d = (static_cast<double>(j) - static_cast<double>(k)) / width;
      op.at(j, k) = std::exp(-0.5 * d * d);
    }
  op.trim(1e-16);
  return op;
}

Tensor random_tensor(std::vector<std::size_t> shape) {
  Tensor t(std::move(shape));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : t.data) v = u(rng);
  return t;
}

void BM_ApplySeparable2D(benchmark::State& state, Exec exec) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Tensor in = random_tensor({m, m});
  const std::vector<AxisOperator> ops{gaussian_band(m, 6.0), gaussian_band(m, 6.0)};
  for (auto _ : state) benchmark::DoNotOptimize(apply_separable(in, ops, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m * m));
}

void BM_ApplySeparable3D(benchmark::State& state, Exec exec) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Tensor in = random_tensor({m, m, m});
  const AxisOperator op = gaussian_band(m, 4.0);
  const std::vector<AxisOperator> ops{op, op, op};
  for (auto _ : state) benchmark::DoNotOptimize(apply_separable(in, ops, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m * m * m));
}

void BM_HeatNormGaussianGrid(benchmark::State& state, Exec exec) {
  const FunctionRep g = FunctionRep::gaussian({0.0, 0.0}, 1.0, 1.0);
  HeatOptions ho;
  ho.backend = HeatBackend::grid_convolution;
  ho.exec = exec;
  HeatNormOptions no;
  no.norm.exec = exec;
  for (auto _ : state) {
    const HeatField field = apply_weighted_heat(g, 0.0, 1.0, 0, {}, ho);
    benchmark::DoNotOptimize(heat_norm(field, HeatTarget::lebesgue(2.0), no).value);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_ApplySeparable2D, serial, Exec::serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ApplySeparable2D, parallel, Exec::parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ApplySeparable3D, serial, Exec::serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ApplySeparable3D, parallel, Exec::parallel)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_HeatNormGaussianGrid, serial, Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_HeatNormGaussianGrid, parallel, Exec::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
