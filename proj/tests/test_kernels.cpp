#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "morreyheat/kernels.hpp"
#include "oracles.hpp"

using namespace morreyheat;

namespace {

Tensor random_tensor(oracle::Gen& g, std::vector<std::size_t> shape) {
  Tensor t(std::move(shape));
  for (double& v : t.data) v = g.uniform(-1, 1);
  return t;
}

AxisOperator random_operator(oracle::Gen& g, std::size_t rows, std::size_t cols) {
  AxisOperator op(rows, cols);
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t k = 0; k < cols; ++k)
      op.at(j, k) = std::abs(static_cast<double>(j) - static_cast<double>(k)) < 3 ? g.uniform(-1, 1) : 0.0;
  op.trim();
  return op;
}

// out[i, j, l] along axis 1 written out with explicit indices.
double naive_axis1(const Tensor& in, const AxisOperator& op, std::size_t i, std::size_t j, std::size_t l) {
  double s = 0.0;
  for (std::size_t k = 0; k < op.cols; ++k)
    s += op.at(j, k) * in.data[(i * in.shape[1] + k) * in.shape[2] + l];
  return s;
}

}  // namespace

TEST_CASE("map_indices keeps order and rethrows the lowest failing index") {
  const auto v = map_indices<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  for (Exec exec : {Exec::serial, Exec::parallel}) {
    try {
      map_indices<int>(
          50,
          [](std::size_t i) -> int {
            if (i == 17 || i == 40) throw std::runtime_error(std::to_string(i));
            return 0;
          },
          exec);
      FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "17");
    }
  }
}

TEST_CASE("trim keeps the band of nonzero weights") {
  AxisOperator op(3, 5);
  op.at(0, 1) = 1.0;
  op.at(1, 2) = 1.0;
  op.at(1, 3) = 1e-20;
  op.at(2, 4) = 2.0;
  op.trim(1e-12);
  CHECK(op.lo[0] == 1);
  CHECK(op.hi[0] == 2);
  CHECK(op.hi[1] == 3);
  CHECK(op.lo[2] == 4);
}

TEST_CASE("apply_axis matches the explicit sum") {
  oracle::Gen g(3);
  const Tensor in = random_tensor(g, {4, 9, 5});
  const AxisOperator op = random_operator(g, 7, 9);
  const Tensor out = apply_axis(in, 1, op);
  REQUIRE(out.shape == std::vector<std::size_t>{4, 7, 5});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t l = 0; l < 5; ++l)
        CHECK(out.data[(i * 7 + j) * 5 + l] == doctest::Approx(naive_axis1(in, op, i, j, l)).epsilon(1e-14));
}

TEST_CASE("property: serial and parallel kernels agree bit for bit") {
  oracle::Gen g(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int dims = g.integer(1, 3);
    std::vector<std::size_t> shape;
    for (int d = 0; d < dims; ++d) shape.push_back(static_cast<std::size_t>(g.integer(1, 12)));
    const Tensor in = random_tensor(g, shape);
    std::vector<AxisOperator> ops;
    for (int d = 0; d < dims; ++d)
      ops.push_back(random_operator(g, static_cast<std::size_t>(g.integer(1, 12)), shape[d]));
    const std::size_t axis = static_cast<std::size_t>(g.integer(0, dims - 1));
    const Tensor a = apply_axis_serial(in, axis, ops[axis]);
    const Tensor b = apply_axis_parallel(in, axis, ops[axis]);
    CHECK(a.shape == b.shape);
    CHECK(a.data == b.data);
    const Tensor s = apply_separable(in, ops, Exec::serial);
    const Tensor p = apply_separable(in, ops, Exec::parallel);
    CHECK(s.data == p.data);
  }
}

TEST_CASE("separable application equals composing single-axis passes") {
  oracle::Gen g(5);
  const Tensor in = random_tensor(g, {6, 8});
  const AxisOperator a = random_operator(g, 5, 6);
  const AxisOperator b = random_operator(g, 8, 8);
  const Tensor both = apply_separable(in, {a, b});
  const Tensor step = apply_axis(apply_axis(in, 0, a), 1, b);
  REQUIRE(both.size() == step.size());
  for (std::size_t i = 0; i < both.size(); ++i) CHECK(both.data[i] == doctest::Approx(step.data[i]).epsilon(1e-14));
}
