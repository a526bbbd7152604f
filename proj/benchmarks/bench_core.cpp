#include <benchmark/benchmark.h>

#include "hinv/expm.hpp"
#include "hinv/hermite.hpp"
#include "hinv/models.hpp"
#include "hinv/operators.hpp"
#include "hinv/sde.hpp"
#include "hinv/sobolev.hpp"
#include "hinv/spde.hpp"

namespace {

using namespace hinv;

void BM_HermiteFunctions(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  double x = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermite_functions(k, x));
    x += 1e-9;
  }
  state.SetComplexityN(k);
}
BENCHMARK(BM_HermiteFunctions)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oN);

void BM_BasisValues2d(benchmark::State& state) {
  const TruncationScheme s(2, static_cast<int>(state.range(0)));
  const Point x = (Point(2) << 0.3, -1.1).finished();
  for (auto _ : state) benchmark::DoNotOptimize(basis_values(s, x));
}
BENCHMARK(BM_BasisValues2d)->Arg(10)->Arg(20)->Arg(40);

void BM_ProjectGaussian(benchmark::State& state) {
  const TruncationScheme s(1, static_cast<int>(state.range(0)));
  const QuadratureRule rule = default_rule(s);
  const ScalarFunction f = [](const Point& x) { return std::exp(-0.5 * x.squaredNorm()); };
  for (auto _ : state) benchmark::DoNotOptimize(project_function(f, s, rule));
}
BENCHMARK(BM_ProjectGaussian)->Arg(20)->Arg(60);

void BM_TranslationOperator(benchmark::State& state) {
  const TruncationScheme s(1, static_cast<int>(state.range(0)));
  const Point shift = Point::Constant(1, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(translation_operator(shift, s));
}
BENCHMARK(BM_TranslationOperator)->Arg(20)->Arg(60)->Arg(120);

void BM_MatrixExponentialDense(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exponential(a));
}
BENCHMARK(BM_MatrixExponentialDense)->Arg(16)->Arg(64);

void BM_GalerkinStep(benchmark::State& state) {
  const auto m = builtin_spde("gaussian-profile-spde", static_cast<int>(state.range(0)));
  const auto y = OrbitMap(m.profile, m.scheme)(Point::Constant(1, 0.2));
  const Eigen::VectorXd dw = Eigen::VectorXd::Constant(1, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_step(m, y, 1e-3, dw));
}
BENCHMARK(BM_GalerkinStep)->Arg(20)->Arg(60);

void BM_EulerMaruyamaStroock(benchmark::State& state) {
  const auto model = stroock_sphere_model(3);
  const Point x0 = Point::Unit(3, 2);
  std::uint64_t path = 0;
  for (auto _ : state) benchmark::DoNotOptimize(euler_maruyama(model, x0, 1.0, 1e-3, 1, path++));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EulerMaruyamaStroock);

}  // namespace
BENCHMARK_MAIN();
