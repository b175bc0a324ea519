#include <benchmark/benchmark.h>

#include "qmetric/expr.hpp"
#include "qmetric/family.hpp"
#include "qmetric/field.hpp"
#include "qmetric/geometry.hpp"
#include "qmetric/landau.hpp"

using namespace qmetric;

namespace {

void BM_LandauState(benchmark::State& state) {
  const Grid2D grid = default_grid(1.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(landau_state(1.0, 1, grid));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_LandauState)->Arg(128)->Arg(256)->Arg(512);

void BM_InnerProduct(benchmark::State& state) {
  const Grid2D grid = default_grid(1.0, static_cast<int>(state.range(0)));
  const ComplexField a = landau_state(1.0, 0, grid);
  const ComplexField b = landau_state(1.0, 1, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_product(a, b));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_InnerProduct)->Arg(128)->Arg(256)->Arg(512);

void BM_ExprEval(benchmark::State& state) {
  const std::vector<std::string> names{"s"};
  const ExprAst e =
      parse_expression("exp(-s*(x^2 + y^2)/4) * (1 + sin(x*y))", names);
  const Grid2D grid = Grid2D::square(8.0, static_cast<int>(state.range(0)));
  const ParamPoint at{{"s", 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_on_grid(e, grid, at));
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_ExprEval)->Arg(128)->Arg(256);

void BM_ParamDerivative(benchmark::State& state) {
  const StateFamily family = landau_family(0, 0.5);
  const Grid2D grid = default_grid(1.0, static_cast<int>(state.range(0)));
  const ParamPoint at{{"B", 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(param_derivative(family, at, "B", grid));
  }
}
BENCHMARK(BM_ParamDerivative)->Arg(128)->Arg(256);

void BM_NaiveQMT(benchmark::State& state) {
  const StateFamily family = landau_family(0, 0.5);
  const Grid2D grid = default_grid(1.0, static_cast<int>(state.range(0)));
  const ParamPoint at{{"B", 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qmt(family, at, grid));
  }
}
BENCHMARK(BM_NaiveQMT)->Arg(128)->Arg(256);

void BM_CovariantQMT(benchmark::State& state) {
  const StateFamily family = landau_family(0, 0.5);
  const Connection gamma = landau_connection(0.5);
  const Grid2D grid = default_grid(1.0, static_cast<int>(state.range(0)));
  const ParamPoint at{{"B", 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(covariant_qmt(family, gamma, at, grid));
  }
}
BENCHMARK(BM_CovariantQMT)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
