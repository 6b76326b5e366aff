#include <benchmark/benchmark.h>

#include <memory>

#include "lavfem/energy.hpp"
#include "lavfem/problems.hpp"
#include "lavfem/solve.hpp"

using namespace lavfem;

namespace {

struct Setup {
  Problem pb;
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FeSpace> space;
  std::shared_ptr<const EnergyAssembler> assembler;
  FeFunction f;
};

Setup make_setup(Problem pb, int n, int degree, double alpha) {
  auto mesh = std::make_shared<const Mesh>(pb.domain.build_mesh(n));
  auto space = make_space(pb, mesh, degree);
  auto asmb = std::make_shared<const EnergyAssembler>(pb.density, space, SolveOptions{}.rule(pb.domain.dim),
                                                      CutoffParams::for_mesh(alpha, *mesh));
  FeFunction f = initial_function(pb, space, {});
  return {std::move(pb), mesh, space, asmb, std::move(f)};
}

void BM_ManiaValue(benchmark::State& state) {
  const Setup s = make_setup(mania_problem(), static_cast<int>(state.range(0)), 1, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(s.assembler->value(s.f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ManiaValue)->Arg(160)->Arg(1280);

void BM_ManiaGradient(benchmark::State& state) {
  const Setup s = make_setup(mania_problem(), static_cast<int>(state.range(0)), 1, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(s.assembler->gradient(s.f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ManiaGradient)->Arg(160)->Arg(1280);

void BM_FossValue(benchmark::State& state) {
  const Setup s = make_setup(foss_problem(), static_cast<int>(state.range(0)), 1, 1.0 / 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(s.assembler->value(s.f));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0) * state.range(0));
}
BENCHMARK(BM_FossValue)->Arg(12)->Arg(24);

void BM_FossGradient(benchmark::State& state) {
  const Setup s = make_setup(foss_problem(), static_cast<int>(state.range(0)), 1, 1.0 / 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(s.assembler->gradient(s.f));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0) * state.range(0));
}
BENCHMARK(BM_FossGradient)->Arg(12)->Arg(24);

void BM_ManiaEnhancedSolve(benchmark::State& state) {
  const Problem pb = mania_problem();
  const auto mesh = std::make_shared<const Mesh>(pb.domain.build_mesh(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_enhanced_fem(pb, mesh, 1, 0.25).final_energy);
}
BENCHMARK(BM_ManiaEnhancedSolve)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
