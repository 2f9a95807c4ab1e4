#include <locdeploy/distributed.hpp>
#include <locdeploy/fim.hpp>
#include <locdeploy/potentials.hpp>
#include <locdeploy/rigidity.hpp>
#include <locdeploy/verify.hpp>

#include <benchmark/benchmark.h>

using namespace locdeploy;

namespace {

// Lattice of mobiles with anchors on the left edge; each node ranges to its
// grid neighbors and diagonals, so F stays sparse as the size grows.
RandomInstance lattice(int side) {
  std::vector<Point> pts;
  for (int r = 0; r < side; ++r)
    for (int c = 1; c <= side; ++c) pts.emplace_back(c + 0.1 * ((r * 7 + c * 3) % 5), r + 0.1 * ((r * 3 + c) % 4));
  for (int r = 0; r < side; ++r) pts.emplace_back(0.0, r + 0.3 * (r % 2));
  const int n = side * side;
  RangingGraph g(static_cast<int>(pts.size()));
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(pts.size()); ++j)
      if ((pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).norm() < 1.8) g.add_edge(i, j);
  return {Configuration(pts, n), g, NoiseModel(NoiseKind::AdditiveGaussian, 0.1)};
}

void BM_AssembleFim(benchmark::State& state) {
  const auto inst = lattice(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_fim(inst.config, inst.graph, inst.model));
  state.SetComplexityN(inst.config.num_mobile());
}
BENCHMARK(BM_AssembleFim)->RangeMultiplier(2)->Range(2, 16)->Complexity();

void BM_GradFD(benchmark::State& state) {
  const auto inst = lattice(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grad_f_D(inst.config, inst.graph, inst.model));
  state.SetComplexityN(inst.config.num_mobile());
}
BENCHMARK(BM_GradFD)->RangeMultiplier(2)->Range(2, 8)->Complexity();

void BM_DistributedGradFD(benchmark::State& state) {
  const auto inst = lattice(static_cast<int>(state.range(0)));
  SolverParams p;
  p.residual_tol = 1e-6;
  p.record_messages = false;
  for (auto _ : state) benchmark::DoNotOptimize(distributed_grad_f_D(inst.config, inst.graph, inst.model, 0, Axis::X, p));
}
BENCHMARK(BM_DistributedGradFD)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RigidityGramIdentity(benchmark::State& state) {
  const auto inst = random_instance(static_cast<int>(state.range(0)), 7);
  const auto oriented = OrientedGraph::canonical(inst.graph);
  for (auto _ : state) benchmark::DoNotOptimize(verify_prop1(inst.config, oriented, inst.model));
}
BENCHMARK(BM_RigidityGramIdentity)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
