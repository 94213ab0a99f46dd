// Microbenchmarks for the kernels the training loop spends its time in.
// Sizes mirror the desk-scale graphs used by the test suite.
#include <benchmark/benchmark.h>

#include "syncdgc/clustering.hpp"
#include "syncdgc/datasets.hpp"
#include "syncdgc/graph.hpp"
#include "syncdgc/matrix.hpp"
#include "syncdgc/structure.hpp"
#include "syncdgc/tape.hpp"
#include "syncdgc/tigae.hpp"

namespace {

using namespace syncdgc;

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

const DatasetBundle& bench_dataset() {
  static const DatasetBundle ds = generate_sbm({300, 3, 0.1, 0.02, 0.3, 325});
  return ds;
}

void BM_Matmul(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(325);
  const Matrix a = random_matrix(rng, n, n);
  const Matrix b = random_matrix(rng, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
  state.SetItemsProcessed(state.iterations() * int64_t(n) * n * n);
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

void BM_NormalizeAdjacency(benchmark::State& state) {
  const Graph& g = bench_dataset().graph;
  for (auto _ : state) benchmark::DoNotOptimize(normalize(g.adjacency));
}
BENCHMARK(BM_NormalizeAdjacency);

void BM_EncodeForward(benchmark::State& state) {
  const Graph& g = bench_dataset().graph;
  const Matrix l = normalize(g.adjacency);
  Rng rng(child_seed(325, kSeedParamInit));
  const ModelParams params =
      init_params(g.n(), g.features.cols(), 64, 32, 16, rng);
  for (auto _ : state) benchmark::DoNotOptimize(encode(params, l, g.features));
}
BENCHMARK(BM_EncodeForward);

void BM_EncodeBackward(benchmark::State& state) {
  const Graph& g = bench_dataset().graph;
  const Matrix l = normalize(g.adjacency);
  const Matrix a_tilde = with_self_loops(g.adjacency);
  const Matrix s_x = cosine_similarity(g.features);
  Rng rng(child_seed(325, kSeedParamInit));
  const ModelParams params =
      init_params(g.n(), g.features.cols(), 64, 32, 16, rng);
  for (auto _ : state) {
    Tape tape;
    const TigaeNodes nodes = encode_on_tape(tape, params, l, g.features);
    tape.backward(pretrain_loss_on_tape(tape, nodes, a_tilde, s_x, 1.0));
    benchmark::DoNotOptimize(tape.grad(nodes.w_a));
  }
}
BENCHMARK(BM_EncodeBackward);

void BM_Refine(benchmark::State& state) {
  const Graph& g = bench_dataset().graph;
  const Matrix l = normalize(g.adjacency);
  const Matrix a_tilde = with_self_loops(g.adjacency);
  Rng rng(child_seed(325, kSeedParamInit));
  const ModelParams params =
      init_params(g.n(), g.features.cols(), 64, 32, 16, rng);
  const EncodeOutput out = encode(params, l, g.features);
  for (auto _ : state) {
    Rng sample(child_seed(325, kSeedRefine));
    benchmark::DoNotOptimize(refine(out.a_hat, out.x_t, a_tilde, sample, SfSwitches{}));
  }
}
BENCHMARK(BM_Refine);

void BM_Kmeans(benchmark::State& state) {
  Rng rng(325);
  const Matrix z = random_matrix(rng, 300, 16);
  for (auto _ : state) {
    Rng seed(child_seed(325, kSeedKmeans));
    benchmark::DoNotOptimize(kmeans(z, 3, seed));
  }
}
BENCHMARK(BM_Kmeans);

void BM_SoftAssign(benchmark::State& state) {
  Rng rng(325);
  const Matrix z = random_matrix(rng, 300, 16);
  const Matrix centers = random_matrix(rng, 3, 16);
  for (auto _ : state) benchmark::DoNotOptimize(soft_assign(z, centers));
}
BENCHMARK(BM_SoftAssign);

}  // namespace

BENCHMARK_MAIN();
