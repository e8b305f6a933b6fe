// Microbenchmarks for the hot paths: graded dimension counting, F_p row
// reduction, the lattice group law, and clique enumeration.

#include <random>

#include <benchmark/benchmark.h>

#include <praag/arith.hpp>
#include <praag/graph.hpp>
#include <praag/lie.hpp>
#include <praag/quadalg.hpp>

using namespace praag;

namespace {

PGraph cycle_pgraph(std::size_t n) {
  PGraph g;
  g.p = 5;
  g.precision = 4;
  for (std::size_t i = 0; i < n; ++i) g.graph.vertices.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    g.graph.edges.emplace_back(i, (i + 1) % n);
    g.labels.emplace_back(TruncatedPadic::exact_zero(5, 4), TruncatedPadic::exact_zero(5, 4));
  }
  g.validate();
  return g;
}

void BM_HilbertDims(benchmark::State& state) {
  const auto g = cycle_pgraph(5);
  const auto a = graph_algebra(g, GraphAlgebraKind::MildTest);
  for (auto _ : state) {
    HilbertEngine engine(a);
    benchmark::DoNotOptimize(engine.dims_up_to(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_HilbertDims)->Arg(6)->Arg(8);

void BM_FpRref(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(11);
  FpMatrix m(5, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m.at(r, c) = rng() % 5;
  for (auto _ : state) benchmark::DoNotOptimize(fp_rref(m));
}
BENCHMARK(BM_FpRref)->Arg(64)->Arg(256);

void BM_BchMultiply(benchmark::State& state) {
  auto L = PowerfulLieLattice::abelian(5, 4, 2);
  L.set_pair(0, 1, {TruncatedPadic::exact_zero(5, 4), TruncatedPadic::from_exact(5, 4, 5)});
  L.validate();
  const std::vector<TruncatedPadic> X{TruncatedPadic::from_exact(5, 4, 3),
                                      TruncatedPadic::from_exact(5, 4, -2)};
  const std::vector<TruncatedPadic> Y{TruncatedPadic::from_exact(5, 4, 1),
                                      TruncatedPadic::from_exact(5, 4, 4)};
  for (auto _ : state) benchmark::DoNotOptimize(bch_multiply(L, X, Y));
}
BENCHMARK(BM_BchMultiply);

void BM_CliquePolynomial(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(7);
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 2) g.edges.emplace_back(i, j);
  g.validate();
  for (auto _ : state) benchmark::DoNotOptimize(clique_polynomial(g));
}
BENCHMARK(BM_CliquePolynomial)->Arg(10)->Arg(14);

} // namespace

BENCHMARK_MAIN();
