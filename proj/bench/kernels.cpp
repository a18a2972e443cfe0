#include <benchmark/benchmark.h>

#include <random>

#include "zipstream/parallel.hpp"

using namespace zs;

namespace {

// Random zip-2 graph with n nodes over {0, 1}.
ObsGraph random_graph(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 r(seed);
  ObsGraph g;
  for (std::size_t v = 0; v < n; ++v) g.add_node(std::to_string(r() % 2), "v" + std::to_string(v), 2);
  for (std::size_t v = 0; v < n; ++v)
    for (auto& t : g.succ[v]) t = r() % n;
  return g;
}

Automaton random_dfao(std::size_t n, std::uint64_t k, std::uint64_t seed) {
  std::mt19937_64 r(seed);
  Automaton a;
  a.k = k;
  for (std::size_t q = 0; q < n; ++q) a.add_state(std::to_string(r() % 3), "q" + std::to_string(q), k);
  for (std::size_t q = 0; q < n; ++q)
    for (auto& t : a.delta[q]) t = r() % n;
  return a;
}

template <bool Parallel>
void BM_interpret_range(benchmark::State& st) {
  auto g = random_graph(64, 1);
  const auto count = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? interpret_range(g, 1u << 20, count) : interpret_range_serial(g, 1u << 20, count));
  st.SetItemsProcessed(st.iterations() * count);
}

template <bool Parallel>
void BM_generate_range(benchmark::State& st) {
  auto a = random_dfao(32, 3, 2);
  const auto count = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? generate_range(a, 0, count) : generate_range_serial(a, 0, count));
  st.SetItemsProcessed(st.iterations() * count);
}

template <bool Parallel>
void BM_fractran_outputs(benchmark::State& st) {
  auto f = parse_fractran("5/6\n1/2 -> a\n2/9\n1/3 -> b\n1/1 -> c\n");
  const auto count = static_cast<std::uint64_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(Parallel ? fractran_outputs(f, 1, count, 10000) : fractran_outputs_serial(f, 1, count, 10000));
  st.SetItemsProcessed(st.iterations() * count);
}

template <bool Parallel>
void BM_bisimilarity_matrix(benchmark::State& st) {
  std::vector<ObsGraph> gs;
  for (std::int64_t i = 0; i < st.range(0); ++i) gs.push_back(random_graph(32, 100 + i % 4));
  for (auto _ : st) benchmark::DoNotOptimize(Parallel ? bisimilarity_matrix(gs) : bisimilarity_matrix_serial(gs));
}

}  // namespace

BENCHMARK(BM_interpret_range<false>)->Name("interpret_range/serial")->Arg(1 << 16);
BENCHMARK(BM_interpret_range<true>)->Name("interpret_range/parallel")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_generate_range<false>)->Name("generate_range/serial")->Arg(1 << 16);
BENCHMARK(BM_generate_range<true>)->Name("generate_range/parallel")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_fractran_outputs<false>)->Name("fractran_outputs/serial")->Arg(4096);
BENCHMARK(BM_fractran_outputs<true>)->Name("fractran_outputs/parallel")->Arg(4096)->UseRealTime();
BENCHMARK(BM_bisimilarity_matrix<false>)->Name("bisimilarity_matrix/serial")->Arg(32);
BENCHMARK(BM_bisimilarity_matrix<true>)->Name("bisimilarity_matrix/parallel")->Arg(32)->UseRealTime();

BENCHMARK_MAIN();
