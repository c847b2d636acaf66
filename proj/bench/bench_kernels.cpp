// Serial reference vs OpenMP kernels on a CI-scale synthetic corpus.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <numeric>

#include "hon/kernels/ensemble.hpp"
#include "hon/kernels/observations.hpp"
#include "hon/kernels/spmv.hpp"
#include "hon/rules.hpp"
#include "hon/synth.hpp"
#include "hon/walk.hpp"
#include "hon/wiring.hpp"

namespace {

struct Fixture {
  hon::Corpus corpus;
  hon::Network network;
  std::vector<hon::TestCase> cases;
  hon::kernels::TransposedTransitions transitions;
  std::vector<double> start_cdf;

  Fixture() {
    const auto cfg = hon::GridConfig::desk(1);
    corpus = hon::generate_trajectories(cfg, hon::generate_manifest(cfg, {}, cfg.seed));
    network = hon::build_network(hon::extract_rules(corpus, {5, 5}), corpus.entities);
    cases = hon::make_test_cases(corpus, network, 3);
    transitions = hon::kernels::transpose_transitions(network);
    const auto pi = hon::stationary_distribution(network);
    start_cdf.resize(pi.size());
    std::partial_sum(pi.begin(), pi.end(), start_cdf.begin());
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

template <auto Fn>
void count_observations(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.corpus, 5));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.corpus.movement_count()));
}

template <auto Fn>
void propagate(benchmark::State& state) {
  const auto& f = fixture();
  std::vector<double> x(f.network.node_count(), 1.0 / static_cast<double>(f.network.node_count()));
  std::vector<double> y(x.size());
  for (auto _ : state) {
    Fn(f.transitions, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <auto Fn>
void accuracy_counts(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.network, f.cases, 3, 20, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.cases.size()) * 20);
}

template <auto Fn>
void return_hits(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.network, f.start_cdf, 2, 100'000, 7));
  state.SetItemsProcessed(state.iterations() * 100'000);
}

}  // namespace

using namespace hon::kernels;

BENCHMARK(count_observations<count_observations_serial>)->Name("count_observations/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(count_observations<count_observations_parallel>)->Name("count_observations/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(propagate<propagate_serial>)->Name("propagate/serial");
BENCHMARK(propagate<propagate_parallel>)->Name("propagate/parallel");
BENCHMARK(accuracy_counts<accuracy_counts_serial>)->Name("accuracy_counts/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(accuracy_counts<accuracy_counts_parallel>)->Name("accuracy_counts/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(return_hits<return_hits_serial>)->Name("return_hits/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(return_hits<return_hits_parallel>)->Name("return_hits/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
