#include "hon/kernels/ensemble.hpp"

#include <algorithm>

namespace hon::kernels {
namespace {

// Number of leading steps that match the truth.
std::size_t correct_prefix(const Network& network, const TestCase& c, RandomStream& rng) {
  if (!c.start) return 0;
  NodeId node = *c.start;
  std::size_t ok = 0;
  for (EntityId expected : c.truth) {
    auto next = sample_successor(network, node, rng);
    if (!next || network.entity(*next) != expected) break;
    node = *next;
    ++ok;
  }
  return ok;
}

void score_repeat(const Network& network, std::span<const TestCase> cases, std::size_t holdout,
                  std::size_t r, std::uint64_t seed, std::uint64_t* row) {
  for (std::size_t i = 0; i < cases.size(); ++i) {
    RandomStream rng(seed, {i, r});
    const std::size_t ok = correct_prefix(network, cases[i], rng);
    for (std::size_t h = 0; h < std::min(ok, holdout); ++h) ++row[h];
  }
}

bool returns(const Network& network, std::span<const double> start_cdf, std::size_t steps,
             RandomStream& rng) {
  const double u = rng.uniform() * start_cdf.back();
  auto it = std::upper_bound(start_cdf.begin(), start_cdf.end(), u);
  if (it == start_cdf.end()) --it;
  const auto start = static_cast<NodeId>(it - start_cdf.begin());
  NodeId node = start;
  for (std::size_t s = 0; s < steps; ++s) {
    auto next = sample_successor(network, node, rng);
    if (!next) return false;
    node = *next;
  }
  return network.entity(node) == network.entity(start);
}

}  // namespace

std::vector<std::uint64_t> accuracy_counts_serial(const Network& network, std::span<const TestCase> cases,
                                                  std::size_t holdout, std::size_t repeats,
                                                  std::uint64_t seed) {
  std::vector<std::uint64_t> counts(repeats * holdout, 0);
  for (std::size_t r = 0; r < repeats; ++r)
    score_repeat(network, cases, holdout, r, seed, counts.data() + r * holdout);
  return counts;
}

std::vector<std::uint64_t> accuracy_counts_parallel(const Network& network, std::span<const TestCase> cases,
                                                    std::size_t holdout, std::size_t repeats,
                                                    std::uint64_t seed) {
  std::vector<std::uint64_t> counts(repeats * holdout, 0);
  const auto n = static_cast<std::ptrdiff_t>(repeats);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    score_repeat(network, cases, holdout, ru, seed, counts.data() + ru * holdout);
  }
  return counts;
}

std::uint64_t return_hits_serial(const Network& network, std::span<const double> start_cdf,
                                 std::size_t steps, std::size_t samples, std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    RandomStream rng(seed, {s});
    hits += returns(network, start_cdf, steps, rng) ? 1 : 0;
  }
  return hits;
}

std::uint64_t return_hits_parallel(const Network& network, std::span<const double> start_cdf,
                                   std::size_t steps, std::size_t samples, std::uint64_t seed) {
  std::uint64_t hits = 0;
  const auto n = static_cast<std::ptrdiff_t>(samples);
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    RandomStream rng(seed, {static_cast<std::uint64_t>(s)});
    hits += returns(network, start_cdf, steps, rng) ? 1 : 0;
  }
  return hits;
}

}  // namespace hon::kernels
