#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hon/ingest.hpp"
#include "hon/random.hpp"
#include "hon/wiring.hpp"

namespace hon {

struct WalkState {
  NodeId node;
  RandomStream rng;
};

/// Out-neighbours with probabilities W(n->m) / sum_k W(n->k). Empty for a
/// dangling node.
std::vector<std::pair<NodeId, double>> transition_distribution(const Network& network, NodeId node);

/// Draws one successor; nullopt at a dangling node.
std::optional<NodeId> sample_successor(const Network& network, NodeId node, RandomStream& rng);

/// Highest-order node whose context is a suffix of `history`
/// (chronological, current entity last). Raises UnknownEntity if no node
/// matches at all.
NodeId locate_context(const Network& network, std::span<const EntityId> history);

/// Walks up to `steps` steps and returns the entity of every node visited
/// after the start. Stops early at a dangling node.
std::vector<EntityId> simulate_walk(const Network& network, WalkState& state, std::size_t steps);

struct HorizonAccuracy {
  std::size_t horizon;
  double mean;
  double std_dev;
};

struct AccuracyReport {
  std::vector<HorizonAccuracy> horizons;
  std::size_t repeats = 0;
  std::size_t test_trajectories = 0;
};

using NetworkFactory = std::function<Network(const Corpus&)>;

struct AccuracyOptions {
  std::size_t holdout = 3;
  std::size_t repeats = 1000;
  std::uint64_t seed = 0;
};

/// Held-out-tail accuracy: the network is built from every trajectory minus
/// its last `holdout` entities; a walker started at each training tail walks
/// `holdout` steps. Horizon h counts a trial as correct when the first h
/// generated entities all match. Means and sample standard deviations are
/// taken over repeats.
AccuracyReport evaluate_accuracy(const Corpus& corpus, const NetworkFactory& build,
                                 const AccuracyOptions& options);

/// Same protocol against an already-built network, given the test split.
struct TestCase {
  std::optional<NodeId> start;
  std::vector<EntityId> truth;
};
std::vector<TestCase> make_test_cases(const Corpus& corpus, const Network& network, std::size_t holdout);
AccuracyReport score_accuracy(const Network& network, std::span<const TestCase> cases,
                              const AccuracyOptions& options);

void write_accuracy_csv(std::ostream& out, const AccuracyReport& report);
void write_accuracy_json(std::ostream& out, const AccuracyReport& report);

struct StationaryOptions {
  double teleport = 0.01;
  double tol = 1e-12;
  int max_iter = 100000;
};

/// Power iteration on (1 - teleport) P + teleport / N with dangling rows
/// made uniform; stops at L1 change < tol, else NonConvergence.
std::vector<double> stationary_distribution(const Network& network, const StationaryOptions& options = {});

/// -sum_i pi(i) sum_j p(i->j) log2 p(i->j), bits. pi is the teleport-smoothed
/// stationary distribution; p is the raw transition probability.
double entropy_rate(const Network& network, const StationaryOptions& options = {});

/// Monte Carlo share of stationary-start walkers whose entity after exactly
/// `steps` steps equals the start entity. Walks cut short count as misses.
double return_probability(const Network& network, std::size_t steps, std::size_t samples,
                          std::uint64_t seed, const StationaryOptions& options = {});

}  // namespace hon
