#include "hon/walk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hon/error.hpp"
#include "hon/kernels/ensemble.hpp"
#include "hon/kernels/spmv.hpp"

namespace hon {

std::vector<std::pair<NodeId, double>> transition_distribution(const Network& network, NodeId node) {
  std::vector<std::pair<NodeId, double>> out;
  auto succ = network.successors(node);
  auto w = network.weights(node);
  const double sum = network.out_weight(node);
  out.reserve(succ.size());
  for (std::size_t i = 0; i < succ.size(); ++i) out.emplace_back(succ[i], w[i] / sum);
  return out;
}

std::optional<NodeId> sample_successor(const Network& network, NodeId node, RandomStream& rng) {
  auto cdf = network.cumulative(node);
  if (cdf.empty()) return std::nullopt;
  const double u = rng.uniform() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return network.successors(node)[static_cast<std::size_t>(it - cdf.begin())];
}

NodeId locate_context(const Network& network, std::span<const EntityId> history) {
  if (history.empty()) throw Error(ErrorKind::InvalidArgument, "empty history");
  const std::size_t longest = std::min(history.size(), network.max_node_order());
  for (std::size_t len = longest; len >= 1; --len) {
    if (auto node = network.find(history.subspan(history.size() - len))) return *node;
  }
  throw Error(ErrorKind::UnknownEntity,
              "entity " + std::to_string(history.back()) + " has no node in the network");
}

std::vector<EntityId> simulate_walk(const Network& network, WalkState& state, std::size_t steps) {
  std::vector<EntityId> path;
  path.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    auto next = sample_successor(network, state.node, state.rng);
    if (!next) break;
    state.node = *next;
    path.push_back(network.entity(*next));
  }
  return path;
}

std::vector<TestCase> make_test_cases(const Corpus& corpus, const Network& network, std::size_t holdout) {
  std::vector<TestCase> cases;
  for (const auto& t : corpus.trajectories) {
    if (t.entities.size() <= holdout) continue;
    const std::size_t cut = t.entities.size() - holdout;
    TestCase c;
    c.truth.assign(t.entities.begin() + static_cast<std::ptrdiff_t>(cut), t.entities.end());
    try {
      c.start = locate_context(network, std::span<const EntityId>(t.entities).first(cut));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnknownEntity) throw;
      // no node to start from: every horizon is scored as a miss
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

AccuracyReport score_accuracy(const Network& network, std::span<const TestCase> cases,
                              const AccuracyOptions& options) {
  if (cases.empty()) throw Error(ErrorKind::InvalidArgument, "no test trajectories longer than the holdout");
  if (options.holdout == 0 || options.repeats == 0)
    throw Error(ErrorKind::InvalidArgument, "holdout and repeats must be positive");
  const auto counts =
      kernels::accuracy_counts_parallel(network, cases, options.holdout, options.repeats, options.seed);

  AccuracyReport report;
  report.repeats = options.repeats;
  report.test_trajectories = cases.size();
  const double n = static_cast<double>(cases.size());
  for (std::size_t h = 0; h < options.holdout; ++h) {
    double sum = 0.0;
    for (std::size_t r = 0; r < options.repeats; ++r)
      sum += static_cast<double>(counts[r * options.holdout + h]) / n;
    const double mean = sum / static_cast<double>(options.repeats);
    double sq = 0.0;
    for (std::size_t r = 0; r < options.repeats; ++r) {
      const double d = static_cast<double>(counts[r * options.holdout + h]) / n - mean;
      sq += d * d;
    }
    const double sd = options.repeats > 1 ? std::sqrt(sq / static_cast<double>(options.repeats - 1)) : 0.0;
    report.horizons.push_back({h + 1, mean, sd});
  }
  return report;
}

AccuracyReport evaluate_accuracy(const Corpus& corpus, const NetworkFactory& build,
                                 const AccuracyOptions& options) {
  const Network network = build(trim_tails(corpus, options.holdout));
  const auto cases = make_test_cases(corpus, network, options.holdout);
  return score_accuracy(network, cases, options);
}

void write_accuracy_csv(std::ostream& out, const AccuracyReport& report) {
  out << "horizon,mean_accuracy,std_dev\n";
  for (const auto& h : report.horizons)
    out << h.horizon << ',' << format_weight(h.mean) << ',' << format_weight(h.std_dev) << '\n';
}

void write_accuracy_json(std::ostream& out, const AccuracyReport& report) {
  out << "{\"repeats\":" << report.repeats << ",\"test_trajectories\":" << report.test_trajectories
      << ",\"horizons\":[";
  for (std::size_t i = 0; i < report.horizons.size(); ++i) {
    const auto& h = report.horizons[i];
    if (i) out << ',';
    out << "{\"horizon\":" << h.horizon << ",\"mean_accuracy\":" << format_weight(h.mean)
        << ",\"std_dev\":" << format_weight(h.std_dev) << '}';
  }
  out << "]}\n";
}

std::vector<double> stationary_distribution(const Network& network, const StationaryOptions& options) {
  const std::size_t n = network.node_count();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "stationary distribution of an empty network");
  if (!(options.teleport > 0.0 && options.teleport < 1.0))
    throw Error(ErrorKind::InvalidArgument, "teleport must lie in (0, 1)");
  const auto m = kernels::transpose_transitions(network);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, inv_n), y(n);
  for (int it = 0; it < options.max_iter; ++it) {
    kernels::propagate_parallel(m, x, y);
    double dangling = 0.0;
    for (NodeId d : m.dangling) dangling += x[d];
    const double spread = (1.0 - options.teleport) * dangling * inv_n + options.teleport * inv_n;
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = (1.0 - options.teleport) * y[j] + spread;
      change += std::abs(v - x[j]);
      y[j] = v;
    }
    x.swap(y);
    if (change < options.tol) return x;
  }
  throw Error(ErrorKind::NonConvergence,
              "stationary distribution did not converge in " + std::to_string(options.max_iter) + " iterations");
}

double entropy_rate(const Network& network, const StationaryOptions& options) {
  const auto pi = stationary_distribution(network, options);
  double h = 0.0;
  for (NodeId u = 0; u < network.node_count(); ++u) {
    const double out = network.out_weight(u);
    double row = 0.0;
    for (double w : network.weights(u)) {
      const double p = w / out;
      row -= p * std::log2(p);
    }
    h += pi[u] * row;
  }
  return std::max(h, 0.0);
}

double return_probability(const Network& network, std::size_t steps, std::size_t samples,
                          std::uint64_t seed, const StationaryOptions& options) {
  if (steps == 0) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1");
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  const auto pi = stationary_distribution(network, options);
  std::vector<double> cdf(pi.size());
  double running = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) cdf[i] = running += pi[i];
  const auto hits = kernels::return_hits_parallel(network, cdf, steps, samples, seed);
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace hon
