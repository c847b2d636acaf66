#include "hon/rank.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hon/error.hpp"
#include "hon/kernels/spmv.hpp"

namespace hon {
namespace {

std::vector<double> teleport_vector(const Network& network, Teleport mode) {
  const std::size_t n = network.node_count();
  std::vector<double> u(n, 1.0 / static_cast<double>(n));
  if (mode == Teleport::Node) return u;
  std::map<EntityId, std::size_t> per_entity;
  for (NodeId v = 0; v < n; ++v) ++per_entity[network.entity(v)];
  const double entities = static_cast<double>(per_entity.size());
  for (NodeId v = 0; v < n; ++v)
    u[v] = 1.0 / (entities * static_cast<double>(per_entity[network.entity(v)]));
  return u;
}

std::map<std::string, std::size_t> ranks_of(const EntityScores& scores) {
  std::vector<std::pair<std::string, double>> sorted(scores.begin(), scores.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < sorted.size(); ++i) rank[sorted[i].first] = i + 1;
  return rank;
}

}  // namespace

RankVector pagerank(const Network& network, const PageRankOptions& options) {
  const std::size_t n = network.node_count();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "pagerank of an empty network");
  if (!(options.damping >= 0.0 && options.damping < 1.0))
    throw Error(ErrorKind::InvalidArgument, "damping must lie in [0, 1)");
  const auto m = kernels::transpose_transitions(network);
  const auto u = teleport_vector(network, options.teleport);
  const double d = options.damping;

  std::vector<double> r = u, next(n);
  for (int it = 1; it <= options.max_iter; ++it) {
    kernels::propagate_parallel(m, r, next);
    double dangling = 0.0;
    for (NodeId v : m.dangling) dangling += r[v];
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d * next[j] + ((1.0 - d) + d * dangling) * u[j];
      change += std::abs(v - r[j]);
      next[j] = v;
    }
    r.swap(next);
    if (change < options.tol) {
      RankVector rv;
      rv.node_scores = std::move(r);
      rv.damping = d;
      rv.iterations = it;
      rv.entity_scores = aggregate_scores(rv, network);
      return rv;
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "pagerank did not converge in " + std::to_string(options.max_iter) + " iterations");
}

EntityScores aggregate_scores(const RankVector& rank, const Network& network) {
  EntityScores out;
  for (NodeId v = 0; v < network.node_count(); ++v)
    out[network.entities().name(network.entity(v))] += rank.node_scores[v];
  return out;
}

std::vector<RankDelta> rank_delta(const EntityScores& base, const EntityScores& other) {
  if (base.size() != other.size() ||
      !std::equal(base.begin(), base.end(), other.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; }))
    throw Error(ErrorKind::UniverseMismatch, "score vectors cover different entities");
  const auto rb = ranks_of(base);
  const auto ro = ranks_of(other);
  std::vector<RankDelta> out;
  out.reserve(base.size());
  for (const auto& [name, sb] : base) {
    const double so = other.at(name);
    const double rank_b = static_cast<double>(rb.at(name));
    const double rank_o = static_cast<double>(ro.at(name));
    out.push_back({name, sb, so, so - sb, (rank_b - rank_o) / rank_b});
  }
  std::stable_sort(out.begin(), out.end(), [](const RankDelta& a, const RankDelta& b) {
    return std::abs(a.delta) > std::abs(b.delta);
  });
  return out;
}

void write_rank_csv(std::ostream& out, const EntityScores& scores) {
  const auto ranks = ranks_of(scores);
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& [name, r] : ranks) order.emplace_back(r, name);
  std::sort(order.begin(), order.end());
  out << "entity,score,rank\n";
  for (const auto& [r, name] : order) out << name << ',' << format_weight(scores.at(name)) << ',' << r << '\n';
}

void write_delta_csv(std::ostream& out, const std::vector<RankDelta>& deltas) {
  out << "entity,score_base,score_other,delta,rel_rank_change\n";
  for (const auto& d : deltas)
    out << d.entity << ',' << format_weight(d.score_base) << ',' << format_weight(d.score_other) << ','
        << format_weight(d.delta) << ',' << format_weight(d.rel_rank_change) << '\n';
}

}  // namespace hon
