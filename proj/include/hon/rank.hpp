#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hon/wiring.hpp"

namespace hon {

/// Where random resets (and dangling mass) land.
enum class Teleport {
  Node,    ///< uniformly over network nodes, the unmodified algorithm
  Entity,  ///< uniformly over entities, split evenly among each entity's nodes
};

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-12;
  int max_iter = 200;
  Teleport teleport = Teleport::Node;
};

/// Entity name -> score.
using EntityScores = std::map<std::string, double>;

struct RankVector {
  std::vector<double> node_scores;
  EntityScores entity_scores;
  double damping = 0.0;
  int iterations = 0;
};

/// Power iteration of r <- d P^T r + (1 - d) u + d (dangling mass) u until
/// the L1 change drops below tol. Entity scores are filled by aggregation.
RankVector pagerank(const Network& network, const PageRankOptions& options = {});

/// Sums node scores per entity.
EntityScores aggregate_scores(const RankVector& rank, const Network& network);

struct RankDelta {
  std::string entity;
  double score_base;
  double score_other;
  double delta;
  /// (rank_base - rank_other) / rank_base with 1-based ranks by descending
  /// score; positive means the entity moved up.
  double rel_rank_change;
};

/// Per-entity differences sorted by |delta| descending, ties by name.
/// Raises UniverseMismatch unless both sides cover the same entities.
std::vector<RankDelta> rank_delta(const EntityScores& base, const EntityScores& other);

/// One row per entity, best rank first; ties keep name order.
void write_rank_csv(std::ostream& out, const EntityScores& scores);
void write_delta_csv(std::ostream& out, const std::vector<RankDelta>& deltas);

}  // namespace hon
