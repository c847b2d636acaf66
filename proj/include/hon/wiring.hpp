#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hon/ingest.hpp"
#include "hon/rules.hpp"
#include "hon/types.hpp"

namespace hon {

using NodeId = std::uint32_t;

/// Weighted directed graph whose nodes are contexts (an entity plus a
/// remembered history). Immutable once built; node ids follow label order
/// and every adjacency row is sorted by target id, so iteration is already
/// in the canonical export order.
class Network {
 public:
  Network() = default;

  std::size_t node_count() const noexcept { return contexts_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  /// Edges over ordered node pairs, E / (N (N - 1)).
  double density() const;
  double total_weight() const;

  /// Chronological context; the last element is the node's entity.
  const Path& context(NodeId node) const { return contexts_[node]; }
  EntityId entity(NodeId node) const { return contexts_[node].back(); }
  std::size_t order(NodeId node) const { return contexts_[node].size(); }
  std::size_t max_node_order() const noexcept { return max_order_; }
  std::string label(NodeId node) const { return context_label(*entities_, contexts_[node]); }
  std::optional<NodeId> find(std::span<const EntityId> context) const;

  std::span<const NodeId> successors(NodeId node) const {
    return {targets_.data() + offsets_[node], targets_.data() + offsets_[node + 1]};
  }
  std::span<const double> weights(NodeId node) const {
    return {weights_.data() + offsets_[node], weights_.data() + offsets_[node + 1]};
  }
  /// Running sums of `weights(node)`; last element is the out-weight.
  std::span<const double> cumulative(NodeId node) const {
    return {cumulative_.data() + offsets_[node], cumulative_.data() + offsets_[node + 1]};
  }
  double out_weight(NodeId node) const;
  std::optional<double> edge_weight(NodeId from, NodeId to) const;
  std::size_t in_degree(NodeId node) const { return in_degree_[node]; }

  const EntityTable& entities() const { return *entities_; }
  std::shared_ptr<const EntityTable> entity_table() const { return entities_; }

 private:
  friend class NetworkBuilder;

  std::shared_ptr<const EntityTable> entities_;
  std::vector<Path> contexts_;
  std::unordered_map<Path, NodeId, PathHash> index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<std::size_t> in_degree_;
  std::size_t max_order_ = 0;
};

/// Mutable adjacency keyed by context, frozen into a Network by `finish`.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(std::shared_ptr<const EntityTable> entities);

  void add_node(const Path& context);
  void set_edge(const Path& from, const Path& to, double weight);
  void remove_edge(const Path& from, const Path& to);
  std::optional<double> edge(const Path& from, const Path& to) const;
  bool has_node(const Path& context) const;
  /// Snapshot of all edges as (from, to, weight).
  std::vector<std::tuple<Path, Path, double>> edges() const;

  Network finish() const;

 private:
  std::uint32_t intern(const Path& context);

  std::shared_ptr<const EntityTable> entities_;
  std::vector<Path> contexts_;
  std::unordered_map<Path, std::uint32_t, PathHash> index_;
  std::vector<std::map<std::uint32_t, double>> out_;
};

/// Wires a rule set into a higher-order network: first-order rules become
/// edges, higher-order rules hang off new nodes in ascending order while
/// the prefix edge is redirected to them, then edge tails are moved onto
/// the highest-order node matching their context. Raises DanglingPrefix if
/// a rule's prefix is missing.
Network build_network(const RuleSet& rules, std::shared_ptr<const EntityTable> entities);

/// Conventional network: edge weight = number of observed pairs (>= min_support).
Network build_first_order(const Corpus& corpus, std::uint64_t min_support);

/// Every node is a full k-entity context; edges shift the context by one
/// step with weight = count of the (k+1)-window (>= min_support).
Network build_fixed_order(const Corpus& corpus, int k, std::uint64_t min_support);

/// Edge weights summed by (entity of source, entity of target).
std::map<std::pair<EntityId, EntityId>, double> project_first_order(const Network& network);

/// Shortest decimal that reads back to the same double.
std::string format_weight(double w);

/// `source_label,target_label,weight`, sorted by (source, target) label.
void write_edge_list(std::ostream& out, const Network& network);
void write_edge_list_file(const std::filesystem::path& path, const Network& network);
/// Reads the edge list format back; labels are split on the reserved
/// separators, which entity tokens never contain.
Network read_edge_list(std::istream& in, std::shared_ptr<EntityTable> entities);

/// Pajek `*Vertices` / `*Arcs` with 1-based indices, for Infomap and friends.
void write_pajek(std::ostream& out, const Network& network);
void write_pajek_file(const std::filesystem::path& path, const Network& network);

}  // namespace hon
