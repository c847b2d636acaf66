#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hon/ingest.hpp"
#include "hon/types.hpp"

namespace hon {

/// Observed next-step counts of one source, sorted by target id.
using Counts = std::vector<std::pair<EntityId, std::uint64_t>>;
/// Next-step probabilities of one source, sorted by target id, all > 0.
using Distribution = std::vector<std::pair<EntityId, double>>;

std::uint64_t total(const Counts& counts);

/// Source path -> (target -> count). Sources have length 1..max_order.
struct CountTable {
  std::unordered_map<Path, Counts, PathHash> counts;

  const Counts* find(const Path& source) const;
  std::uint64_t support(const Path& source) const;
  /// Sum of counts over all sources of the given order.
  std::uint64_t mass(std::size_t order) const;
  bool operator==(const CountTable&) const = default;
};

/// Support-filtered counts and their normalised distributions. Both maps
/// share the same key set.
struct DistributionTable {
  CountTable filtered;
  std::unordered_map<Path, Distribution, PathHash> distributions;

  const Distribution* find(const Path& source) const;
};

struct ExtractionParams {
  int max_order = 5;
  std::uint64_t min_support = 5;

  void validate() const;
};

/// Extracted dependency rules. `valid` holds the sources that were accepted
/// as the highest significant context of some path; every other key is
/// present only because it precedes one of them.
struct RuleSet {
  std::unordered_map<Path, Counts, PathHash> rules;
  std::unordered_set<Path, PathHash> valid;

  bool contains(const Path& source) const { return rules.count(source) != 0; }
  std::size_t size() const { return rules.size(); }
  /// Keys ordered by length, then by entity label.
  std::vector<Path> sorted_sources(const EntityTable& table) const;
  std::size_t count_of_order(std::size_t order) const;
};

/// Counts every window of length 2..max_order+1 in every trajectory.
CountTable build_observations(const Corpus& corpus, int max_order);

/// Drops (source, target) pairs below `min_support`, drops emptied sources
/// and normalises what is left.
DistributionTable build_distributions(const CountTable& counts, std::uint64_t min_support);

/// KL(p || q) in bits. Raises SupportViolation if p puts mass where q has none.
double kl_divergence(const Distribution& p, const Distribution& q);

/// `order / log2(support)`; +inf when support <= 1.
double significance_threshold(int order, std::uint64_t support);

/// Grows variable-order rules from every first-order source.
RuleSet extract_rules(const Corpus& corpus, const ExtractionParams& params);
RuleSet extract_rules(const CountTable& counts, const ExtractionParams& params);

/// Diagnostic listing: `h.….curr -> target count`, one line per rule,
/// sorted lexicographically.
void dump_rules(std::ostream& out, const RuleSet& rules, const EntityTable& table);

}  // namespace hon
