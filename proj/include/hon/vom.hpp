#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hon/rules.hpp"

namespace hon {

/// Variable-order Markov context tree: every supported context with its
/// next-step distribution. A context's parent is the context with the
/// oldest entity removed; order-1 contexts hang off the (implicit) root.
class ContextTree {
 public:
  struct Context {
    Path path;
    Distribution distribution;
    std::uint64_t support = 0;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
  };

  const std::vector<Context>& contexts() const { return contexts_; }
  std::optional<std::size_t> find(const Path& path) const;
  std::size_t max_order() const { return max_order_; }

 private:
  friend ContextTree build_context_tree(const CountTable&, std::uint64_t);

  std::vector<Context> contexts_;
  std::unordered_map<Path, std::size_t, PathHash> index_;
  std::size_t max_order_ = 0;
};

/// Same filtering and normalisation as rule extraction.
ContextTree build_context_tree(const CountTable& counts, std::uint64_t min_support);

using ContextSet = std::unordered_set<Path, PathHash>;

/// Prunes from the deepest order down: a context with no retained child
/// is dropped when KL(context || parent) does not exceed the significance
/// threshold for its order and support. Order-1 contexts and all suffix
/// ancestors of kept contexts are kept.
ContextSet prune_vom(const ContextTree& tree);

struct ComparisonRow {
  std::size_t order = 0;
  std::size_t hon = 0;
  std::size_t vom = 0;
  std::size_t hon_only = 0;
  std::size_t vom_only = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  ///< one per order, ascending
  ComparisonRow totals;
  std::vector<Path> hon_only;  ///< sorted
  std::vector<Path> vom_only;  ///< sorted
};

ComparisonReport compare_rulesets(const RuleSet& hon, const ContextSet& vom);

/// `order,hon,vom,hon_only,vom_only` plus a `total` row.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace hon
