#include "hon/vom.hpp"

#include <algorithm>
#include <ostream>

namespace hon {

std::optional<std::size_t> ContextTree::find(const Path& path) const {
  auto it = index_.find(path);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ContextTree build_context_tree(const CountTable& counts, std::uint64_t min_support) {
  DistributionTable table = build_distributions(counts, min_support);
  std::vector<Path> paths;
  paths.reserve(table.distributions.size());
  for (const auto& [path, distr] : table.distributions) paths.push_back(path);
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  ContextTree tree;
  for (auto& path : paths) {
    ContextTree::Context c;
    c.distribution = table.distributions.at(path);
    c.support = total(table.filtered.counts.at(path));
    c.path = path;
    if (path.size() > 1) {
      // a supported context's suffix is at least as frequent, so it exists
      const Path parent(path.begin() + 1, path.end());
      auto it = tree.index_.find(parent);
      if (it != tree.index_.end()) {
        c.parent = it->second;
        tree.contexts_[it->second].children.push_back(tree.contexts_.size());
      }
    }
    tree.max_order_ = std::max(tree.max_order_, path.size());
    tree.index_.emplace(path, tree.contexts_.size());
    tree.contexts_.push_back(std::move(c));
  }
  return tree;
}

ContextSet prune_vom(const ContextTree& tree) {
  const auto& ctx = tree.contexts();
  std::vector<char> keep(ctx.size(), 0);
  // contexts are stored by ascending order, so a reverse sweep is deepest first
  for (std::size_t i = ctx.size(); i-- > 0;) {
    const auto& c = ctx[i];
    if (c.path.size() == 1 || !c.parent) {
      keep[i] = 1;
      continue;
    }
    const bool child_kept = std::any_of(c.children.begin(), c.children.end(), [&](std::size_t k) { return keep[k]; });
    const double divergence = kl_divergence(c.distribution, ctx[*c.parent].distribution);
    if (child_kept || divergence > significance_threshold(static_cast<int>(c.path.size()), c.support))
      keep[i] = 1;
  }
  ContextSet out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (!keep[i]) continue;
    for (std::optional<std::size_t> j = i; j; j = ctx[*j].parent) out.insert(ctx[*j].path);
  }
  return out;
}

ComparisonReport compare_rulesets(const RuleSet& hon, const ContextSet& vom) {
  ComparisonReport report;
  std::size_t max_order = 0;
  for (const auto& [p, c] : hon.rules) max_order = std::max(max_order, p.size());
  for (const auto& p : vom) max_order = std::max(max_order, p.size());
  report.rows.resize(max_order);
  for (std::size_t o = 0; o < max_order; ++o) report.rows[o].order = o + 1;

  for (const auto& [p, c] : hon.rules) {
    auto& row = report.rows[p.size() - 1];
    ++row.hon;
    if (!vom.count(p)) {
      ++row.hon_only;
      report.hon_only.push_back(p);
    }
  }
  for (const auto& p : vom) {
    auto& row = report.rows[p.size() - 1];
    ++row.vom;
    if (!hon.contains(p)) {
      ++row.vom_only;
      report.vom_only.push_back(p);
    }
  }
  std::sort(report.hon_only.begin(), report.hon_only.end());
  std::sort(report.vom_only.begin(), report.vom_only.end());
  for (const auto& row : report.rows) {
    report.totals.hon += row.hon;
    report.totals.vom += row.vom;
    report.totals.hon_only += row.hon_only;
    report.totals.vom_only += row.vom_only;
  }
  return report;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "order,hon,vom,hon_only,vom_only\n";
  for (const auto& r : report.rows)
    out << r.order << ',' << r.hon << ',' << r.vom << ',' << r.hon_only << ',' << r.vom_only << '\n';
  const auto& t = report.totals;
  out << "total," << t.hon << ',' << t.vom << ',' << t.hon_only << ',' << t.vom_only << '\n';
}

}  // namespace hon
