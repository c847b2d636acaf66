#include "hon/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "hon/error.hpp"
#include "hon/kernels/observations.hpp"

namespace hon {

std::uint64_t total(const Counts& counts) {
  std::uint64_t sum = 0;
  for (const auto& [target, n] : counts) sum += n;
  return sum;
}

const Counts* CountTable::find(const Path& source) const {
  auto it = counts.find(source);
  return it == counts.end() ? nullptr : &it->second;
}

std::uint64_t CountTable::support(const Path& source) const {
  const Counts* c = find(source);
  return c ? total(*c) : 0;
}

std::uint64_t CountTable::mass(std::size_t order) const {
  std::uint64_t sum = 0;
  for (const auto& [source, c] : counts)
    if (source.size() == order) sum += total(c);
  return sum;
}

const Distribution* DistributionTable::find(const Path& source) const {
  auto it = distributions.find(source);
  return it == distributions.end() ? nullptr : &it->second;
}

void ExtractionParams::validate() const {
  if (max_order < 1) throw Error(ErrorKind::InvalidArgument, "max_order must be >= 1");
  if (min_support < 1) throw Error(ErrorKind::InvalidArgument, "min_support must be >= 1");
}

std::vector<Path> RuleSet::sorted_sources(const EntityTable& table) const {
  std::vector<std::pair<std::string, const Path*>> keyed;
  keyed.reserve(rules.size());
  for (const auto& [source, counts] : rules) keyed.emplace_back(context_label(table, source), &source);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second->size() != b.second->size()) return a.second->size() < b.second->size();
    return a.first < b.first;
  });
  std::vector<Path> out;
  out.reserve(keyed.size());
  for (const auto& [label, path] : keyed) out.push_back(*path);
  return out;
}

std::size_t RuleSet::count_of_order(std::size_t order) const {
  return static_cast<std::size_t>(std::count_if(
      rules.begin(), rules.end(), [order](const auto& kv) { return kv.first.size() == order; }));
}

CountTable build_observations(const Corpus& corpus, int max_order) {
  if (max_order < 1) throw Error(ErrorKind::InvalidArgument, "max_order must be >= 1");
  return kernels::count_observations_parallel(corpus, max_order);
}

DistributionTable build_distributions(const CountTable& counts, std::uint64_t min_support) {
  if (min_support < 1) throw Error(ErrorKind::InvalidArgument, "min_support must be >= 1");
  DistributionTable out;
  for (const auto& [source, targets] : counts.counts) {
    Counts kept;
    for (const auto& [target, n] : targets)
      if (n >= min_support) kept.emplace_back(target, n);
    if (kept.empty()) continue;
    const double sum = static_cast<double>(total(kept));
    Distribution distr;
    distr.reserve(kept.size());
    for (const auto& [target, n] : kept) distr.emplace_back(target, static_cast<double>(n) / sum);
    out.distributions.emplace(source, std::move(distr));
    out.filtered.counts.emplace(source, std::move(kept));
  }
  return out;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
  double sum = 0.0;
  auto qi = q.begin();
  for (const auto& [x, px] : p) {
    if (px <= 0.0) continue;
    while (qi != q.end() && qi->first < x) ++qi;
    if (qi == q.end() || qi->first != x || qi->second <= 0.0)
      throw Error(ErrorKind::SupportViolation,
                  "KL divergence undefined: target " + std::to_string(x) +
                      " has mass in P but not in Q");
    sum += px * std::log2(px / qi->second);
  }
  return std::max(sum, 0.0);
}

double significance_threshold(int order, std::uint64_t support) {
  if (support <= 1) return std::numeric_limits<double>::infinity();
  return static_cast<double>(order) / std::log2(static_cast<double>(support));
}

namespace {

class RuleGrower {
 public:
  RuleGrower(const DistributionTable& table, int max_order)
      : table_(table), max_order_(max_order) {
    // index each source under its one-shorter suffix
    for (const auto& [source, distr] : table_.distributions) {
      if (source.size() < 2) continue;
      Path suffix(source.begin() + 1, source.end());
      extensions_[std::move(suffix)].push_back(&source);
    }
    for (auto& [key, list] : extensions_)
      std::sort(list.begin(), list.end(), [](const Path* a, const Path* b) { return *a < *b; });
  }

  RuleSet run() {
    std::vector<const Path*> roots;
    for (const auto& [source, distr] : table_.distributions)
      if (source.size() == 1) roots.push_back(&source);
    std::sort(roots.begin(), roots.end(), [](const Path* a, const Path* b) { return *a < *b; });
    for (const Path* root : roots) {
      add_to_rules(*root);
      extend_rule(*root, *root, 1);
    }
    return std::move(rules_);
  }

 private:
  void extend_rule(const Path& valid, const Path& curr, int order) {
    if (order >= max_order_) {
      accept(valid);
      return;
    }
    auto it = extensions_.find(curr);
    if (it == extensions_.end()) {
      accept(valid);
      return;
    }
    const Distribution& base = table_.distributions.at(valid);
    const int next_order = order + 1;
    for (const Path* ext : it->second) {
      const Distribution& ext_distr = table_.distributions.at(*ext);
      const std::uint64_t support = total(table_.filtered.counts.at(*ext));
      if (kl_divergence(ext_distr, base) > significance_threshold(next_order, support))
        extend_rule(*ext, *ext, next_order);
      else
        extend_rule(valid, *ext, next_order);
    }
  }

  void accept(const Path& valid) {
    rules_.valid.insert(valid);
    add_to_rules(valid);
  }

  void add_to_rules(const Path& source) {
    Path p = source;
    while (!p.empty()) {
      if (rules_.rules.count(p)) {
        // prefixes of a stored source are already stored
        break;
      }
      const Counts* c = table_.filtered.find(p);
      if (c == nullptr)
        throw Error(ErrorKind::DanglingPrefix, "prefix without observations during rule extraction");
      rules_.rules.emplace(p, *c);
      p.pop_back();
    }
  }

  const DistributionTable& table_;
  int max_order_;
  std::unordered_map<Path, std::vector<const Path*>, PathHash> extensions_;
  RuleSet rules_;
};

}  // namespace

RuleSet extract_rules(const CountTable& counts, const ExtractionParams& params) {
  params.validate();
  DistributionTable table = build_distributions(counts, params.min_support);
  return RuleGrower(table, params.max_order).run();
}

RuleSet extract_rules(const Corpus& corpus, const ExtractionParams& params) {
  params.validate();
  return extract_rules(build_observations(corpus, params.max_order), params);
}

void dump_rules(std::ostream& out, const RuleSet& rules, const EntityTable& table) {
  std::vector<std::string> lines;
  for (const auto& [source, counts] : rules.rules) {
    std::string head = dotted_path(table, source);
    for (const auto& [target, n] : counts)
      lines.push_back(head + " -> " + table.name(target) + " " + std::to_string(n));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) out << line << '\n';
}

}  // namespace hon
