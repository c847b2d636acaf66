#include "hon/kernels/observations.hpp"

#include <algorithm>
#include <omp.h>

namespace hon::kernels {
namespace {

// Trie over reversed contexts: the root's children are current entities,
// their children the entity one step earlier, and so on. Walking it from a
// target position backwards visits every source of that target in one pass.
class ReverseTrie {
 public:
  ReverseTrie() {
    entity_.push_back(0);
    parent_.push_back(0);
  }

  std::uint32_t child(std::uint32_t node, EntityId e) {
    std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) | e;
    auto [it, inserted] = children_.try_emplace(key, static_cast<std::uint32_t>(entity_.size()));
    if (inserted) {
      entity_.push_back(e);
      parent_.push_back(node);
    }
    return it->second;
  }

  void add(std::uint32_t node, EntityId target) {
    ++counts_[(static_cast<std::uint64_t>(node) << 32) | target];
  }

  void count(const Trajectory& t, int max_order) {
    const auto& s = t.entities;
    for (std::size_t i = 1; i < s.size(); ++i) {
      std::uint32_t node = 0;
      for (std::size_t k = 1; k <= static_cast<std::size_t>(max_order) && k <= i; ++k) {
        node = child(node, s[i - k]);
        add(node, s[i]);
      }
    }
  }

  Path path(std::uint32_t node) const {
    Path p;
    while (node != 0) {
      p.push_back(entity_[node]);
      node = parent_[node];
    }
    return p;  // reversed-trie order is already chronological
  }

  void merge_into(std::unordered_map<Path, Counts, PathHash>& table) const {
    std::vector<Path> paths(entity_.size());
    for (const auto& [key, n] : counts_) {
      auto node = static_cast<std::uint32_t>(key >> 32);
      auto target = static_cast<EntityId>(key & 0xffffffffu);
      if (paths[node].empty()) paths[node] = path(node);
      table[paths[node]].emplace_back(target, n);
    }
  }

 private:
  std::vector<EntityId> entity_;
  std::vector<std::uint32_t> parent_;
  std::unordered_map<std::uint64_t, std::uint32_t> children_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
};

void normalise(std::unordered_map<Path, Counts, PathHash>& table) {
  for (auto& [source, counts] : table) {
    std::sort(counts.begin(), counts.end());
    Counts merged;
    merged.reserve(counts.size());
    for (const auto& [target, n] : counts) {
      if (!merged.empty() && merged.back().first == target)
        merged.back().second += n;
      else
        merged.emplace_back(target, n);
    }
    counts = std::move(merged);
  }
}

}  // namespace

CountTable count_observations_serial(const Corpus& corpus, int max_order) {
  ReverseTrie trie;
  for (const auto& t : corpus.trajectories) trie.count(t, max_order);
  CountTable table;
  trie.merge_into(table.counts);
  normalise(table.counts);
  return table;
}

CountTable count_observations_parallel(const Corpus& corpus, int max_order) {
  const auto n = static_cast<std::ptrdiff_t>(corpus.trajectories.size());
  const int threads = std::max(1, std::min<int>(omp_get_max_threads(), static_cast<int>(n)));
  std::vector<ReverseTrie> tries(static_cast<std::size_t>(threads));

#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    const std::ptrdiff_t begin = n * tid / threads;
    const std::ptrdiff_t end = n * (tid + 1) / threads;
    auto& trie = tries[static_cast<std::size_t>(tid)];
    for (std::ptrdiff_t i = begin; i < end; ++i)
      trie.count(corpus.trajectories[static_cast<std::size_t>(i)], max_order);
  }

  CountTable table;
  for (const auto& trie : tries) trie.merge_into(table.counts);
  normalise(table.counts);
  return table;
}

}  // namespace hon::kernels
