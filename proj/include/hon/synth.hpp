#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hon/ingest.hpp"
#include "hon/rules.hpp"

namespace hon {

/// Torus of rows x cols cells walked by independent walkers.
struct GridConfig {
  int rows = 10;
  int cols = 10;
  std::size_t walkers = 100'000;
  std::size_t steps = 100;
  std::uint64_t seed = 0;

  /// 1,000 walkers x 100 steps, for quick runs.
  static GridConfig desk(std::uint64_t seed);
  /// 100,000 walkers x 100 steps = 10^7 movements.
  static GridConfig full(std::uint64_t seed);

  void validate() const;
  std::size_t cell_count() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
  std::string cell_name(std::size_t cell) const;
  /// Up, down, left, right with wrap-around.
  std::vector<std::size_t> neighbours(std::size_t cell) const;
};

/// When a walker's recent path equals `source`, its next cell is drawn from
/// `branch` instead of uniformly among neighbours.
struct InjectedRule {
  std::vector<std::string> source;
  std::vector<std::pair<std::string, double>> branch;

  std::size_t order() const { return source.size(); }
  bool operator==(const InjectedRule&) const = default;
};

struct ManifestCounts {
  std::size_t order2 = 10;
  std::size_t order3 = 10;
  std::size_t order4 = 10;
};

/// Samples distinct grid paths as rule sources (no repeated cells, distinct
/// current cells, none a prefix of another, and no rule's current cell
/// inside another source, so every source stays reachable) with two-way
/// branches onto
/// neighbours of the current cell, probabilities drawn from
/// {0.6/0.4, 0.7/0.3, 0.8/0.2}. Raises InfeasibleConfig when the grid cannot
/// hold the requested rules.
std::vector<InjectedRule> generate_manifest(const GridConfig& cfg, const ManifestCounts& counts,
                                            std::uint64_t seed);

/// Walker w starts on a uniform cell and takes cfg.steps steps; draw n of
/// walker w comes from stream (seed, w), so output does not depend on the
/// thread count. Longest matching rule wins.
Corpus generate_trajectories(const GridConfig& cfg, const std::vector<InjectedRule>& manifest);

void write_manifest(std::ostream& out, const std::vector<InjectedRule>& manifest);
std::vector<InjectedRule> read_manifest(std::istream& in);
void write_manifest_file(const std::filesystem::path& path, const std::vector<InjectedRule>& manifest);
std::vector<InjectedRule> read_manifest_file(const std::filesystem::path& path);

struct OrderRecovery {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct RecoveryReport {
  std::map<std::size_t, OrderRecovery> by_order;
  std::size_t injected = 0;
  std::size_t recovered = 0;
  bool exact_match = false;

  std::size_t false_positives() const;
  std::size_t false_negatives() const;
};

/// An injected rule counts as recovered when its source was accepted as a
/// valid (highest significant) context. Extracted sources of order > 1 that
/// are neither injected sources nor their prefixes are false positives.
RecoveryReport validate_recovery(const RuleSet& extracted, const EntityTable& table,
                                 const std::vector<InjectedRule>& manifest);

void write_recovery_csv(std::ostream& out, const RecoveryReport& report);

}  // namespace hon
