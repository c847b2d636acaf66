#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hon/types.hpp"

namespace hon {

/// One moving object's path, earliest entity first.
struct Trajectory {
  std::string id;
  std::vector<EntityId> entities;
};

/// Trajectories plus the table their entity ids refer to.
struct Corpus {
  std::shared_ptr<EntityTable> entities = std::make_shared<EntityTable>();
  std::vector<Trajectory> trajectories;

  std::size_t movement_count() const;
};

struct ParseOptions {
  bool has_id = false;
  bool dedup_consecutive = false;
  /// Trajectories longer than this are dropped (crawler filter). No default.
  std::optional<std::size_t> max_trajectory_len;
};

/// True for a non-empty token free of whitespace, `|` and `,`.
bool is_valid_entity(std::string_view token);

/// Reads one trajectory per line. Lines without entities are skipped; a
/// token carrying a reserved character raises MalformedLine with its line
/// number. Raises EmptyInput when nothing survives.
Corpus parse_trajectories(std::istream& in, const ParseOptions& options = {});
Corpus read_trajectory_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Inverse of parse_trajectories for a corpus parsed with the same `has_id`.
void write_trajectories(std::ostream& out, const Corpus& corpus, bool with_id);
void write_trajectory_file(const std::filesystem::path& path, const Corpus& corpus, bool with_id);

/// All contiguous windows of `length` entities, in order. Empty when the
/// trajectory is shorter than the window.
std::vector<std::span<const EntityId>> extract_subsequences(std::span<const EntityId> trajectory,
                                                            std::size_t length);

/// Drops the last `holdout` entities of every trajectory longer than
/// `holdout`; shorter trajectories are kept whole.
Corpus trim_tails(const Corpus& corpus, std::size_t holdout);

}  // namespace hon
