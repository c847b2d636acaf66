#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hon {

using EntityId = std::uint32_t;

/// A chronological run of entities. As a rule source the last element is the
/// current entity and the earlier ones are remembered history.
using Path = std::vector<EntityId>;

struct PathHash {
  std::size_t operator()(std::span<const EntityId> path) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (EntityId e : path) {
      h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
  std::size_t operator()(const Path& path) const noexcept {
    return (*this)(std::span<const EntityId>(path));
  }
};

/// Bidirectional map between entity tokens and dense ids. Ids are handed out
/// in first-seen order.
class EntityTable {
 public:
  EntityId intern(std::string_view name);
  std::optional<EntityId> find(std::string_view name) const;
  const std::string& name(EntityId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, EntityId> ids_;
};

/// Label of a context in node notation: `curr` or `curr|h1,h2,...` with the
/// history listed most recent first.
std::string context_label(const EntityTable& table, std::span<const EntityId> context);

/// Chronological `a.b.c` rendering used by the rule dump.
std::string dotted_path(const EntityTable& table, std::span<const EntityId> path);

}  // namespace hon
