#include "hon/ingest.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hon/error.hpp"

namespace hon {

EntityId EntityTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<EntityId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<EntityId> EntityTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::string context_label(const EntityTable& table, std::span<const EntityId> context) {
  if (context.empty()) return {};
  std::string label = table.name(context.back());
  if (context.size() == 1) return label;
  label += '|';
  for (std::size_t i = context.size() - 1; i-- > 0;) {
    label += table.name(context[i]);
    if (i != 0) label += ',';
  }
  return label;
}

std::string dotted_path(const EntityTable& table, std::span<const EntityId> path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += table.name(path[i]);
  }
  return out;
}

std::size_t Corpus::movement_count() const {
  std::size_t n = 0;
  for (const auto& t : trajectories)
    if (!t.entities.empty()) n += t.entities.size() - 1;
  return n;
}

bool is_valid_entity(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c == '|' || c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
        c == '\f')
      return false;
  }
  return true;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

Corpus parse_trajectories(std::istream& in, const ParseOptions& options) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    auto tokens = split_tokens(view);
    std::size_t first = options.has_id ? 1 : 0;
    if (tokens.size() <= first) continue;

    Trajectory t;
    if (options.has_id) {
      if (!is_valid_entity(tokens[0]))
        throw Error(ErrorKind::MalformedLine,
                    "line " + std::to_string(line_no) + ": invalid trajectory id '" +
                        std::string(tokens[0]) + "'");
      t.id = std::string(tokens[0]);
    }
    t.entities.reserve(tokens.size() - first);
    for (std::size_t i = first; i < tokens.size(); ++i) {
      if (!is_valid_entity(tokens[i]))
        throw Error(ErrorKind::MalformedLine,
                    "line " + std::to_string(line_no) + ": entity '" + std::string(tokens[i]) +
                        "' contains a reserved character");
      EntityId e = corpus.entities->intern(tokens[i]);
      if (options.dedup_consecutive && !t.entities.empty() && t.entities.back() == e) continue;
      t.entities.push_back(e);
    }
    if (options.max_trajectory_len && t.entities.size() > *options.max_trajectory_len) continue;
    corpus.trajectories.push_back(std::move(t));
  }
  if (corpus.trajectories.empty()) throw Error(ErrorKind::EmptyInput, "no trajectories in input");
  return corpus;
}

Corpus read_trajectory_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_trajectories(in, options);
}

void write_trajectories(std::ostream& out, const Corpus& corpus, bool with_id) {
  const auto& table = *corpus.entities;
  for (const auto& t : corpus.trajectories) {
    bool first = true;
    if (with_id) {
      out << t.id;
      first = false;
    }
    for (EntityId e : t.entities) {
      if (!first) out << ' ';
      out << table.name(e);
      first = false;
    }
    out << '\n';
  }
}

void write_trajectory_file(const std::filesystem::path& path, const Corpus& corpus, bool with_id) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_trajectories(out, corpus, with_id);
}

std::vector<std::span<const EntityId>> extract_subsequences(std::span<const EntityId> trajectory,
                                                            std::size_t length) {
  std::vector<std::span<const EntityId>> windows;
  if (length == 0 || trajectory.size() < length) return windows;
  windows.reserve(trajectory.size() - length + 1);
  for (std::size_t i = 0; i + length <= trajectory.size(); ++i)
    windows.push_back(trajectory.subspan(i, length));
  return windows;
}

Corpus trim_tails(const Corpus& corpus, std::size_t holdout) {
  Corpus out;
  out.entities = corpus.entities;
  out.trajectories.reserve(corpus.trajectories.size());
  for (const auto& t : corpus.trajectories) {
    Trajectory copy{t.id, t.entities};
    if (copy.entities.size() > holdout) copy.entities.resize(copy.entities.size() - holdout);
    out.trajectories.push_back(std::move(copy));
  }
  return out;
}

}  // namespace hon
