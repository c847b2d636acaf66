#include "hon/synth.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hon/error.hpp"
#include "hon/random.hpp"
#include "json.hpp"

namespace hon {
namespace {

constexpr std::uint64_t kManifestStream = 0x6d616e6966657374ULL;  // "manifest"
constexpr std::size_t kAttemptsPerRule = 20000;
constexpr double kPalette[3][2] = {{0.6, 0.4}, {0.7, 0.3}, {0.8, 0.2}};

bool is_prefix(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Packs up to four cells (< 2^15 each) plus the length into one key.
std::uint64_t pack(std::span<const EntityId> cells) {
  std::uint64_t key = static_cast<std::uint64_t>(cells.size()) << 60;
  for (std::size_t i = 0; i < cells.size(); ++i) key |= static_cast<std::uint64_t>(cells[i]) << (15 * i);
  return key;
}

}  // namespace

GridConfig GridConfig::desk(std::uint64_t seed) { return GridConfig{10, 10, 1'000, 100, seed}; }
GridConfig GridConfig::full(std::uint64_t seed) { return GridConfig{10, 10, 100'000, 100, seed}; }

void GridConfig::validate() const {
  if (rows < 1 || cols < 1 || cell_count() < 2)
    throw Error(ErrorKind::InvalidArgument, "grid needs at least two cells");
  if (cell_count() >= (1u << 15)) throw Error(ErrorKind::InvalidArgument, "grid too large");
}

std::string GridConfig::cell_name(std::size_t cell) const {
  return "r" + std::to_string(cell / static_cast<std::size_t>(cols)) + "c" +
         std::to_string(cell % static_cast<std::size_t>(cols));
}

std::vector<std::size_t> GridConfig::neighbours(std::size_t cell) const {
  const auto r = static_cast<int>(cell / static_cast<std::size_t>(cols));
  const auto c = static_cast<int>(cell % static_cast<std::size_t>(cols));
  auto at = [&](int rr, int cc) {
    rr = (rr % rows + rows) % rows;
    cc = (cc % cols + cols) % cols;
    return static_cast<std::size_t>(rr) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(cc);
  };
  return {at(r - 1, c), at(r + 1, c), at(r, c - 1), at(r, c + 1)};
}

std::vector<InjectedRule> generate_manifest(const GridConfig& cfg, const ManifestCounts& counts,
                                            std::uint64_t seed) {
  cfg.validate();
  RandomStream rng(seed, {kManifestStream});
  std::vector<std::vector<std::size_t>> sources;
  std::set<std::size_t> used_current;
  std::vector<InjectedRule> manifest;

  const std::pair<std::size_t, std::size_t> plan[] = {{2, counts.order2}, {3, counts.order3}, {4, counts.order4}};
  for (const auto& [order, how_many] : plan) {
    for (std::size_t k = 0; k < how_many; ++k) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < kAttemptsPerRule && !placed; ++attempt) {
        std::vector<std::size_t> path{static_cast<std::size_t>(rng.below(cfg.cell_count()))};
        bool ok = true;
        while (path.size() < order) {
          const auto nb = cfg.neighbours(path.back());
          const std::size_t next = nb[rng.below(nb.size())];
          if (std::find(path.begin(), path.end(), next) != path.end()) {
            ok = false;
            break;
          }
          path.push_back(next);
        }
        if (!ok || used_current.count(path.back())) continue;
        // a rule firing inside another source could make that source unreachable
        if (std::any_of(path.begin(), path.end() - 1, [&](std::size_t c) { return used_current.count(c) != 0; }))
          continue;
        if (std::any_of(sources.begin(), sources.end(), [&](const auto& s) {
              return std::find(s.begin(), s.end() - 1, path.back()) != s.end() - 1;
            }))
          continue;
        if (std::any_of(sources.begin(), sources.end(), [&](const auto& s) {
              return is_prefix(s, path) || is_prefix(path, s);
            }))
          continue;

        auto nb = cfg.neighbours(path.back());
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        if (nb.size() < 2) continue;
        const std::size_t first = rng.below(nb.size());
        std::size_t second = rng.below(nb.size() - 1);
        if (second >= first) ++second;
        const auto& probs = kPalette[rng.below(3)];

        InjectedRule rule;
        for (std::size_t cell : path) rule.source.push_back(cfg.cell_name(cell));
        rule.branch = {{cfg.cell_name(nb[first]), probs[0]}, {cfg.cell_name(nb[second]), probs[1]}};
        std::sort(rule.branch.begin(), rule.branch.end());
        manifest.push_back(std::move(rule));
        sources.push_back(path);
        used_current.insert(path.back());
        placed = true;
      }
      if (!placed)
        throw Error(ErrorKind::InfeasibleConfig,
                    "cannot place " + std::to_string(how_many) + " order-" + std::to_string(order) +
                        " rules on a " + std::to_string(cfg.rows) + "x" + std::to_string(cfg.cols) + " grid");
    }
  }
  return manifest;
}

Corpus generate_trajectories(const GridConfig& cfg, const std::vector<InjectedRule>& manifest) {
  cfg.validate();
  Corpus corpus;
  const std::size_t cells = cfg.cell_count();
  for (std::size_t c = 0; c < cells; ++c) corpus.entities->intern(cfg.cell_name(c));

  struct CompiledRule {
    std::vector<EntityId> targets;
    std::vector<double> cdf;
  };
  std::unordered_map<std::uint64_t, CompiledRule> rules;
  std::size_t longest = 0;
  for (const auto& rule : manifest) {
    if (rule.source.size() < 1 || rule.source.size() > 4 || rule.branch.empty())
      throw Error(ErrorKind::InvalidArgument, "injected rules need a source of 1..4 cells and a branch");
    std::vector<EntityId> source;
    for (const auto& name : rule.source) {
      auto id = corpus.entities->find(name);
      if (!id) throw Error(ErrorKind::InvalidArgument, "rule cell '" + name + "' is not on the grid");
      source.push_back(*id);
    }
    CompiledRule compiled;
    double running = 0.0;
    for (const auto& [name, p] : rule.branch) {
      auto id = corpus.entities->find(name);
      if (!id) throw Error(ErrorKind::InvalidArgument, "rule target '" + name + "' is not on the grid");
      compiled.targets.push_back(*id);
      compiled.cdf.push_back(running += p);
    }
    rules[pack(source)] = std::move(compiled);
    longest = std::max(longest, source.size());
  }

  std::vector<std::vector<std::size_t>> adjacency(cells);
  for (std::size_t c = 0; c < cells; ++c) adjacency[c] = cfg.neighbours(c);

  corpus.trajectories.resize(cfg.walkers);
  const auto walkers = static_cast<std::ptrdiff_t>(cfg.walkers);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < walkers; ++w) {
    RandomStream rng(cfg.seed, {static_cast<std::uint64_t>(w)});
    auto& t = corpus.trajectories[static_cast<std::size_t>(w)];
    t.id = "w" + std::to_string(w);
    t.entities.reserve(cfg.steps + 1);
    t.entities.push_back(static_cast<EntityId>(rng.below(cells)));
    for (std::size_t s = 0; s < cfg.steps; ++s) {
      const double u = rng.uniform();
      const CompiledRule* hit = nullptr;
      for (std::size_t len = std::min(longest, t.entities.size()); len >= 1 && !hit; --len) {
        auto it = rules.find(pack(std::span<const EntityId>(t.entities).last(len)));
        if (it != rules.end()) hit = &it->second;
      }
      EntityId next;
      if (hit) {
        const double x = u * hit->cdf.back();
        auto pos = std::upper_bound(hit->cdf.begin(), hit->cdf.end(), x);
        if (pos == hit->cdf.end()) --pos;
        next = hit->targets[static_cast<std::size_t>(pos - hit->cdf.begin())];
      } else {
        const auto& nb = adjacency[t.entities.back()];
        next = static_cast<EntityId>(nb[std::min(nb.size() - 1, static_cast<std::size_t>(u * static_cast<double>(nb.size())))]);
      }
      t.entities.push_back(next);
    }
  }
  return corpus;
}

void write_manifest(std::ostream& out, const std::vector<InjectedRule>& manifest) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& rule : manifest) {
    nlohmann::json branch = nlohmann::json::object();
    for (const auto& [name, p] : rule.branch) branch[name] = p;
    doc.push_back({{"source", rule.source}, {"branch", branch}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<InjectedRule> read_manifest(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedLine, std::string("manifest: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::MalformedLine, "manifest must be a JSON list");
  std::vector<InjectedRule> manifest;
  for (const auto& item : doc) {
    InjectedRule rule;
    try {
      rule.source = item.at("source").get<std::vector<std::string>>();
      for (const auto& [name, p] : item.at("branch").items()) rule.branch.emplace_back(name, p.get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::MalformedLine, std::string("manifest entry: ") + e.what());
    }
    manifest.push_back(std::move(rule));
  }
  return manifest;
}

void write_manifest_file(const std::filesystem::path& path, const std::vector<InjectedRule>& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_manifest(out, manifest);
}

std::vector<InjectedRule> read_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_manifest(in);
}

std::size_t RecoveryReport::false_positives() const {
  std::size_t n = 0;
  for (const auto& [order, r] : by_order) n += r.false_positives;
  return n;
}

std::size_t RecoveryReport::false_negatives() const {
  std::size_t n = 0;
  for (const auto& [order, r] : by_order) n += r.false_negatives;
  return n;
}

RecoveryReport validate_recovery(const RuleSet& extracted, const EntityTable& table,
                                 const std::vector<InjectedRule>& manifest) {
  RecoveryReport report;
  std::unordered_set<Path, PathHash> explained;
  for (const auto& rule : manifest) {
    ++report.injected;
    Path source;
    bool known = true;
    for (const auto& name : rule.source) {
      auto id = table.find(name);
      if (!id) {
        known = false;
        break;
      }
      source.push_back(*id);
    }
    auto& slot = report.by_order[rule.order()];
    if (known && extracted.valid.count(source)) {
      ++slot.true_positives;
      ++report.recovered;
    } else {
      ++slot.false_negatives;
    }
    if (!known) continue;
    for (Path p = source; !p.empty(); p.pop_back()) explained.insert(p);
  }
  for (const auto& [source, counts] : extracted.rules)
    if (source.size() >= 2 && !explained.count(source)) ++report.by_order[source.size()].false_positives;
  report.exact_match = report.false_negatives() == 0 && report.false_positives() == 0;
  return report;
}

void write_recovery_csv(std::ostream& out, const RecoveryReport& report) {
  out << "order,true_positives,false_positives,false_negatives\n";
  for (const auto& [order, r] : report.by_order)
    out << order << ',' << r.true_positives << ',' << r.false_positives << ',' << r.false_negatives << '\n';
  out << "total," << report.recovered << ',' << report.false_positives() << ',' << report.false_negatives() << '\n';
  out << "# injected=" << report.injected << " exact_match=" << (report.exact_match ? "true" : "false") << '\n';
}

}  // namespace hon
