#include "hon/wiring.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <tuple>

#include "hon/error.hpp"

namespace hon {

double Network::density() const {
  const double n = static_cast<double>(node_count());
  if (n < 2) return 0.0;
  return static_cast<double>(edge_count()) / (n * (n - 1.0));
}

double Network::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::optional<NodeId> Network::find(std::span<const EntityId> context) const {
  auto it = index_.find(Path(context.begin(), context.end()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Network::out_weight(NodeId node) const {
  auto c = cumulative(node);
  return c.empty() ? 0.0 : c.back();
}

std::optional<double> Network::edge_weight(NodeId from, NodeId to) const {
  auto succ = successors(from);
  auto it = std::lower_bound(succ.begin(), succ.end(), to);
  if (it == succ.end() || *it != to) return std::nullopt;
  return weights(from)[static_cast<std::size_t>(it - succ.begin())];
}

NetworkBuilder::NetworkBuilder(std::shared_ptr<const EntityTable> entities)
    : entities_(std::move(entities)) {}

std::uint32_t NetworkBuilder::intern(const Path& context) {
  auto [it, inserted] = index_.try_emplace(context, static_cast<std::uint32_t>(contexts_.size()));
  if (inserted) {
    contexts_.push_back(context);
    out_.emplace_back();
  }
  return it->second;
}

void NetworkBuilder::add_node(const Path& context) { intern(context); }

bool NetworkBuilder::has_node(const Path& context) const { return index_.count(context) != 0; }

void NetworkBuilder::set_edge(const Path& from, const Path& to, double weight) {
  const auto f = intern(from);
  const auto t = intern(to);
  out_[f][t] = weight;
}

void NetworkBuilder::remove_edge(const Path& from, const Path& to) {
  auto f = index_.find(from);
  auto t = index_.find(to);
  if (f == index_.end() || t == index_.end()) return;
  out_[f->second].erase(t->second);
}

std::optional<double> NetworkBuilder::edge(const Path& from, const Path& to) const {
  auto f = index_.find(from);
  auto t = index_.find(to);
  if (f == index_.end() || t == index_.end()) return std::nullopt;
  auto it = out_[f->second].find(t->second);
  if (it == out_[f->second].end()) return std::nullopt;
  return it->second;
}

std::vector<std::tuple<Path, Path, double>> NetworkBuilder::edges() const {
  std::vector<std::tuple<Path, Path, double>> all;
  for (std::size_t f = 0; f < out_.size(); ++f)
    for (const auto& [t, w] : out_[f]) all.emplace_back(contexts_[f], contexts_[t], w);
  return all;
}

Network NetworkBuilder::finish() const {
  const std::size_t n = contexts_.size();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = context_label(*entities_, contexts_[i]);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return labels[a] < labels[b]; });
  std::vector<NodeId> remap(n);
  for (std::size_t i = 0; i < n; ++i) remap[order[i]] = static_cast<NodeId>(i);

  Network net;
  net.entities_ = entities_;
  net.contexts_.reserve(n);
  net.in_degree_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    net.contexts_.push_back(contexts_[order[i]]);
    net.index_.emplace(contexts_[order[i]], static_cast<NodeId>(i));
    net.max_order_ = std::max(net.max_order_, contexts_[order[i]].size());
  }
  net.offsets_.assign(1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<NodeId, double>> row;
    for (const auto& [t, w] : out_[order[i]]) row.emplace_back(remap[t], w);
    std::sort(row.begin(), row.end());
    double running = 0.0;
    for (const auto& [t, w] : row) {
      net.targets_.push_back(t);
      net.weights_.push_back(w);
      running += w;
      net.cumulative_.push_back(running);
      ++net.in_degree_[t];
    }
    net.offsets_.push_back(net.targets_.size());
  }
  return net;
}

namespace {

Path tail_of(const Path& p) { return Path(p.begin(), p.end() - 1); }

}  // namespace

Network build_network(const RuleSet& rules, std::shared_ptr<const EntityTable> entities) {
  NetworkBuilder g(entities);
  const auto sources = rules.sorted_sources(*entities);

  for (const Path& source : sources) {
    g.add_node(source);
    for (const auto& [target, n] : rules.rules.at(source))
      g.set_edge(source, Path{target}, static_cast<double>(n));
    if (source.size() < 2) continue;

    // redirect the prefix edge into the new higher-order node
    const Path prev_source = tail_of(source);
    const Path prev_target{source.back()};
    if (!rules.contains(prev_source))
      throw Error(ErrorKind::DanglingPrefix,
                  "rule " + context_label(*entities, source) + " has no prefix rule " +
                      context_label(*entities, prev_source));
    if (!g.edge(prev_source, source)) {
      auto w = g.edge(prev_source, prev_target);
      if (!w)
        throw Error(ErrorKind::DanglingPrefix,
                    "prefix " + context_label(*entities, prev_source) + " has no edge to " +
                        entities->name(source.back()));
      g.set_edge(prev_source, source, *w);
      g.remove_edge(prev_source, prev_target);
    }
  }

  // point remaining first-order targets at the highest-order known context
  std::vector<std::tuple<Path, Path, double>> to_add;
  std::vector<std::pair<Path, Path>> to_remove;
  for (const auto& [from, to, w] : g.edges()) {
    if (to.size() != 1) continue;
    Path candidate = from;
    candidate.push_back(to.front());
    std::size_t start = 0;
    while (candidate.size() - start > 1) {
      Path suffix(candidate.begin() + static_cast<std::ptrdiff_t>(start), candidate.end());
      if (rules.contains(suffix)) {
        to_add.emplace_back(from, std::move(suffix), w);
        to_remove.emplace_back(from, to);
        break;
      }
      ++start;
    }
  }
  for (const auto& [from, to] : to_remove) g.remove_edge(from, to);
  for (const auto& [from, to, w] : to_add) g.set_edge(from, to, w);

  return g.finish();
}

Network build_first_order(const Corpus& corpus, std::uint64_t min_support) {
  return build_fixed_order(corpus, 1, min_support);
}

Network build_fixed_order(const Corpus& corpus, int k, std::uint64_t min_support) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "fixed order must be >= 1");
  std::unordered_map<Path, std::uint64_t, PathHash> windows;
  const auto len = static_cast<std::size_t>(k) + 1;
  for (const auto& t : corpus.trajectories)
    for (auto w : extract_subsequences(t.entities, len)) ++windows[Path(w.begin(), w.end())];

  NetworkBuilder g(corpus.entities);
  for (const auto& [window, n] : windows) {
    if (n < min_support) continue;
    g.set_edge(Path(window.begin(), window.end() - 1), Path(window.begin() + 1, window.end()),
               static_cast<double>(n));
  }
  return g.finish();
}

std::map<std::pair<EntityId, EntityId>, double> project_first_order(const Network& network) {
  std::map<std::pair<EntityId, EntityId>, double> out;
  for (NodeId u = 0; u < network.node_count(); ++u) {
    auto succ = network.successors(u);
    auto w = network.weights(u);
    for (std::size_t i = 0; i < succ.size(); ++i)
      out[{network.entity(u), network.entity(succ[i])}] += w[i];
  }
  return out;
}

std::string format_weight(double w) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, res.ptr);
}

void write_edge_list(std::ostream& out, const Network& network) {
  for (NodeId u = 0; u < network.node_count(); ++u) {
    const std::string from = network.label(u);
    auto succ = network.successors(u);
    auto w = network.weights(u);
    for (std::size_t i = 0; i < succ.size(); ++i)
      out << from << ',' << network.label(succ[i]) << ',' << format_weight(w[i]) << '\n';
  }
}

void write_edge_list_file(const std::filesystem::path& path, const Network& network) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_edge_list(out, network);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(',', start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Path parse_label(std::span<const std::string_view> parts, EntityTable& table, std::size_t line_no) {
  // parts[0] is `curr` or `curr|h1`; the rest are older history entries
  auto fail = [&] {
    return Error(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": bad node label");
  };
  std::string_view head = parts.front();
  auto bar = head.find('|');
  Path reversed;
  if (bar == std::string_view::npos) {
    if (parts.size() != 1 || !is_valid_entity(head)) throw fail();
    return Path{table.intern(head)};
  }
  std::string_view curr = head.substr(0, bar);
  std::string_view h1 = head.substr(bar + 1);
  if (!is_valid_entity(curr) || !is_valid_entity(h1)) throw fail();
  reversed.push_back(table.intern(curr));
  reversed.push_back(table.intern(h1));
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!is_valid_entity(parts[i])) throw fail();
    reversed.push_back(table.intern(parts[i]));
  }
  return Path(reversed.rbegin(), reversed.rend());
}

}  // namespace

Network read_edge_list(std::istream& in, std::shared_ptr<EntityTable> entities) {
  NetworkBuilder g(entities);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto parts = split_commas(line);
    if (parts.size() < 3)
      throw Error(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": too few fields");
    // the target label starts at the first later field carrying '|', or is
    // the single field before the weight
    const std::size_t weight_at = parts.size() - 1;
    std::size_t target_at = weight_at - 1;
    for (std::size_t i = 1; i < weight_at; ++i) {
      if (parts[i].find('|') != std::string_view::npos) {
        target_at = i;
        break;
      }
    }
    std::span<const std::string_view> all(parts);
    Path from = parse_label(all.subspan(0, target_at), *entities, line_no);
    Path to = parse_label(all.subspan(target_at, weight_at - target_at), *entities, line_no);
    double w = 0.0;
    auto wv = parts[weight_at];
    auto res = std::from_chars(wv.data(), wv.data() + wv.size(), w);
    if (res.ec != std::errc() || res.ptr != wv.data() + wv.size() || !(w > 0.0))
      throw Error(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": bad weight");
    g.set_edge(from, to, w);
  }
  return g.finish();
}

void write_pajek(std::ostream& out, const Network& network) {
  out << "*Vertices " << network.node_count() << '\n';
  for (NodeId u = 0; u < network.node_count(); ++u)
    out << (u + 1) << " \"" << network.label(u) << "\"\n";
  out << "*Arcs\n";
  for (NodeId u = 0; u < network.node_count(); ++u) {
    auto succ = network.successors(u);
    auto w = network.weights(u);
    for (std::size_t i = 0; i < succ.size(); ++i)
      out << (u + 1) << ' ' << (succ[i] + 1) << ' ' << format_weight(w[i]) << '\n';
  }
}

void write_pajek_file(const std::filesystem::path& path, const Network& network) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_pajek(out, network);
}

}  // namespace hon
