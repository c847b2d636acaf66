// hon: build higher-order networks from trajectories and measure them.
//
// Every flag can also be set through an environment variable named
// HON_<FLAG> (upper case, dashes as underscores), e.g. HON_MAX_ORDER=3.
// Explicit flags win over the environment.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hon/error.hpp"
#include "hon/ingest.hpp"
#include "hon/rank.hpp"
#include "hon/rules.hpp"
#include "hon/synth.hpp"
#include "hon/vom.hpp"
#include "hon/walk.hpp"
#include "hon/wiring.hpp"

namespace {

using namespace hon;

std::string env_name(const std::string& flag) {
  std::string name = "HON_";
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option("--" + name, value, help)->envname(env_name(name))->capture_default_str();
}

CLI::Option* switch_flag(CLI::App* app, const std::string& name, bool& value, const std::string& help) {
  return app->add_flag("--" + name, value, help)->envname(env_name(name));
}

// Writes through `fn` to `path`, or to stdout for "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  fn(out);
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

struct InputArgs {
  std::string path;
  bool has_id = false;
  bool dedup = false;
  std::size_t max_len = 0;

  void attach(CLI::App* app) {
    flag(app, "input", path, "trajectory file, one trajectory per line")->required();
    switch_flag(app, "has-id", has_id, "first token of each line is a trajectory id");
    switch_flag(app, "dedup", dedup, "collapse consecutive repeated entities");
    flag(app, "max-len", max_len, "drop trajectories longer than this (0 = keep all)");
  }

  Corpus load() const {
    ParseOptions opts;
    opts.has_id = has_id;
    opts.dedup_consecutive = dedup;
    if (max_len > 0) opts.max_trajectory_len = max_len;
    try {
      return read_trajectory_file(path, opts);
    } catch (const Error& e) {
      throw Error(e.kind(), path + ": " + e.what());
    }
  }
};

struct NetworkArgs {
  std::string representation = "hon";
  int max_order = 5;
  std::uint64_t min_support = 5;
  int k = 2;

  void attach(CLI::App* app) {
    flag(app, "representation", representation, "hon, first or fixed")
        ->check(CLI::IsMember({"hon", "first", "fixed"}));
    flag(app, "max-order", max_order, "highest rule order (hon)")->check(CLI::PositiveNumber);
    flag(app, "min-support", min_support, "drop observations seen fewer times")->check(CLI::PositiveNumber);
    flag(app, "k", k, "context length (fixed)")->check(CLI::PositiveNumber);
  }

  Network build(const Corpus& corpus) const {
    if (representation == "first") return build_first_order(corpus, min_support);
    if (representation == "fixed") return build_fixed_order(corpus, k, min_support);
    const RuleSet rules = extract_rules(corpus, ExtractionParams{max_order, min_support});
    return build_network(rules, corpus.entities);
  }
};

void print_summary(const Network& net) {
  std::cout << "nodes=" << net.node_count() << " edges=" << net.edge_count()
            << " density=" << format_weight(net.density()) << '\n';
}

// build -----------------------------------------------------------------

struct BuildCmd {
  InputArgs input;
  NetworkArgs network;
  std::string output = "-";
  std::string pajek;
  std::string rules_dump;

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("build", "extract rules and wire the network");
    input.attach(app);
    network.attach(app);
    flag(app, "output", output, "edge-list CSV ('-' for stdout)");
    flag(app, "pajek", pajek, "also write a Pajek .net file");
    flag(app, "rules-dump", rules_dump, "write the extracted rules (hon only)");
    cmd = app;
  }

  void run() const {
    const Corpus corpus = input.load();
    Network net;
    if (network.representation == "hon") {
      const RuleSet rules = extract_rules(corpus, ExtractionParams{network.max_order, network.min_support});
      if (!rules_dump.empty()) emit(rules_dump, [&](std::ostream& o) { dump_rules(o, rules, *corpus.entities); });
      net = build_network(rules, corpus.entities);
    } else {
      net = network.build(corpus);
    }
    emit(output, [&](std::ostream& o) { write_edge_list(o, net); });
    if (!pajek.empty()) emit(pajek, [&](std::ostream& o) { write_pajek(o, net); });
    if (output != "-") print_summary(net);
  }
};

// eval ------------------------------------------------------------------

struct EvalCmd {
  InputArgs input;
  NetworkArgs network;
  AccuracyOptions acc;
  std::string output = "-";
  std::string json;

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("eval", "held-out-tail random-walk accuracy");
    input.attach(app);
    network.attach(app);
    flag(app, "holdout", acc.holdout, "entities held out per trajectory")->check(CLI::PositiveNumber);
    flag(app, "repeats", acc.repeats, "walks per test trajectory")->check(CLI::PositiveNumber);
    flag(app, "seed", acc.seed, "random seed")->required();
    flag(app, "output", output, "accuracy CSV");
    flag(app, "json", json, "also write the report as JSON");
    cmd = app;
  }

  void run() const {
    const Corpus corpus = input.load();
    const auto report = evaluate_accuracy(corpus, [&](const Corpus& c) { return network.build(c); }, acc);
    emit(output, [&](std::ostream& o) { write_accuracy_csv(o, report); });
    if (!json.empty()) emit(json, [&](std::ostream& o) { write_accuracy_json(o, report); });
  }
};

// metrics ---------------------------------------------------------------

struct MetricsCmd {
  InputArgs input;
  NetworkArgs network;
  StationaryOptions stationary;
  std::vector<std::size_t> steps{2};
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
  std::string output = "-";

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("metrics", "size, density, entropy rate and return probabilities");
    input.attach(app);
    network.attach(app);
    flag(app, "teleport", stationary.teleport, "teleport share for the stationary distribution");
    flag(app, "steps", steps, "return-probability horizons")->delimiter(',');
    flag(app, "samples", samples, "walkers per return-probability estimate")->check(CLI::PositiveNumber);
    flag(app, "seed", seed, "random seed")->required();
    flag(app, "output", output, "metric,value CSV");
    cmd = app;
  }

  void run() const {
    const Corpus corpus = input.load();
    const Network net = network.build(corpus);
    emit(output, [&](std::ostream& o) {
      o << "metric,value\n";
      o << "nodes," << net.node_count() << '\n';
      o << "edges," << net.edge_count() << '\n';
      o << "density," << format_weight(net.density()) << '\n';
      o << "entropy_rate," << format_weight(entropy_rate(net, stationary)) << '\n';
      for (std::size_t k : steps)
        o << "return_probability_" << k << ','
          << format_weight(return_probability(net, k, samples, seed, stationary)) << '\n';
    });
  }
};

// rank ------------------------------------------------------------------

struct RankCmd {
  InputArgs input;
  NetworkArgs network;
  PageRankOptions pr;
  std::string teleport = "node";
  std::string output = "-";
  std::string delta;

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("rank", "entity PageRank and its change against first order");
    input.attach(app);
    network.attach(app);
    flag(app, "damping", pr.damping, "PageRank damping factor");
    flag(app, "tol", pr.tol, "L1 convergence tolerance");
    flag(app, "max-iter", pr.max_iter, "iteration cap");
    flag(app, "teleport", teleport, "node or entity")->check(CLI::IsMember({"node", "entity"}));
    flag(app, "output", output, "entity,score,rank CSV");
    flag(app, "delta", delta, "delta report against the first-order network");
    cmd = app;
  }

  void run() {
    pr.teleport = teleport == "entity" ? Teleport::Entity : Teleport::Node;
    const Corpus corpus = input.load();
    const Network net = network.build(corpus);
    const RankVector rank = pagerank(net, pr);
    emit(output, [&](std::ostream& o) { write_rank_csv(o, rank.entity_scores); });
    if (!delta.empty()) {
      const Network base = build_first_order(corpus, network.min_support);
      const RankVector base_rank = pagerank(base, pr);
      const auto deltas = rank_delta(base_rank.entity_scores, rank.entity_scores);
      emit(delta, [&](std::ostream& o) { write_delta_csv(o, deltas); });
    }
  }
};

// synth -----------------------------------------------------------------

struct SynthCmd {
  std::string profile = "full";
  int rows = 10;
  int cols = 10;
  std::size_t walkers = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  ManifestCounts counts;
  std::string manifest_in;
  std::string manifest_out;
  std::string output;
  bool with_id = false;

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("synth", "grid-world trajectories with injected dependencies");
    flag(app, "profile", profile, "full (100000 walkers) or desk (1000 walkers)")
        ->check(CLI::IsMember({"full", "desk"}));
    flag(app, "rows", rows, "grid rows")->check(CLI::PositiveNumber);
    flag(app, "cols", cols, "grid columns")->check(CLI::PositiveNumber);
    flag(app, "walkers", walkers, "override the profile's walker count");
    flag(app, "steps", steps, "override the profile's steps per walker");
    flag(app, "seed", seed, "random seed")->required();
    flag(app, "order2", counts.order2, "injected second-order rules");
    flag(app, "order3", counts.order3, "injected third-order rules");
    flag(app, "order4", counts.order4, "injected fourth-order rules");
    flag(app, "manifest-in", manifest_in, "reuse this manifest instead of sampling one");
    flag(app, "manifest", manifest_out, "manifest JSON to write")->required();
    flag(app, "output", output, "trajectory file to write")->required();
    switch_flag(app, "with-id", with_id, "prefix each line with a walker id");
    cmd = app;
  }

  void run() const {
    GridConfig cfg = profile == "desk" ? GridConfig::desk(seed) : GridConfig::full(seed);
    cfg.rows = rows;
    cfg.cols = cols;
    if (walkers > 0) cfg.walkers = walkers;
    if (steps > 0) cfg.steps = steps;
    cfg.validate();
    const auto manifest =
        manifest_in.empty() ? generate_manifest(cfg, counts, seed) : read_manifest_file(manifest_in);
    const Corpus corpus = generate_trajectories(cfg, manifest);
    emit(manifest_out, [&](std::ostream& o) { write_manifest(o, manifest); });
    emit(output, [&](std::ostream& o) { write_trajectories(o, corpus, with_id); });
    std::cout << "rules=" << manifest.size() << " trajectories=" << corpus.trajectories.size()
              << " movements=" << corpus.movement_count() << '\n';
  }
};

// validate --------------------------------------------------------------

struct ValidateCmd {
  InputArgs input;
  std::string manifest;
  int max_order = 5;
  std::uint64_t min_support = 5;
  std::string output = "-";

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("validate", "check extracted rules against an injection manifest");
    input.attach(app);
    flag(app, "manifest", manifest, "manifest JSON from synth")->required();
    flag(app, "max-order", max_order, "highest rule order")->check(CLI::PositiveNumber);
    flag(app, "min-support", min_support, "minimum support")->check(CLI::PositiveNumber);
    flag(app, "output", output, "recovery CSV");
    cmd = app;
  }

  void run() const {
    const Corpus corpus = input.load();
    const auto rules = extract_rules(corpus, ExtractionParams{max_order, min_support});
    const auto report = validate_recovery(rules, *corpus.entities, read_manifest_file(manifest));
    emit(output, [&](std::ostream& o) { write_recovery_csv(o, report); });
    if (output != "-")
      std::cout << "recovered=" << report.recovered << '/' << report.injected
                << " false_positives=" << report.false_positives()
                << " exact_match=" << (report.exact_match ? "true" : "false") << '\n';
  }
};

// vom-compare -----------------------------------------------------------

struct VomCmd {
  InputArgs input;
  int max_order = 5;
  std::uint64_t min_support = 5;
  std::string output = "-";

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("vom-compare", "rules kept by HON against a pruned VOM tree");
    input.attach(app);
    flag(app, "max-order", max_order, "highest order")->check(CLI::PositiveNumber);
    flag(app, "min-support", min_support, "minimum support")->check(CLI::PositiveNumber);
    flag(app, "output", output, "comparison CSV");
    cmd = app;
  }

  void run() const {
    const Corpus corpus = input.load();
    const CountTable counts = build_observations(corpus, max_order);
    const RuleSet rules = extract_rules(counts, ExtractionParams{max_order, min_support});
    const ContextSet vom = prune_vom(build_context_tree(counts, min_support));
    const auto report = compare_rulesets(rules, vom);
    emit(output, [&](std::ostream& o) { write_comparison_csv(o, report); });
  }
};

// sweep -----------------------------------------------------------------

struct SweepCmd {
  InputArgs input;
  std::string param = "min-support";
  std::vector<std::uint64_t> values;
  int max_order = 5;
  std::uint64_t min_support = 5;
  AccuracyOptions acc;
  std::string output = "-";

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("sweep", "accuracy and size across min-support or max-order");
    input.attach(app);
    flag(app, "param", param, "min-support or max-order")->check(CLI::IsMember({"min-support", "max-order"}));
    flag(app, "values", values, "comma-separated values to try")->delimiter(',')->required();
    flag(app, "max-order", max_order, "held fixed when sweeping min-support")->check(CLI::PositiveNumber);
    flag(app, "min-support", min_support, "held fixed when sweeping max-order")->check(CLI::PositiveNumber);
    flag(app, "holdout", acc.holdout, "entities held out per trajectory")->check(CLI::PositiveNumber);
    flag(app, "repeats", acc.repeats, "walks per test trajectory")->check(CLI::PositiveNumber);
    flag(app, "seed", acc.seed, "random seed")->required();
    flag(app, "output", output, "sweep CSV");
    cmd = app;
  }

  void run() const {
    const Corpus corpus = input.load();
    const Corpus train = trim_tails(corpus, acc.holdout);
    emit(output, [&](std::ostream& o) {
      o << "max_order,min_support,nodes,edges,accuracy,std_dev\n";
      for (std::uint64_t v : values) {
        ExtractionParams params{max_order, min_support};
        if (param == "max-order")
          params.max_order = static_cast<int>(v);
        else
          params.min_support = v;
        const Network net = build_network(extract_rules(train, params), train.entities);
        const auto cases = make_test_cases(corpus, net, acc.holdout);
        const auto report = score_accuracy(net, cases, acc);
        o << params.max_order << ',' << params.min_support << ',' << net.node_count() << ','
          << net.edge_count() << ',' << format_weight(report.horizons.front().mean) << ','
          << format_weight(report.horizons.front().std_dev) << '\n';
      }
    });
  }
};

// export ----------------------------------------------------------------

struct ExportCmd {
  std::string network;
  std::string format = "pajek";
  std::string output = "-";

  CLI::App* cmd = nullptr;

  void attach(CLI::App& root) {
    auto* app = root.add_subcommand("export", "convert an edge-list network");
    flag(app, "network", network, "edge-list CSV written by build")->required();
    flag(app, "format", format, "pajek or edges")->check(CLI::IsMember({"pajek", "edges"}));
    flag(app, "output", output, "destination");
    cmd = app;
  }

  void run() const {
    std::ifstream in(network, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + network);
    Network net;
    try {
      net = read_edge_list(in, std::make_shared<EntityTable>());
    } catch (const Error& e) {
      throw Error(e.kind(), network + ": " + e.what());
    }
    emit(output, [&](std::ostream& o) {
      if (format == "pajek")
        write_pajek(o, net);
      else
        write_edge_list(o, net);
    });
  }
};

std::string quoted(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order networks from trajectory data"};
  app.require_subcommand(1);
  int threads = 0;
  flag(&app, "threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  BuildCmd build;
  EvalCmd eval;
  MetricsCmd metrics;
  RankCmd rank;
  SynthCmd synth;
  ValidateCmd validate;
  VomCmd vom;
  SweepCmd sweep;
  ExportCmd exporter;
  build.attach(app);
  eval.attach(app);
  metrics.attach(app);
  rank.attach(app);
  synth.attach(app);
  validate.attach(app);
  vom.attach(app);
  sweep.attach(app);
  exporter.attach(app);
  app.fallthrough();

  const std::vector<std::pair<CLI::App*, std::function<void()>>> commands{
      {build.cmd, [&] { build.run(); }},       {eval.cmd, [&] { eval.run(); }},
      {metrics.cmd, [&] { metrics.run(); }},   {rank.cmd, [&] { rank.run(); }},
      {synth.cmd, [&] { synth.run(); }},       {validate.cmd, [&] { validate.run(); }},
      {vom.cmd, [&] { vom.run(); }},           {sweep.cmd, [&] { sweep.run(); }},
      {exporter.cmd, [&] { exporter.run(); }},
  };

  try {
    app.parse(argc, argv);
    if (threads > 0) omp_set_num_threads(threads);
    for (const auto& [sub, run] : commands)
      if (sub->parsed()) run();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error kind=Usage message=" << quoted(e.what()) << '\n';
    return 64;
  } catch (const hon::Error& e) {
    std::cerr << "error kind=" << hon::to_string(e.kind()) << " message=" << quoted(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error kind=Internal message=" << quoted(e.what()) << '\n';
    return 2;
  }
  return 0;
}
