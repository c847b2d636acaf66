#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hon/error.hpp"
#include "hon/kernels/ensemble.hpp"
#include "hon/kernels/spmv.hpp"
#include "hon/random.hpp"
#include "hon/rules.hpp"
#include "hon/walk.hpp"
#include "hon/wiring.hpp"
#include "oracles.hpp"

using namespace hon;

namespace {

Network edges(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in, std::make_shared<EntityTable>());
}

NodeId id(const Network& n, std::initializer_list<const char*> ctx) {
  Path p;
  for (auto s : ctx) p.push_back(*n.entities().find(s));
  return *n.find(p);
}

Network random_graph(std::mt19937& rng, int n, double p_edge) {
  std::uniform_real_distribution<double> u(0, 1);
  std::string text;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (u(rng) < p_edge)
        text += "v" + std::to_string(i) + ",v" + std::to_string(j) + "," + std::to_string(1 + rng() % 9) + "\n";
  text += "v0,v1,1\n";
  for (int i = 0; i < n; ++i) text += "v" + std::to_string(i) + ",v" + std::to_string((i + 1) % n) + ",1\n";
  return edges(text);
}

}  // namespace

TEST_CASE("random stream") {
  RandomStream a(7, {1, 2}), b(7, {1, 2}), c(7, {2, 1}), d(8, {1, 2});
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  RandomStream r(1, {});
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double v = r.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    sum += v;
    CHECK(r.below(7) < 7);
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("transition distribution") {
  auto n = edges("s,x,3\ns,y,1\nt,x,2\n");
  auto d = transition_distribution(n, id(n, {"s"}));
  REQUIRE(d.size() == 2);
  CHECK(d[0].second == doctest::Approx(0.75));
  CHECK(d[1].second == doctest::Approx(0.25));
  CHECK(transition_distribution(n, id(n, {"t"}))[0].second == 1.0);
  CHECK(transition_distribution(n, id(n, {"x"})).empty());
}

TEST_CASE("locate context") {
  auto n = edges("Shanghai,Singapore|Shanghai,6\nSingapore|Shanghai,LA,4\nSingapore,Seattle,2\n");
  const auto& t = n.entities();
  std::vector<EntityId> h{*t.find("LA"), *t.find("Shanghai"), *t.find("Singapore")};
  CHECK(n.label(locate_context(n, h)) == "Singapore|Shanghai");
  std::vector<EntityId> alone{*t.find("Singapore")};
  CHECK(n.label(locate_context(n, alone)) == "Singapore");
  std::vector<EntityId> other{*t.find("Seattle"), *t.find("Singapore")};
  CHECK(n.label(locate_context(n, other)) == "Singapore");
  auto tbl = n.entity_table();
  std::vector<EntityId> unknown{static_cast<EntityId>(tbl->size() + 5)};
  try {
    locate_context(n, unknown);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownEntity);
  }
}

TEST_CASE("locate context on the canal network") {
  auto c = oracle::corpus_from(oracle::repeat_lines("a d f g h", 5) + oracle::repeat_lines("b d f g h", 5) +
                               oracle::repeat_lines("b e f g i", 5) + oracle::repeat_lines("c e f g i", 5));
  auto n = build_network(extract_rules(c, {3, 3}), c.entities);
  std::vector<EntityId> h{*c.entities->find("e"), *c.entities->find("f"), *c.entities->find("g")};
  CHECK(n.label(locate_context(n, h)) == "g|f,e");
}

TEST_CASE("walks") {
  auto n = edges("a,b,1\nb,c,1\n");
  WalkState s{id(n, {"a"}), RandomStream(1, {0})};
  auto path = simulate_walk(n, s, 2);
  REQUIRE(path.size() == 2);
  CHECK(n.entities().name(path[0]) == "b");
  CHECK(n.entities().name(path[1]) == "c");
  WalkState dead{id(n, {"c"}), RandomStream(1, {0})};
  CHECK(simulate_walk(n, dead, 3).empty());
  WalkState s2{id(n, {"a"}), RandomStream(1, {0})};
  CHECK(simulate_walk(n, s2, 5).size() == 2);
}

TEST_CASE("sampling frequencies follow the weights") {
  auto n = edges("Shanghai,Singapore|Shanghai,6\nSingapore|Shanghai,LA,7\nSingapore|Shanghai,Seattle,3\n");
  const NodeId start = id(n, {"Shanghai", "Singapore"});
  const int draws = 100000;
  int la = 0;
  RandomStream rng(42, {});
  for (int i = 0; i < draws; ++i)
    if (n.label(*sample_successor(n, start, rng)) == "LA") ++la;
  const double p = 0.7, sigma = std::sqrt(p * (1 - p) / draws);
  CHECK(std::abs(static_cast<double>(la) / draws - p) < 3 * sigma);
}

TEST_CASE("stationary distribution") {
  auto two = edges("a,b,1\nb,a,1\n");
  for (double beta : {0.01, 0.3}) {
    auto pi = stationary_distribution(two, {beta});
    CHECK(pi[0] == doctest::Approx(0.5));
    CHECK(pi[1] == doctest::Approx(0.5));
  }
  auto self = edges("n,n,4\n");
  CHECK(stationary_distribution(self)[0] == doctest::Approx(1.0));

  auto tri = edges("a,b,2\na,c,1\nb,c,5\nc,a,3\nc,b,1\n");
  auto pi = stationary_distribution(tri);
  auto ref = oracle::stationary(tri, 0.01);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(pi[static_cast<std::size_t>(i)] - ref(i)) < 1e-8);
}

TEST_CASE("stationary distribution with dangling nodes and random graphs") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(rng, 3 + trial % 8, 0.3);
    auto pi = stationary_distribution(g);
    auto ref = oracle::stationary(g, 0.01);
    for (std::size_t i = 0; i < pi.size(); ++i) CHECK(std::abs(pi[i] - ref(static_cast<Eigen::Index>(i))) < 1e-9);
  }
  auto d = edges("a,b,1\nb,c,1\n");
  auto pi = stationary_distribution(d);
  auto ref = oracle::stationary(d, 0.01);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(pi[i] - ref(static_cast<Eigen::Index>(i))) < 1e-9);
}

TEST_CASE("non-convergence is reported") {
  auto g = edges("a,b,1\nb,a,1\nb,c,1\nc,a,1\n");
  try {
    stationary_distribution(g, {0.01, 1e-300, 3});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
}

TEST_CASE("entropy rate") {
  CHECK(entropy_rate(edges("a,b,1\nb,c,1\nc,a,1\n")) == doctest::Approx(0.0));
  for (int n : {3, 4, 6}) {
    std::string text;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) text += "k" + std::to_string(i) + ",k" + std::to_string(j) + ",1\n";
    CHECK(entropy_rate(edges(text)) == doctest::Approx(std::log2(n - 1)).epsilon(1e-12));
  }
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_graph(rng, 4 + trial, 0.4);
    CHECK(entropy_rate(g) == doctest::Approx(oracle::entropy_rate(g, 0.01)).epsilon(1e-9));
  }
}

TEST_CASE("return probability on a 2-cycle") {
  auto g = edges("a,b,1\nb,a,1\n");
  CHECK(return_probability(g, 2, 1000, 1) == 1.0);
  CHECK(return_probability(g, 3, 1000, 1) == 0.0);
}

TEST_CASE("return probability against enumeration") {
  const std::string text = oracle::repeat_lines("a b a", 90) + oracle::repeat_lines("a b c", 10) +
                           oracle::repeat_lines("c b c", 90) + oracle::repeat_lines("c b a", 10);
  auto c = oracle::corpus_from(text);
  auto hon = build_network(extract_rules(c, {2, 1}), c.entities);
  auto first = build_first_order(c, 1);
  const double exact_hon = oracle::return_probability(hon, 2, 0.01);
  const double exact_first = oracle::return_probability(first, 2, 0.01);
  CHECK(exact_hon > exact_first);
  CHECK(std::abs(return_probability(hon, 2, 200000, 5) - exact_hon) < 0.01);
  CHECK(std::abs(return_probability(first, 2, 200000, 5) - exact_first) < 0.01);
}

TEST_CASE("alternation is learned by the higher-order network") {
  const std::string text =
      oracle::repeat_lines("a b a b a b a b", 20) + oracle::repeat_lines("c b c b c b c b", 20);
  auto c = oracle::corpus_from(text);
  AccuracyOptions opts{3, 50, 11};
  auto hon = evaluate_accuracy(c, [](const Corpus& t) { return build_network(extract_rules(t, {2, 1}), t.entities); },
                               opts);
  for (const auto& h : hon.horizons) CHECK(h.mean == 1.0);
  auto first = evaluate_accuracy(c, [](const Corpus& t) { return build_first_order(t, 1); }, opts);
  CHECK(first.horizons[0].mean == 1.0);  // every test tail sits at an a or c, whose only successor is b
  CHECK(first.horizons[1].mean < 0.6);
  CHECK(first.horizons[1].mean > 0.4);
  CHECK(first.horizons[1].std_dev > 0.0);
}

TEST_CASE("accuracy needs test trajectories") {
  auto c = oracle::corpus_from("a b\nb a\n");
  try {
    evaluate_accuracy(c, [](const Corpus& t) { return build_first_order(t, 1); }, {3, 10, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("accuracy reports") {
  AccuracyReport r;
  r.repeats = 2;
  r.test_trajectories = 5;
  r.horizons = {{1, 0.5, 0.25}, {2, 0.125, 0}};
  std::ostringstream csv, json;
  write_accuracy_csv(csv, r);
  write_accuracy_json(json, r);
  CHECK(csv.str() == "horizon,mean_accuracy,std_dev\n1,0.5,0.25\n2,0.125,0\n");
  CHECK(json.str() ==
        "{\"repeats\":2,\"test_trajectories\":5,\"horizons\":[{\"horizon\":1,\"mean_accuracy\":0.5,\"std_dev\":0.25},"
        "{\"horizon\":2,\"mean_accuracy\":0.125,\"std_dev\":0}]}\n");
}

TEST_CASE("first-order metrics equal HON with max order 1") {
  std::mt19937 rng(1);
  std::string text;
  for (int l = 0; l < 50; ++l) {
    for (int s = 0; s < 20; ++s) text += (s ? " x" : "x") + std::to_string(rng() % 5);
    text += '\n';
  }
  auto c = oracle::corpus_from(text);
  auto hon = build_network(extract_rules(c, {1, 1}), c.entities);
  auto first = build_first_order(c, 1);
  CHECK(entropy_rate(hon) == entropy_rate(first));
  CHECK(return_probability(hon, 2, 5000, 3) == return_probability(first, 2, 5000, 3));
  AccuracyOptions opts{3, 20, 4};
  auto a = evaluate_accuracy(c, [](const Corpus& t) { return build_network(extract_rules(t, {1, 1}), t.entities); }, opts);
  auto b = evaluate_accuracy(c, [](const Corpus& t) { return build_first_order(t, 1); }, opts);
  for (std::size_t h = 0; h < 3; ++h) CHECK(a.horizons[h].mean == b.horizons[h].mean);
}

TEST_CASE("parallel kernels match the serial references") {
  std::mt19937 rng(17);
  std::string text;
  for (int l = 0; l < 200; ++l) {
    for (int s = 0; s < 15; ++s) text += (s ? " y" : "y") + std::to_string(rng() % 6);
    text += '\n';
  }
  auto c = oracle::corpus_from(text);
  auto net = build_network(extract_rules(c, {3, 2}), c.entities);
  auto cases = make_test_cases(c, net, 3);
  auto m = kernels::transpose_transitions(net);
  std::vector<double> x(net.node_count());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / static_cast<double>(i + 1);
  std::vector<double> ys(x.size()), yp(x.size());
  kernels::propagate_serial(m, x, ys);
  std::vector<double> cdf(net.node_count());
  for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = static_cast<double>(i + 1) / static_cast<double>(cdf.size());

  const auto acc_ref = kernels::accuracy_counts_serial(net, cases, 3, 40, 9);
  const auto ret_ref = kernels::return_hits_serial(net, cdf, 2, 20000, 9);
  for (int threads : {1, 2, 4, 7}) {
    omp_set_num_threads(threads);
    kernels::propagate_parallel(m, x, yp);
    CHECK(yp == ys);
    CHECK(kernels::accuracy_counts_parallel(net, cases, 3, 40, 9) == acc_ref);
    CHECK(kernels::return_hits_parallel(net, cdf, 2, 20000, 9) == ret_ref);
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("transition rows sum to one") {
  std::mt19937 rng(2);
  auto g = random_graph(rng, 9, 0.4);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    double s = 0;
    for (auto [to, p] : transition_distribution(g, v)) s += p;
    CHECK(s == doctest::Approx(1.0));
  }
}
