#include <doctest.h>

#include <cmath>
#include <limits>
#include <omp.h>

#include <random>
#include <sstream>

#include "hon/error.hpp"
#include "hon/kernels/observations.hpp"
#include "hon/rules.hpp"
#include "oracles.hpp"

using namespace hon;

namespace {

Path path_of(const Corpus& c, std::initializer_list<const char*> names) {
  Path p;
  for (auto n : names) p.push_back(*c.entities->find(n));
  return p;
}

std::string canal_text() {
  return oracle::repeat_lines("a d f g h", 5) + oracle::repeat_lines("b d f g h", 5) +
         oracle::repeat_lines("b e f g i", 5) + oracle::repeat_lines("c e f g i", 5);
}

// Random walk on a small alphabet with a planted second-order habit.
std::string random_corpus(std::uint32_t seed, int lines, int length, int alphabet) {
  std::mt19937 rng(seed);
  std::string out;
  for (int l = 0; l < lines; ++l) {
    int prev = -1, cur = static_cast<int>(rng() % static_cast<unsigned>(alphabet));
    out += "e" + std::to_string(cur);
    for (int s = 1; s < length; ++s) {
      int next;
      if (prev == 0 && cur == 1)
        next = 2;
      else
        next = static_cast<int>(rng() % static_cast<unsigned>(alphabet));
      prev = cur;
      cur = next;
      out += " e" + std::to_string(cur);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("observation windows") {
  auto c = oracle::corpus_from("a b c\n");
  auto t = build_observations(c, 2);
  CHECK(t.support(path_of(c, {"a"})) == 1);
  CHECK(t.support(path_of(c, {"b"})) == 1);
  CHECK(t.support(path_of(c, {"a", "b"})) == 1);
  CHECK(t.counts.size() == 3);
  const auto* ab = t.find(path_of(c, {"a", "b"}));
  REQUIRE(ab);
  CHECK(ab->at(0).first == *c.entities->find("c"));
}

TEST_CASE("short trajectories give no high-order entries") {
  auto c = oracle::corpus_from("a b\na b\n");
  auto t = build_observations(c, 5);
  CHECK(t.counts.size() == 1);
  CHECK(t.support(path_of(c, {"a"})) == 2);
}

TEST_CASE("order-1 mass equals the movement count") {
  auto c = oracle::corpus_from(random_corpus(3, 40, 30, 6));
  auto t = build_observations(c, 5);
  CHECK(t.mass(1) == c.movement_count());
  CHECK(t.mass(5) == 40u * (30 - 5));
}

TEST_CASE("distribution filtering") {
  CountTable t;
  t.counts[{0}] = {{1, 9}, {2, 1}};
  t.counts[{3}] = {{1, 3}, {2, 1}};
  auto d5 = build_distributions(t, 5);
  REQUIRE(d5.find({0}));
  CHECK(d5.find({0})->size() == 1);
  CHECK(d5.find({0})->at(0).second == doctest::Approx(1.0));
  CHECK(d5.find({3}) == nullptr);
  auto d1 = build_distributions(t, 1);
  REQUIRE(d1.find({3}));
  CHECK(d1.find({3})->at(0).second == doctest::Approx(0.75));
  CHECK(d1.find({3})->at(1).second == doctest::Approx(0.25));
}

TEST_CASE("filtering is monotone in support") {
  auto c = oracle::corpus_from(random_corpus(11, 60, 40, 5));
  auto counts = build_observations(c, 3);
  auto lo = build_distributions(counts, 2);
  auto hi = build_distributions(counts, 6);
  for (const auto& [src, cnt] : hi.filtered.counts) {
    const auto* low = lo.filtered.find(src);
    REQUIRE(low);
    for (const auto& [tgt, n] : cnt)
      CHECK(std::find(low->begin(), low->end(), std::pair{tgt, n}) != low->end());
  }
  for (const auto& [src, d] : lo.distributions) {
    double s = 0;
    for (auto [t, p] : d) {
      CHECK(p > 0);
      s += p;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("kl divergence vectors") {
  CHECK(kl_divergence({{1, 0.5}, {2, 0.5}}, {{1, 0.5}, {2, 0.5}}) == 0.0);
  CHECK(std::abs(kl_divergence({{1, 1.0}}, {{1, 0.5}, {2, 0.5}}) - 1.0) < 1e-12);
  const double expected = 0.7 * std::log2(1.4) + 0.3 * std::log2(0.6);
  CHECK(std::abs(kl_divergence({{1, 0.7}, {2, 0.3}}, {{1, 0.5}, {2, 0.5}}) - expected) < 1e-12);
  CHECK(std::abs(expected - 0.1187) < 1e-4);
}

TEST_CASE("kl divergence support violation") {
  try {
    kl_divergence({{1, 0.5}, {3, 0.5}}, {{1, 0.5}, {2, 0.5}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportViolation);
  }
}

TEST_CASE("kl divergence is non-negative and zero on itself") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 6;
    Distribution p, q;
    double sp = 0, sq = 0;
    for (int i = 0; i < k; ++i) {
      p.push_back({static_cast<EntityId>(i), u(rng)});
      q.push_back({static_cast<EntityId>(i), u(rng)});
      sp += p.back().second;
      sq += q.back().second;
    }
    for (auto& [e, v] : p) v /= sp;
    for (auto& [e, v] : q) v /= sq;
    CHECK(kl_divergence(p, q) >= 0.0);
    CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  }
}

TEST_CASE("significance threshold vectors") {
  CHECK(std::abs(significance_threshold(1, 2) - 1.0) < 1e-12);
  CHECK(std::abs(significance_threshold(2, 16) - 0.5) < 1e-12);
  CHECK(significance_threshold(3, 1) == std::numeric_limits<double>::infinity());
  CHECK(significance_threshold(3, 0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ExtractionParams{0, 5}.validate()), Error);
  CHECK_THROWS_AS((ExtractionParams{3, 0}.validate()), Error);
  CHECK_NOTHROW((ExtractionParams{1, 1}.validate()));
}

TEST_CASE("canal rules") {
  auto c = oracle::corpus_from(canal_text());
  auto r = extract_rules(c, {3, 3});
  CHECK(r.size() == 11);
  CHECK(r.contains(path_of(c, {"d", "f", "g"})));
  CHECK(r.contains(path_of(c, {"e", "f", "g"})));
  CHECK(r.contains(path_of(c, {"d", "f"})));
  CHECK(r.contains(path_of(c, {"d"})));
  CHECK_FALSE(r.contains(path_of(c, {"f", "g"})));
  CHECK(r.valid.count(path_of(c, {"d", "f", "g"})));
  CHECK_FALSE(r.valid.count(path_of(c, {"d", "f"})));
  CHECK(r.count_of_order(1) == 7);
  CHECK(r.count_of_order(2) == 2);
  CHECK(r.count_of_order(3) == 2);

  std::ostringstream dump;
  dump_rules(dump, r, *c.entities);
  CHECK(dump.str().find("d.f.g -> h 10\n") != std::string::npos);
}

TEST_CASE("canal rules at the default max order") {
  auto c = oracle::corpus_from(canal_text());
  auto r = extract_rules(c, {5, 3});
  CHECK(r.contains(path_of(c, {"d", "f", "g"})));
  CHECK(r.count_of_order(4) == 0);
}

TEST_CASE("prefix closure and order-1 coverage") {
  auto c = oracle::corpus_from(random_corpus(21, 80, 50, 4));
  auto r = extract_rules(c, {4, 2});
  CHECK(r.count_of_order(2) > 0);
  for (const auto& [src, cnt] : r.rules)
    if (src.size() > 1) CHECK(r.contains(Path(src.begin(), src.end() - 1)));
  auto d = build_distributions(build_observations(c, 4), 2);
  for (const auto& [src, dist] : d.distributions)
    if (src.size() == 1) CHECK(r.contains(src));
}

TEST_CASE("matches the naive extractor") {
  for (std::uint32_t seed = 1; seed <= 12; ++seed) {
    const int alphabet = 3 + static_cast<int>(seed % 4);
    const std::string text = random_corpus(seed, 30 + static_cast<int>(seed) * 3, 25, alphabet);
    const int max_order = 1 + static_cast<int>(seed % 5);
    const std::uint64_t support = 1 + seed % 4;
    auto c = oracle::corpus_from(text);
    auto mine = oracle::as_naive(extract_rules(c, {max_order, support}), *c.entities);
    auto ref = oracle::naive_extract(oracle::split_lines(text), max_order, support);
    CAPTURE(seed);
    CHECK(mine.rules == ref.rules);
    CHECK(mine.valid == ref.valid);
  }
}

TEST_CASE("independent of trajectory order") {
  const std::string text = random_corpus(8, 50, 20, 4);
  auto lines = oracle::split_lines(text);
  std::string reversed;
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    for (std::size_t i = 0; i < it->size(); ++i) reversed += (i ? " " : "") + (*it)[i];
    reversed += '\n';
  }
  auto a = oracle::corpus_from(text);
  auto b = oracle::corpus_from(reversed);
  CHECK(oracle::as_naive(extract_rules(a, {3, 2}), *a.entities).rules ==
        oracle::as_naive(extract_rules(b, {3, 2}), *b.entities).rules);
}

TEST_CASE("serial and parallel counting agree") {
  auto c = oracle::corpus_from(random_corpus(4, 300, 40, 7));
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(kernels::count_observations_parallel(c, 4) == kernels::count_observations_serial(c, 4));
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("empty count table gives no rules") {
  CountTable t;
  auto r = extract_rules(t, {3, 1});
  CHECK(r.size() == 0);
}
