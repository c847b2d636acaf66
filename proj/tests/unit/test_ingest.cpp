#include <doctest.h>

#include <sstream>

#include "hon/error.hpp"
#include "hon/ingest.hpp"
#include "oracles.hpp"

using namespace hon;

namespace {

std::vector<std::string> names(const Corpus& c, const Trajectory& t) {
  std::vector<std::string> out;
  for (auto e : t.entities) out.push_back(c.entities->name(e));
  return out;
}

Corpus parse(const std::string& text, ParseOptions opts = {}) {
  std::istringstream in(text);
  return parse_trajectories(in, opts);
}

}  // namespace

TEST_CASE("parse with ids") {
  auto c = parse("s1 a b c\n", {.has_id = true});
  REQUIRE(c.trajectories.size() == 1);
  CHECK(c.trajectories[0].id == "s1");
  CHECK(names(c, c.trajectories[0]) == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("single-entity line is kept") {
  auto c = parse("a\n");
  REQUIRE(c.trajectories.size() == 1);
  CHECK(c.trajectories[0].entities.size() == 1);
  CHECK(c.movement_count() == 0);
}

TEST_CASE("dedup collapses consecutive repeats only") {
  auto c = parse("s2 a a b a\n", {.has_id = true, .dedup_consecutive = true});
  CHECK(names(c, c.trajectories[0]) == std::vector<std::string>{"a", "b", "a"});
  auto raw = parse("s2 a a b\n", {.has_id = true});
  CHECK(raw.trajectories[0].entities.size() == 3);
}

TEST_CASE("blank lines, CRLF and extra spaces") {
  auto c = parse("a b\r\n\r\n   \n  c   d \n");
  REQUIRE(c.trajectories.size() == 2);
  CHECK(names(c, c.trajectories[1]) == std::vector<std::string>{"c", "d"});
}

TEST_CASE("id-only line is skipped") {
  auto c = parse("s1\ns2 x y\n", {.has_id = true});
  REQUIRE(c.trajectories.size() == 1);
  CHECK(c.trajectories[0].id == "s2");
}

TEST_CASE("reserved characters report the line") {
  for (const char* bad : {"a b\nc d|e\n", "a b\nc d,e\n"}) {
    try {
      parse(bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedLine);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("empty input") {
  CHECK_THROWS_AS(parse(""), Error);
  try {
    parse("\n\n");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyInput);
  }
}

TEST_CASE("max length drops long trajectories") {
  auto c = parse("a b c d\na b\n", {.max_trajectory_len = 3});
  REQUIRE(c.trajectories.size() == 1);
  CHECK(c.trajectories[0].entities.size() == 2);
}

TEST_CASE("entity validity") {
  CHECK(is_valid_entity("Singapore"));
  CHECK(is_valid_entity("r1c2"));
  CHECK_FALSE(is_valid_entity(""));
  CHECK_FALSE(is_valid_entity("a|b"));
  CHECK_FALSE(is_valid_entity("a,b"));
  CHECK_FALSE(is_valid_entity("a b"));
  CHECK_FALSE(is_valid_entity("a\tb"));
}

TEST_CASE("ids follow first appearance") {
  auto c = parse("z y\ny x\n");
  CHECK(c.entities->find("z") == EntityId{0});
  CHECK(c.entities->find("y") == EntityId{1});
  CHECK(c.entities->find("x") == EntityId{2});
  CHECK_FALSE(c.entities->find("w").has_value());
}

TEST_CASE("sliding windows") {
  auto c = parse("a b c\na b a b\n");
  auto to_names = [&](const auto& windows) {
    std::vector<std::vector<std::string>> out;
    for (auto w : windows) {
      std::vector<std::string> s;
      for (auto e : w) s.push_back(c.entities->name(e));
      out.push_back(s);
    }
    return out;
  };
  const auto& t0 = c.trajectories[0].entities;
  const auto& t1 = c.trajectories[1].entities;
  CHECK(to_names(extract_subsequences(t0, 2)) ==
        std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "c"}});
  CHECK(extract_subsequences(t0, 4).empty());
  CHECK(to_names(extract_subsequences(t1, 3)) ==
        std::vector<std::vector<std::string>>{{"a", "b", "a"}, {"b", "a", "b"}});
}

TEST_CASE("window count and head reconstruction") {
  auto c = oracle::corpus_from("a b c d e f g\nq\nx y\n");
  for (const auto& t : c.trajectories) {
    for (std::size_t L = 2; L <= 9; ++L) {
      const auto w = extract_subsequences(t.entities, L);
      const std::size_t expected = t.entities.size() >= L ? t.entities.size() - L + 1 : 0;
      CHECK(w.size() == expected);
    }
    std::vector<EntityId> heads;
    for (auto w : extract_subsequences(t.entities, 2)) heads.push_back(w[0]);
    if (t.entities.size() >= 2)
      CHECK(heads == std::vector<EntityId>(t.entities.begin(), t.entities.end() - 1));
  }
}

TEST_CASE("round trip is byte-identical") {
  const std::string with_id = "t1 a b c\nt2 c b\nt3 z\n";
  std::ostringstream out;
  write_trajectories(out, parse(with_id, {.has_id = true}), true);
  CHECK(out.str() == with_id);

  const std::string bare = "a b c\nc b\n";
  std::ostringstream out2;
  write_trajectories(out2, parse(bare), false);
  CHECK(out2.str() == bare);
}

TEST_CASE("tail trimming") {
  auto c = oracle::corpus_from("a b c d e\na b\n");
  auto t = trim_tails(c, 3);
  REQUIRE(t.trajectories.size() == 2);
  CHECK(t.trajectories[0].entities.size() == 2);
  CHECK(t.trajectories[1].entities.size() == 2);
  CHECK(t.entities == c.entities);
}

TEST_CASE("missing file") {
  try {
    read_trajectory_file("/nonexistent/trajectories.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}
