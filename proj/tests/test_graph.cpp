#include <doctest.h>

#include <sstream>

#include "msrpa/graph.hpp"
#include "test_support.hpp"

using namespace msrpa;
using msrpa::testing::Rng;

namespace {

Digraph cycle3() {
  const std::vector<Digraph::Edge> e{{0, 1}, {1, 2}, {2, 0}};
  return Digraph(3, e);
}

Digraph path3() {
  const std::vector<Digraph::Edge> e{{0, 1}, {1, 2}};
  return Digraph(3, e);
}

AgentSet to_set(std::span<const AgentId> s) { return {s.begin(), s.end()}; }

// Definitional check written independently of the library: enumerate every
// nonempty C inside V\S as a vector<bool>.
bool definitional_robust(const Digraph& g, const AgentSet& s, std::size_t r) {
  std::vector<AgentId> free_agents;
  for (AgentId i = 0; i < g.size(); ++i) {
    if (!std::binary_search(s.begin(), s.end(), i)) free_agents.push_back(i);
  }
  const std::size_t m = free_agents.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<bool> in_c(g.size(), false);
    for (std::size_t b = 0; b < m; ++b) {
      if (mask >> b & 1) in_c[free_agents[b]] = true;
    }
    bool reachable = false;
    for (AgentId i = 0; i < g.size(); ++i) {
      if (!in_c[i]) continue;
      std::size_t outside = 0;
      for (AgentId j : g.in_neighbors(i)) outside += in_c[j] ? 0 : 1;
      if (outside >= r) reachable = true;
    }
    if (!reachable) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("digraph rejects malformed edge sets") {
  const std::vector<Digraph::Edge> loop{{1, 1}};
  const std::vector<Digraph::Edge> dup{{0, 1}, {0, 1}};
  const std::vector<Digraph::Edge> range{{0, 3}};
  CHECK_THROWS_AS(Digraph(3, loop), std::invalid_argument);
  CHECK_THROWS_AS(Digraph(3, dup), std::invalid_argument);
  CHECK_THROWS_AS(Digraph(3, range), std::invalid_argument);
}

TEST_CASE("in_neighbors") {
  CHECK(to_set(cycle3().in_neighbors(1)) == AgentSet{0});
  CHECK(to_set(Digraph(4, {}).in_neighbors(2)).empty());
  CHECK_THROWS_AS(cycle3().in_neighbors(3), std::invalid_argument);

  // Agent 5 of the 14-agent undirected 5-circulant: 5 +/- 1..5 mod 14.
  const auto g = k_circulant(14, 5, true);
  CHECK(to_set(g.in_neighbors(5)) == AgentSet{0, 1, 2, 3, 4, 6, 7, 8, 9, 10});
}

TEST_CASE("inclusive_neighbors") {
  CHECK(cycle3().inclusive_neighbors(1) == AgentSet{0, 1});
  CHECK(Digraph(3, {}).inclusive_neighbors(2) == AgentSet{2});
  CHECK(complete_digraph(4).inclusive_neighbors(2) == AgentSet{0, 1, 2, 3});
  CHECK_THROWS_AS(cycle3().inclusive_neighbors(7), std::invalid_argument);
}

TEST_CASE("k_circulant") {
  SUBCASE("n=3 k=1 directed is a cycle") {
    const std::vector<Digraph::Edge> want{{0, 1}, {1, 2}, {2, 0}};
    CHECK(k_circulant(3, 1, false) == Digraph(3, want));
  }
  SUBCASE("n=4 k=3 directed is complete") { CHECK(k_circulant(4, 3, false) == complete_digraph(4)); }
  SUBCASE("directed variant has n*k edges") { CHECK(k_circulant(11, 4, false).edge_count() == 44); }
  SUBCASE("n=14 k=5 undirected matches enumeration") {
    const auto g = k_circulant(14, 5, true);
    for (AgentId i = 0; i < 14; ++i) {
      AgentSet want;
      for (std::size_t m = 1; m <= 5; ++m) {
        want.push_back((i + m) % 14);
        want.push_back((i + 14 - m) % 14);
      }
      want = make_agent_set(want);
      CHECK(want.size() == 10);
      CHECK(to_set(g.in_neighbors(i)) == want);
    }
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(k_circulant(5, 5, true), std::invalid_argument);
    CHECK_THROWS_AS(k_circulant(5, 0, false), std::invalid_argument);
    CHECK_THROWS_AS(k_circulant(1, 1, false), std::invalid_argument);
  }
}

TEST_CASE("edge consistency: in/out agree and degree sums equal |E|") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_digraph(rng, testing::pick(rng, 1, 12), 0.3);
    std::size_t in_sum = 0;
    std::size_t out_sum = 0;
    for (AgentId i = 0; i < g.size(); ++i) {
      in_sum += g.in_neighbors(i).size();
      out_sum += g.out_neighbors(i).size();
      for (AgentId j : g.in_neighbors(i)) {
        const auto out = g.out_neighbors(j);
        CHECK(std::find(out.begin(), out.end(), i) != out.end());
      }
    }
    CHECK(in_sum == g.edge_count());
    CHECK(out_sum == g.edge_count());
  }
}

TEST_CASE("F-total and F-local") {
  CHECK(is_f_total(AgentSet{}, 0));
  CHECK_FALSE(is_f_total(AgentSet{1, 2, 3}, 2));
  CHECK(is_f_total(AgentSet{1, 2}, 2));

  CHECK(is_f_local(k_circulant(9, 3, true), AgentSet{}, 0));
  CHECK_FALSE(is_f_local(complete_digraph(5), AgentSet{0, 3}, 1));

  const auto g = k_circulant(14, 5, true);
  CHECK(is_f_local(g, AgentSet{0, 4}, 2));
  CHECK_FALSE(is_f_local(g, AgentSet{5, 6, 7}, 2));
  CHECK(is_f_local(g, AgentSet{5, 6, 7}, 3));
  CHECK_THROWS_AS(is_f_local(g, AgentSet{14}, 2), std::invalid_argument);
}

TEST_CASE("strong robustness by peeling") {
  SUBCASE("path, r=1 holds") {
    const auto cert = strongly_robust_wrt(path3(), AgentSet{0}, 1);
    CHECK(cert.holds);
    REQUIRE(cert.peel_order.size() == 2);
    CHECK(cert.peel_order[0].agents == AgentSet{1});
    CHECK(cert.peel_order[1].agents == AgentSet{2});
    CHECK(definitional_robust(path3(), {0}, 1));
  }
  SUBCASE("path, r=2 fails with witness containing 2") {
    const auto cert = strongly_robust_wrt(path3(), AgentSet{0}, 2);
    CHECK_FALSE(cert.holds);
    CHECK(std::binary_search(cert.witness.begin(), cert.witness.end(), AgentId{2}));
    CHECK_FALSE(definitional_robust(path3(), {0}, 2));
  }
  SUBCASE("14-agent 5-circulant w.r.t. five consecutive agents") {
    const auto g = k_circulant(14, 5, true);
    CHECK(strongly_robust_wrt(g, AgentSet{0, 1, 2, 3, 4}, 5).holds);
    const auto six = strongly_robust_wrt(g, AgentSet{0, 1, 2, 3, 4}, 6);
    CHECK_FALSE(six.holds);
    CHECK_FALSE(six.witness.empty());
    CHECK_FALSE(strongly_robust_bruteforce(g, AgentSet{0, 1, 2, 3, 4}, 6));
  }
  SUBCASE("complete digraph, r = |S|") {
    for (std::size_t n = 2; n <= 8; ++n) {
      const auto g = complete_digraph(n);
      for (std::size_t s = 1; s < n; ++s) {
        AgentSet src;
        for (AgentId i = 0; i < s; ++i) src.push_back(i);
        CHECK(strongly_robust_wrt(g, src, s).holds);
        CHECK(definitional_robust(g, src, s));
      }
    }
  }
  SUBCASE("argument errors") {
    CHECK_THROWS_AS(strongly_robust_wrt(path3(), AgentSet{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(strongly_robust_wrt(path3(), AgentSet{0}, 0), std::invalid_argument);
  }
}

TEST_CASE("brute-force robustness") {
  CHECK(strongly_robust_bruteforce(path3(), AgentSet{0}, 1));
  // Follower 2 has no in-edges at all.
  const std::vector<Digraph::Edge> e{{0, 1}};
  CHECK_FALSE(strongly_robust_bruteforce(Digraph(3, e), AgentSet{0}, 1));
  CHECK_THROWS_AS(strongly_robust_bruteforce(complete_digraph(23), AgentSet{0}, 1), CapacityError);
  CHECK_THROWS_AS(strongly_robust_bruteforce(complete_digraph(8), AgentSet{0}, 1, 5), CapacityError);
}

TEST_CASE("certificate invariants and oracle equivalence on random digraphs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testing::pick(rng, 2, 12);
    const auto g = testing::random_digraph(rng, n, testing::pick_real(rng, 0.15, 0.9));
    const auto s = testing::random_nonempty_subset(rng, n);
    const std::size_t r = testing::pick(rng, 1, 4);
    const auto cert = strongly_robust_wrt(g, s, r);
    CAPTURE(trial);
    CHECK(cert.holds == strongly_robust_bruteforce(g, s, r));
    CHECK(cert.holds == definitional_robust(g, s, r));

    if (cert.holds) {
      AgentSet all = s;
      for (const auto& round : cert.peel_order) all.insert(all.end(), round.agents.begin(), round.agents.end());
      CHECK(make_agent_set(all).size() == n);
      if (s.size() < n) CHECK(s.size() >= r);
      // Monotone in r and in S.
      for (std::size_t lower = 1; lower < r; ++lower) CHECK(strongly_robust_wrt(g, s, lower).holds);
      AgentSet bigger = s;
      bigger.push_back(testing::pick(rng, 0, n - 1));
      CHECK(strongly_robust_wrt(g, make_agent_set(bigger), r).holds);
    } else {
      REQUIRE_FALSE(cert.witness.empty());
      for (AgentId i : cert.witness) {
        std::size_t outside = 0;
        for (AgentId j : g.in_neighbors(i)) {
          outside += std::binary_search(cert.witness.begin(), cert.witness.end(), j) ? 0 : 1;
        }
        CHECK(outside < r);
      }
    }
  }
}

TEST_CASE("consecutive leader block on circulants certifies robustness") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testing::pick(rng, 4, 20);
    const std::size_t k = testing::pick(rng, 1, n - 1);
    const bool undirected = testing::pick(rng, 0, 1) == 1;
    const auto g = k_circulant(n, k, undirected);
    // Block P of consecutive indices with |P| <= k; L contains >= r of it.
    const std::size_t block = testing::pick(rng, 1, std::min(k, n - 1));
    const std::size_t start = testing::pick(rng, 0, n - 1);
    AgentSet leaders;
    for (std::size_t m = 0; m < block; ++m) leaders.push_back((start + m) % n);
    const std::size_t r = testing::pick(rng, 1, block);
    CAPTURE(n);
    CAPTURE(k);
    CHECK(strongly_robust_wrt(g, make_agent_set(leaders), r).holds);
  }
}

TEST_CASE("edge list round trip") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    // Trailing isolated agents must survive the header.
    const auto g = testing::random_digraph(rng, testing::pick(rng, 1, 10), 0.2);
    std::stringstream buf;
    write_edge_list(buf, g);
    CHECK(read_edge_list(buf) == g);
  }
  std::istringstream bad("0 1\n1 x\n");
  CHECK_THROWS_AS(read_edge_list(bad), std::invalid_argument);
  std::istringstream plain("# a comment\n0 1\n\n1 2\n");
  CHECK(read_edge_list(plain) == path3());
}
