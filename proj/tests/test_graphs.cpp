#include "bvgf/graphs.hpp"

#include <map>
#include <random>
#include <set>

#include "doctest.h"

using namespace bvgf;

TEST_CASE("two-vertex vacuum classes: theta and dumbbell") {
  auto classes = enumerate_graphs(2, 0);
  REQUIRE(classes.size() == 2);
  std::multiset<Int> auts;
  for (const auto& g : classes) {
    auts.insert(g.aut_order);
    CHECK(g.loop_count == 2);
    CHECK(g.connected());
  }
  CHECK(auts == std::multiset<Int>{8, 12});

  EnumOptions nt;
  nt.allow_tadpoles = false;
  auto theta_only = enumerate_graphs(2, 0, nt);
  REQUIRE(theta_only.size() == 1);
  CHECK(theta_only[0].aut_order == 12);
}

TEST_CASE("star and empty enumerations") {
  auto star = enumerate_graphs(1, 3);
  REQUIRE(star.size() == 1);
  CHECK(star[0].aut_order == 6);
  CHECK(star[0].loop_count == 0);

  for (int k = 0; k < 4; ++k) CHECK(enumerate_graphs(0, k).empty());

  auto tadpole_leg = enumerate_graphs(1, 1);
  REQUIRE(tadpole_leg.size() == 1);
  CHECK(tadpole_leg[0].aut_order == 2);
  CHECK(tadpole_leg[0].has_tadpole());

  CHECK_THROWS_AS(enumerate_graphs(7, 0), Error);
}

TEST_CASE("matching counts split by class: 15 = 6 theta + 9 dumbbell") {
  std::map<std::string, int> counts;
  int total = 0;
  for_each_matching(2, 0, [&](const HalfEdgeMatching& m) {
    ++total;
    ++counts[canonical_encoding(matching_to_graph(m))];
  });
  CHECK(total == 15);
  auto classes = enumerate_graphs(2, 0);
  std::multiset<int> split;
  for (const auto& [enc, c] : counts) split.insert(c);
  CHECK(split == std::multiset<int>{6, 9});
  for (const auto& g : classes) {
    Int expect = factorial(2) * 36 / g.aut_order;
    CHECK(Int(counts[canonical_encoding(g)]) == expect);
  }
}

TEST_CASE("wick oracle with amplitude 1 equals the class sum of 1/aut") {
  for (int v = 1; v <= 4; ++v)
    for (int k = 0; k <= 3; ++k) {
      if ((3 * v - k) % 2 != 0) continue;
      Rat oracle =
          wick_sum_oracle(v, k, [](const HalfEdgeMatching&) { return Rat(1); });
      EnumOptions opt;
      opt.connected_only = false;
      Rat classes_sum(0);
      for (const auto& g : enumerate_graphs(v, k, opt))
        classes_sum += Rat(1) / Rat(g.aut_order);
      CHECK(oracle == classes_sum);
    }
  CHECK(wick_sum_oracle(2, 0, [](const HalfEdgeMatching&) { return Rat(1); }) ==
        Rat(15, 72));
  CHECK(wick_sum_oracle(1, 3, [](const HalfEdgeMatching&) { return Rat(1); }) ==
        Rat(1, 6));
}

TEST_CASE("canonical form is stable under random relabelings") {
  std::mt19937 rng(11);
  EnumOptions opt;
  opt.connected_only = false;
  for (int v = 2; v <= 4; ++v) {
    auto classes = enumerate_graphs(v, (v % 2) ? 1 : 2, opt);
    for (const auto& g : classes) {
      std::string enc = canonical_encoding(g);
      Graph canon = g;
      CHECK(canonical_encoding(canon) == enc);
      for (int it = 0; it < 10; ++it) {
        std::vector<int> perm(g.n_trivalent);
        for (int i = 0; i < g.n_trivalent; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Graph h = g;
        for (auto& e : h.edges) {
          e = {perm[e[0]], perm[e[1]]};
          if (e[0] > e[1]) std::swap(e[0], e[1]);
        }
        std::sort(h.edges.begin(), h.edges.end());
        h.legs.assign(g.n_trivalent, 0);
        for (int i = 0; i < g.n_trivalent; ++i) h.legs[perm[i]] = g.legs[i];
        CHECK(canonical_encoding(h) == enc);
        CHECK(automorphism_order(h) == g.aut_order);
      }
      Int bound = factorial(g.n_trivalent);
      for (int i = 0; i < g.n_trivalent; ++i) bound *= 6;
      CHECK(bound % g.aut_order == 0);
    }
  }
}

TEST_CASE("loop numbers and gluing bookkeeping") {
  auto star = enumerate_graphs(1, 3)[0];
  CHECK(loop_number_action(star) == 0);

  // gluing two legs of a connected graph adds one action-mode loop
  for (int v = 1; v <= 3; ++v) {
    for (const auto& g : enumerate_graphs(v, (v % 2) ? 3 : 2)) {
      std::vector<int> with_legs;
      for (int i = 0; i < g.n_trivalent; ++i)
        if (g.legs[i] > 0) with_legs.push_back(i);
      if (with_legs.empty()) continue;
      Graph h = g;
      int a = with_legs.front(), b = with_legs.back();
      if (a == b && g.legs[a] < 2) continue;
      --h.legs[a];
      --h.legs[b];
      int u = std::min(a, b), w = std::max(a, b);
      h.edges.push_back({u, w});
      std::sort(h.edges.begin(), h.edges.end());
      CHECK(loop_number_action(h) == loop_number_action(g) + 1);
    }
  }

  // joining two disjoint graphs by a new edge preserves the loop sum
  auto g1 = enumerate_graphs(1, 3)[0];
  Graph merged;
  merged.n_trivalent = 2;
  merged.legs = {2, 2};
  merged.edges = {{0, 1}};
  CHECK(loop_number_action(merged) ==
        loop_number_action(g1) + loop_number_action(g1));
}

TEST_CASE("link graph classes") {
  auto chord = enumerate_link_graphs(1, {2}, 0, 0);
  REQUIRE(chord.size() == 1);
  CHECK(chord[0].aut_order == 2);
  CHECK(chord[0].loop_count == 1);  // |E_in| - |V_t| = 1 - 0

  auto t = enumerate_link_graphs(1, {1}, 1, 2);
  REQUIRE(t.size() == 1);
  CHECK(t[0].loop_count == 0);
  CHECK(t[0].n_external() == 2);

  CHECK_THROWS_AS(enumerate_link_graphs(1, {0}, 0, 0), Error);

  // every trivalent vertex is connected to the circle
  for (const auto& g : enumerate_link_graphs(1, {1}, 2, 1)) {
    int n = g.n_vertices();
    std::vector<int> reach(n, 0);
    // simple reachability from univalent vertices
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges) {
      adj[e[0]].push_back(e[1]);
      adj[e[1]].push_back(e[0]);
    }
    std::vector<int> stack;
    for (int u = 0; u < g.n_univalent(); ++u) stack.push_back(g.n_trivalent + u);
    for (int s : stack) reach[s] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[x])
        if (!reach[y]) {
          reach[y] = 1;
          stack.push_back(y);
        }
    }
    for (int v = 0; v < g.n_trivalent; ++v) CHECK(reach[v] == 1);
  }

  // embedded (no-rotation) classes refine the abstract ones
  auto abs2 = enumerate_link_graphs(1, {3}, 0, 1);
  auto emb2 = enumerate_link_graphs(1, {3}, 0, 1, false);
  CHECK(emb2.size() >= abs2.size());
}

TEST_CASE("link mode loop number per chord") {
  auto cls = enumerate_link_graphs(2, {1, 1}, 0, 0);
  REQUIRE(cls.size() == 1);
  CHECK(cls[0].loop_count == 1);
}
