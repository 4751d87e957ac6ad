#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "bcclab/algorithms.hpp"
#include "bcclab/crossing.hpp"
#include "bcclab/disjoint_set.hpp"
#include "bcclab/errors.hpp"

using namespace bcclab;

namespace {

BccInstance cycle_through(const std::vector<Vertex>& order, std::size_t n = 0,
                          KnowledgeMode mode = KnowledgeMode::KT0) {
  if (n == 0)
    n = order.size();
  std::vector<BccInstance::Edge> e;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto a = order[i];
    auto b = order[(i + 1) % order.size()];
    e.emplace_back(std::min(a, b), std::max(a, b));
  }
  return BccInstance(n, mode, {}, e);
}

std::vector<Vertex> iota_order(std::size_t n) {
  std::vector<Vertex> o(n);
  for (Vertex v = 0; v < n; ++v)
    o[v] = v;
  return o;
}

std::vector<std::size_t> component_sizes(const BccInstance& inst) {
  DisjointSet dsu(inst.size());
  for (auto [a, b] : inst.input_edges())
    dsu.unite(a, b);
  std::map<std::size_t, std::size_t> count;
  for (Vertex v = 0; v < inst.size(); ++v)
    ++count[dsu.find(v)];
  std::vector<std::size_t> sizes;
  for (auto [root, c] : count)
    sizes.push_back(c);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// Random KT-0 instance: a random cycle plus a random port permutation at every vertex.
BccInstance random_cycle_instance(std::size_t n, std::mt19937_64& rng) {
  auto order = iota_order(n);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<BccInstance::Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    e.emplace_back(std::min(order[i], order[(i + 1) % n]), std::max(order[i], order[(i + 1) % n]));
  std::vector<std::vector<Port>> table(n, std::vector<Port>(n, 0));
  for (Vertex v = 0; v < n; ++v) {
    std::vector<Port> ports(n - 1);
    for (std::size_t k = 0; k < n - 1; ++k)
      ports[k] = k + 1;
    std::shuffle(ports.begin(), ports.end(), rng);
    std::size_t k = 0;
    for (Vertex u = 0; u < n; ++u)
      if (u != v)
        table[v][u] = ports[k++];
  }
  return BccInstance::with_port_tables(KnowledgeMode::KT0, {}, e, table);
}

std::vector<DirectedInputEdge> all_directed(const BccInstance& inst) {
  std::vector<DirectedInputEdge> out;
  for (auto [a, b] : inst.input_edges()) {
    out.push_back(directed_edge(inst, a, b));
    out.push_back(directed_edge(inst, b, a));
  }
  return out;
}

} // namespace

TEST_CASE("independence examples") {
  // 6-cycle 1-2-3-4-5-6 as vertices 0..5.
  auto inst = cycle_through(iota_order(6));
  CHECK(are_independent(inst, directed_edge(inst, 0, 1), directed_edge(inst, 3, 4)));
  CHECK(!are_independent(inst, directed_edge(inst, 0, 1), directed_edge(inst, 2, 3)));
  CHECK(!are_independent(inst, directed_edge(inst, 0, 1), directed_edge(inst, 1, 2)));
  CHECK_THROWS_AS(directed_edge(inst, 0, 2), std::invalid_argument);
  DirectedInputEdge fake{0, 2, 1, 1};
  CHECK_THROWS_AS(are_independent(inst, fake, directed_edge(inst, 3, 4)), std::invalid_argument);
}

TEST_CASE("crossing a 6-cycle gives two triangles") {
  auto inst = cycle_through(iota_order(6));
  auto e1 = directed_edge(inst, 0, 1);
  auto e2 = directed_edge(inst, 3, 4);
  auto c = cross(inst, e1, e2);
  std::vector<BccInstance::Edge> expected{{0, 4}, {0, 5}, {1, 2}, {1, 3}, {2, 3}, {4, 5}};
  CHECK(c.input_edges() == expected);
  // The new input edges occupy the old input ports.
  CHECK(c.port_of(0, 4) == e1.head_port);
  CHECK(c.port_of(4, 0) == e2.tail_port);
  CHECK(c.port_of(3, 1) == e2.head_port);
  CHECK(c.port_of(1, 3) == e1.tail_port);
  // The old pairs move to the freed ports.
  CHECK(c.port_of(0, 1) == inst.port_of(0, 4));
  CHECK(c.port_of(1, 0) == inst.port_of(1, 3));
  CHECK(c.port_of(3, 4) == inst.port_of(3, 1));
  CHECK(c.port_of(4, 3) == inst.port_of(4, 0));
  // Untouched ports stay.
  CHECK(c.port_of(2, 5) == inst.port_of(2, 5));
  CHECK(c.port_of(0, 5) == inst.port_of(0, 5));
  CHECK(c.ids() == inst.ids());
}

TEST_CASE("crossing two triangles gives one 6-cycle") {
  // {a,b,c} = {0,1,2}, {d,e,f} = {3,4,5}
  std::vector<BccInstance::Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  BccInstance inst(6, KnowledgeMode::KT0, {}, e);
  auto c = cross(inst, directed_edge(inst, 0, 1), directed_edge(inst, 3, 4));
  // a-e-f-d-b-c
  auto expected = cycle_through({0, 4, 5, 3, 1, 2});
  CHECK(c.input_edges() == expected.input_edges());
}

TEST_CASE("crossing errors") {
  auto inst = cycle_through(iota_order(6));
  CHECK_THROWS_AS(cross(inst, directed_edge(inst, 0, 1), directed_edge(inst, 2, 3)), PreconditionViolation);
  auto kt1 = cycle_through(iota_order(6), 6, KnowledgeMode::KT1);
  CHECK_THROWS_AS(cross(kt1, directed_edge(kt1, 0, 1), directed_edge(kt1, 3, 4)), UnsupportedOperation);
}

TEST_CASE("crossing is an involution") {
  std::mt19937_64 rng(99);
  int done = 0;
  while (done < 1000) {
    const auto n = std::uniform_int_distribution<std::size_t>(6, 20)(rng);
    auto inst = random_cycle_instance(n, rng);
    auto edges = all_directed(inst);
    auto e1 = edges[rng() % edges.size()];
    auto e2 = edges[rng() % edges.size()];
    if (!are_independent(inst, e1, e2))
      continue;
    auto c = cross(inst, e1, e2);
    auto [f1, f2] = crossed_edges(c, e1, e2);
    CHECK(cross(c, f1, f2) == inst);
    // Reversing both edges produces the same instance.
    CHECK(cross(inst, e1.reversed(), e2.reversed()) == c);
    ++done;
  }
}

TEST_CASE("crossing type law and distance-2 exclusion, exhaustive for n <= 9") {
  for (std::size_t n = 4; n <= 9; ++n) {
    auto order = iota_order(n);
    auto inst = cycle_through(order);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto dist = j - i;
        auto e1 = directed_edge(inst, order[i], order[(i + 1) % n]);
        auto aligned = directed_edge(inst, order[j], order[(j + 1) % n]);
        auto anti = aligned.reversed();
        const bool far = dist >= 3 && dist <= n - 3;
        CHECK(are_independent(inst, e1, aligned) == far);
        if (dist == 2 || dist == n - 2)
          CHECK(!are_independent(inst, e1, aligned));
        if (are_independent(inst, e1, aligned))
          CHECK(component_sizes(cross(inst, e1, aligned)) ==
                std::vector<std::size_t>{std::min(dist, n - dist), std::max(dist, n - dist)});
        if (are_independent(inst, e1, anti))
          CHECK(component_sizes(cross(inst, e1, anti)) == std::vector<std::size_t>{n});
      }
  }
}

TEST_CASE("edge labels and active edges") {
  auto inst = cycle_through(iota_order(8));
  auto e = directed_edge(inst, 2, 3);
  CHECK(edge_label(inst, AlwaysSilent(), 2, e).to_string() == "____");
  CHECK(edge_label(inst, AlwaysYes(), 0, e).symbols.empty());
  CHECK(active_edges(inst, AlwaysYes(), 0, {}, {}).size() == 16);
  CHECK_THROWS_AS(active_edges(inst, AlwaysYes(), 1, {}, {Symbol::One}), std::invalid_argument);

  // id-exchange, t=1: the first broadcast is the low id bit.
  IdExchange alg(2);
  std::size_t total = 0;
  for (auto x : {Symbol::Zero, Symbol::One})
    for (auto y : {Symbol::Zero, Symbol::One}) {
      auto act = active_edges(inst, alg, 1, {x}, {y});
      for (const auto& d : act) {
        CHECK(((d.head & 1u) ? Symbol::One : Symbol::Zero) == x);
        CHECK(((d.tail & 1u) ? Symbol::One : Symbol::Zero) == y);
      }
      total += act.size();
    }
  CHECK(total == 16);
}

TEST_CASE("states_identical basics and a counterexample with a witness") {
  auto inst = cycle_through(iota_order(8));
  IdExchange alg(2);
  CHECK(states_identical(inst, inst, alg, 5));
  // Heads 0 and 3 differ in their first id bit.
  auto e1 = directed_edge(inst, 0, 1);
  auto e2 = directed_edge(inst, 3, 4);
  auto c = cross(inst, e1, e2);
  auto cmp = compare_states(inst, c, alg, 1);
  CHECK(!cmp.identical);
  REQUIRE(cmp.difference);
  CHECK(cmp.difference->round == 1);
  CHECK(cmp.difference->port.has_value());
  CHECK(states_identical(inst, c, alg, 0));
}

TEST_CASE("crossing preserves states on random instances and algorithms") {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 300) {
    const auto n = std::uniform_int_distribution<std::size_t>(6, 20)(rng);
    const auto t = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
    auto inst = random_cycle_instance(n, rng);
    RandomTableAlgorithm alg(rng(), static_cast<unsigned>(rng() % 1000));
    auto run = simulate(inst, alg, t);
    auto edges = all_directed(inst);
    std::vector<std::pair<DirectedInputEdge, DirectedInputEdge>> candidates;
    for (const auto& a : edges)
      for (const auto& b : edges)
        if (edge_label(run.transcript, t, a) == edge_label(run.transcript, t, b) && are_independent(inst, a, b))
          candidates.emplace_back(a, b);
    if (candidates.empty())
      continue;
    auto [e1, e2] = candidates[rng() % candidates.size()];
    CHECK(states_identical(inst, cross(inst, e1, e2), alg, t));
    ++done;
  }
}

TEST_CASE("checker agrees with full simulation") {
  std::mt19937_64 rng(77);
  std::size_t agree_true = 0;
  std::size_t agree_false = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(6, 14)(rng);
    const auto t = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    auto inst = random_cycle_instance(n, rng);
    RandomTableAlgorithm alg(rng(), static_cast<unsigned>(rng() % 1000));
    IndistinguishabilityChecker checker(inst, alg, t);
    auto edges = all_directed(inst);
    for (int k = 0; k < 10; ++k) {
      auto e1 = edges[rng() % edges.size()];
      auto e2 = edges[rng() % edges.size()];
      if (!are_independent(inst, e1, e2))
        continue;
      auto c = cross(inst, e1, e2);
      const bool fast = checker.check_crossing(e1, e2);
      CHECK(fast == checker.check(c));
      const bool full = states_identical(inst, c, alg, t);
      // The checker is sound; for this hash-driven algorithm it is also exact.
      if (fast)
        CHECK(full);
      CHECK(fast == full);
      (fast ? agree_true : agree_false) += 1;
    }
  }
  CHECK(agree_true > 0);
  CHECK(agree_false > 0);
}

TEST_CASE("canonical cycle orientation") {
  auto inst = cycle_through({0, 5, 2, 4, 1, 3});
  auto c = canonical_cycle(inst);
  CHECK(c == std::vector<Vertex>{0, 3, 1, 4, 2, 5});
  std::vector<BccInstance::Edge> two{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  CHECK_THROWS_AS(canonical_cycle(BccInstance(6, KnowledgeMode::KT0, {}, two)), std::invalid_argument);
}

TEST_CASE("fooling pairs at t = 0 are exactly the splitting independent pairs") {
  std::mt19937_64 rng(5);
  for (std::size_t n = 6; n <= 16; ++n) {
    auto order = iota_order(n);
    std::shuffle(order.begin(), order.end(), rng);
    auto inst = cycle_through(order);
    auto rep = find_fooling_pairs(inst, AlwaysYes(), 0);
    CHECK(rep.pairs.size() == n * (n - 5) / 2);
    CHECK(rep.rejected == 0);
    CHECK(rep.method == VerifyMode::Simulation);
    // Independent oracle: every pair of canonically oriented edges, crossed for real.
    std::set<std::pair<std::uint32_t, std::uint32_t>> expected;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        auto a = rep.edge(inst, i);
        auto b = rep.edge(inst, j);
        if (!are_independent(inst, a, b))
          continue;
        if (component_sizes(cross(inst, a, b)).size() == 2)
          expected.insert({i, j});
      }
    std::set<std::pair<std::uint32_t, std::uint32_t>> got;
    for (const auto& p : rep.pairs) {
      got.insert({p.first, p.second});
      CHECK(p.verified);
      CHECK(p.split_first + p.split_second == n);
      CHECK(std::min(p.split_first, p.split_second) >= 3);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("fooling pairs: always-silent ignores t") {
  auto order = iota_order(12);
  std::mt19937_64 rng(1);
  std::shuffle(order.begin(), order.end(), rng);
  auto inst = cycle_through(order);
  auto at0 = find_fooling_pairs(inst, AlwaysSilent(), 0);
  auto at5 = find_fooling_pairs(inst, AlwaysSilent(), 5);
  REQUIRE(at0.pairs.size() == at5.pairs.size());
  for (std::size_t i = 0; i < at0.pairs.size(); ++i) {
    CHECK(at0.pairs[i].first == at5.pairs[i].first);
    CHECK(at0.pairs[i].second == at5.pairs[i].second);
  }
}

TEST_CASE("fooling pairs: checker and simulation agree") {
  auto order = iota_order(40);
  std::mt19937_64 rng(8);
  std::shuffle(order.begin(), order.end(), rng);
  auto inst = cycle_through(order);
  IdExchange alg(2);
  for (std::size_t t = 0; t <= 2; ++t) {
    FoolingOptions sim;
    sim.verify = VerifyMode::Simulation;
    FoolingOptions chk;
    chk.verify = VerifyMode::Checker;
    auto a = find_fooling_pairs(inst, alg, t, sim);
    auto b = find_fooling_pairs(inst, alg, t, chk);
    CHECK(a.pairs.size() == b.pairs.size());
    CHECK(!a.pairs.empty());
    CHECK(a.rejected == 0);
    CHECK(b.rejected == 0);
  }
  auto kt1 = cycle_through(order, 40, KnowledgeMode::KT1);
  CHECK_THROWS_AS(find_fooling_pairs(kt1, alg, 0), UnsupportedOperation);
}
