#include <doctest.h>

#include <random>
#include <set>

#include "bcclab/algorithms.hpp"
#include "bcclab/disjoint_set.hpp"
#include "bcclab/errors.hpp"

using namespace bcclab;

namespace {

// Random graph of maximum degree d, built by rejection.
std::vector<BccInstance::Edge> random_sparse_graph(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::vector<std::size_t> deg(n, 0);
  std::set<BccInstance::Edge> edges;
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  const auto tries = std::uniform_int_distribution<std::size_t>(0, 2 * n)(rng);
  for (std::size_t i = 0; i < tries; ++i) {
    auto a = pick(rng);
    auto b = pick(rng);
    if (a == b || deg[a] >= d || deg[b] >= d)
      continue;
    if (edges.insert({std::min(a, b), std::max(a, b)}).second) {
      ++deg[a];
      ++deg[b];
    }
  }
  return {edges.begin(), edges.end()};
}

bool connected(std::size_t n, const std::vector<BccInstance::Edge>& edges) {
  DisjointSet dsu(n);
  for (auto [a, b] : edges)
    dsu.unite(a, b);
  return dsu.set_count() == 1;
}

} // namespace

TEST_CASE("constant algorithms") {
  std::vector<BccInstance::Edge> e{{0, 1}};
  BccInstance inst(3, KnowledgeMode::KT0, {}, e);
  auto yes = simulate(inst, AlwaysYes(), 3);
  auto silent = simulate(inst, AlwaysSilent(), 3);
  for (Vertex v = 0; v < 3; ++v)
    for (std::size_t r = 1; r <= 3; ++r) {
      CHECK(yes.transcript.sent(v, r) == Payload(Symbol::One));
      CHECK(silent.transcript.sent(v, r) == Payload(Symbol::Silent));
    }
  CHECK(system_verdict(std::span<const Verdict>(yes.verdicts)) == Verdict::Yes);
  CHECK(system_verdict(std::span<const Verdict>(silent.verdicts)) == Verdict::Yes);
}

TEST_CASE("id width") {
  CHECK(id_bit_width(0) == 1);
  CHECK(id_bit_width(1) == 1);
  CHECK(id_bit_width(2) == 2);
  CHECK(id_bit_width(7) == 3);
  CHECK(id_bit_width(8) == 4);
  CHECK(FullExchangeSparse::round_budget(7, 2) == 6);
  CHECK(IdExchange(2).round_budget(8) == 9);
}

TEST_CASE("full-exchange-sparse decides connectivity at its budget") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 120; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 24)(rng);
    const auto d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    auto edges = random_sparse_graph(n, d, rng);
    std::vector<VertexId> ids(n);
    for (std::size_t i = 0; i < n; ++i)
      ids[i] = 3 * i + 5;
    std::shuffle(ids.begin(), ids.end(), rng);
    BccInstance inst(n, KnowledgeMode::KT1, ids, edges);
    FullExchangeSparse alg(d);
    const auto budget = FullExchangeSparse::round_budget(inst.max_id(), d);
    auto run = simulate(inst, alg, budget);
    const auto truth = connected(n, edges) ? Verdict::Yes : Verdict::No;
    for (auto v : run.verdicts)
      CHECK(v == truth);
    // Component labels agree with the real components.
    DisjointSet dsu(n);
    for (auto [a, b] : edges)
      dsu.unite(a, b);
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b)
        CHECK((run.programs[a]->label() == run.programs[b]->label()) == dsu.same(a, b));
    // Before the budget every vertex still says YES.
    if (budget > 0) {
      auto early = simulate(inst, alg, budget - 1);
      for (auto v : early.verdicts)
        CHECK(v == Verdict::Yes);
    }
  }
}

TEST_CASE("full-exchange-sparse refuses KT-0") {
  std::vector<BccInstance::Edge> e{{0, 1}};
  BccInstance inst(3, KnowledgeMode::KT0, {}, e);
  CHECK_THROWS_AS(simulate(inst, FullExchangeSparse(), 1), UnsupportedOperation);
}

TEST_CASE("id-exchange decides connectivity in KT-0") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 120; ++trial) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 24)(rng);
    const auto d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    auto edges = random_sparse_graph(n, d, rng);
    BccInstance inst(n, KnowledgeMode::KT0, {}, edges);
    IdExchange alg(d);
    auto run = simulate(inst, alg, alg.round_budget(n));
    const auto truth = connected(n, edges) ? Verdict::Yes : Verdict::No;
    for (auto v : run.verdicts)
      CHECK(v == truth);
  }
}

TEST_CASE("id-exchange first phase broadcasts ids least significant bit first") {
  std::vector<BccInstance::Edge> e{{0, 1}, {1, 2}};
  BccInstance inst(6, KnowledgeMode::KT0, {}, e);
  IdExchange alg(2);
  auto run = simulate(inst, alg, 3);
  for (Vertex v = 0; v < 6; ++v)
    for (std::size_t r = 1; r <= 3; ++r)
      CHECK(run.transcript.sent(v, r) == Payload(((v >> (r - 1)) & 1u) ? Symbol::One : Symbol::Zero));
}

TEST_CASE("registry") {
  CHECK(make_algorithm("always-yes")->name() == "always-yes");
  CHECK(make_algorithm("id-exchange")->name() == "id-exchange");
  CHECK_THROWS_AS(make_algorithm("nope"), std::invalid_argument);
  CHECK(reference_algorithms().size() == 4);
}
