#include <doctest.h>

#include <random>
#include <sstream>

#include "bcclab/algorithms.hpp"
#include "bcclab/errors.hpp"
#include "bcclab/reduction.hpp"

using namespace bcclab;

namespace {

class TwoSymbols final : public Algorithm {
  struct Program final : VertexProgram {
    Payload broadcast(std::size_t) override {
      Payload p(Symbol::One);
      p.push_back(Symbol::Zero);
      return p;
    }
    void receive(std::size_t, std::span<const Payload>) override {}
    Verdict decide() const override { return Verdict::Yes; }
    std::string snapshot() const override { return {}; }
  };

public:
  std::string name() const override { return "two-symbols"; }
  std::unique_ptr<VertexProgram> instantiate(const VertexView&) const override { return std::make_unique<Program>(); }
};

std::size_t max_degree(const ReductionGraph& g) {
  std::vector<std::size_t> deg(g.vertex_count(), 0);
  for (auto [a, b] : g.edges()) {
    ++deg[a];
    ++deg[b];
  }
  return *std::max_element(deg.begin(), deg.end());
}

} // namespace

TEST_CASE("two-regular examples") {
  auto p = SetPartition::parse("(1,2)(3,4)");
  auto g = build_reduction(ReductionVariant::TwoRegular, p, p);
  using E = BccInstance::Edge;
  auto has = [&](Vertex a, Vertex b) {
    const auto& e = g.edges();
    return std::find(e.begin(), e.end(), E{std::min(a, b), std::max(a, b)}) != e.end();
  };
  CHECK(g.edges().size() == 8);
  CHECK(has(g.l(1), g.l(2)));
  CHECK(has(g.l(2), g.r(2)));
  CHECK(has(g.r(2), g.r(1)));
  CHECK(has(g.r(1), g.l(1)));
  CHECK(has(g.l(3), g.l(4)));
  CHECK(has(g.r(4), g.r(3)));
  auto shape = cycle_shape(g);
  CHECK(shape.two_regular);
  CHECK(shape.cycle_lengths == std::vector<std::size_t>{4, 4});
  CHECK(shape.all_even_at_least_4);
  CHECK(components_partition(g).format() == "(1,2)(3,4)");
  CHECK(components_partition_right(g).format() == "(1,2)(3,4)");

  auto h = build_reduction(ReductionVariant::TwoRegular, p, SetPartition::parse("(2,3)(4,1)"));
  CHECK(cycle_shape(h).cycle_lengths == std::vector<std::size_t>{8});
  CHECK(components_partition(h).is_trivial());
}

TEST_CASE("id scheme") {
  auto p = SetPartition::parse("(1,2)(3,4)");
  auto g = build_reduction(ReductionVariant::TwoRegular, p, p);
  CHECK(g.id(g.l(1)) == 5);
  CHECK(g.id(g.r(4)) == 12);
  CHECK_THROWS(g.a(1));
  auto q = SetPartition::parse("(1)(2)(3)");
  auto gen = build_reduction(ReductionVariant::General, q, q);
  CHECK(gen.vertex_count() == 12);
  for (std::size_t i = 1; i <= 3; ++i) {
    CHECK(gen.id(gen.a(i)) == i);
    CHECK(gen.id(gen.l(i)) == 3 + i);
    CHECK(gen.id(gen.r(i)) == 6 + i);
    CHECK(gen.id(gen.b(i)) == 9 + i);
  }
  CHECK(gen.alice_hosts().size() == 6);
  CHECK(gen.bob_hosts().size() == 6);
  CHECK_THROWS_AS(build_reduction(ReductionVariant::TwoRegular, q, q), std::invalid_argument);
  CHECK_THROWS_AS(build_reduction(ReductionVariant::General, q, SetPartition::finest(4)), std::invalid_argument);
}

TEST_CASE("general example") {
  auto pa = SetPartition::parse("(1,2)(3,4)(5)");
  auto pb = SetPartition::parse("(1,2,4)(3)(5)");
  auto g = build_reduction(ReductionVariant::General, pa, pb);
  CHECK(components_partition(g).format() == "(1,2,3,4)(5)");
  CHECK(verify_join_correspondence(pa, pb, ReductionVariant::General));
  // Finest inputs: every rung stays its own component.
  auto f = SetPartition::finest(3);
  CHECK(components_partition(build_reduction(ReductionVariant::General, f, f)) == f);
}

TEST_CASE("join correspondence, exhaustive for small n") {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto all = enumerate_partitions(n);
    for (const auto& p : all)
      for (const auto& q : all)
        CHECK(verify_join_correspondence(p, q, ReductionVariant::General));
  }
  for (std::size_t n : {2u, 4u, 6u}) {
    auto all = enumerate_pair_partitions(n);
    for (const auto& p : all)
      for (const auto& q : all) {
        CHECK(verify_join_correspondence(p, q, ReductionVariant::TwoRegular));
        auto g = build_reduction(ReductionVariant::TwoRegular, p, q);
        auto shape = cycle_shape(g);
        CHECK(shape.all_even_at_least_4);
        CHECK(shape.cycle_lengths.size() == join(p, q).block_count());
      }
  }
}

TEST_CASE("join correspondence on random inputs") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    auto p = random_partition(n, rng);
    auto q = random_partition(n, rng);
    CHECK(verify_join_correspondence(p, q, ReductionVariant::General));
    const std::size_t m = 2 * (1 + rng() % 100);
    auto a = random_pair_partition(m, rng);
    auto b = random_pair_partition(m, rng);
    CHECK(verify_join_correspondence(a, b, ReductionVariant::TwoRegular));
  }
}

TEST_CASE("two-party simulation matches the monolithic run") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 * (1 + rng() % 8);
    auto p = random_pair_partition(n, rng);
    auto q = random_pair_partition(n, rng);
    const auto budget = FullExchangeSparse::round_budget(3 * n, 2);
    auto res = two_party_simulate(FullExchangeSparse(2), p, q, ReductionVariant::TwoRegular, budget);
    CHECK(res.equivalent);
    CHECK(!res.mismatch);
    CHECK((res.system_verdict == Verdict::Yes) == join(p, q).is_trivial());
    CHECK(res.trace.hosted_per_side == n);
    CHECK(res.trace.alice_symbols == budget * n);
    CHECK(res.trace.bob_symbols == budget * n);
    REQUIRE(res.trace.alice_to_bob.size() == budget);
    for (const auto& msg : res.trace.alice_to_bob)
      CHECK(msg.size() == n);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto p = random_partition(n, rng);
    auto q = random_partition(n, rng);
    auto g = build_reduction(ReductionVariant::General, p, q);
    const auto d = max_degree(g);
    const auto budget = FullExchangeSparse::round_budget(4 * n, d);
    auto res = two_party_simulate(FullExchangeSparse(d), p, q, ReductionVariant::General, budget);
    CHECK(res.equivalent);
    CHECK((res.system_verdict == Verdict::Yes) == join(p, q).is_trivial());
    CHECK(res.trace.total_symbols() == 2 * budget * 2 * n);
  }
}

TEST_CASE("two-party simulation of always-silent and random algorithms") {
  auto p = SetPartition::parse("(1,3)(2,4)");
  auto q = SetPartition::parse("(1,2)(3,4)");
  auto res = two_party_simulate(AlwaysSilent(), p, q, ReductionVariant::TwoRegular, 3);
  CHECK(res.equivalent);
  for (const auto& msg : res.trace.bob_to_alice)
    for (auto s : msg)
      CHECK(s == Symbol::Silent);
  CHECK(pack_trits(res.trace.alice_to_bob[0]) == "aa");
  RandomTableAlgorithm rnd(5, 300);
  CHECK(two_party_simulate(rnd, p, q, ReductionVariant::TwoRegular, 4).equivalent);
  CHECK(two_party_simulate(rnd, SetPartition::parse("(1,2)(3)"), SetPartition::parse("(1)(2,3)"),
                           ReductionVariant::General, 4)
            .equivalent);
  std::ostringstream out;
  write_trace(out, res.trace);
  CHECK(!out.str().empty());
}

TEST_CASE("pack_trits layout") {
  CHECK(pack_trits({Symbol::One}) == "01");
  CHECK(pack_trits({Symbol::Zero, Symbol::One, Symbol::Silent, Symbol::One}) == "64");
  CHECK(pack_trits({Symbol::Silent, Symbol::Silent, Symbol::Silent, Symbol::Silent, Symbol::One}) == "aa01");
}

TEST_CASE("endpoints see only their own input") {
  auto p = SetPartition::parse("(1,2)(3,4)");
  TwoPartyEndpoint alice(Party::Alice, ReductionVariant::TwoRegular, p, AlwaysYes());
  CHECK(alice.hosted_count() == 4);
  CHECK(alice.hosted_ids() == std::vector<VertexId>{5, 6, 7, 8});
  CHECK(alice.emit(1) == std::vector<Symbol>(4, Symbol::One));
  TwoPartyEndpoint bad(Party::Bob, ReductionVariant::TwoRegular, p, TwoSymbols());
  CHECK_THROWS_AS(bad.emit(1), ProtocolViolation);
  CHECK_THROWS_AS(two_party_simulate(TwoSymbols(), p, p, ReductionVariant::TwoRegular, 1), ProtocolViolation);
}
