#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bcclab/cycle_family.hpp"
#include "bcclab/errors.hpp"

using namespace bcclab;

namespace {

struct Expected {
  std::size_t n;
  std::size_t min_len;
  std::size_t one;
  std::map<std::size_t, std::size_t> classes;
};

// Brute-force counts from the Python oracle.
const Expected kExpected[] = {
    {6, 3, 60, {{3, 10}}},
    {7, 3, 360, {{3, 105}}},
    {8, 3, 2520, {{3, 672}, {4, 315}}},
    {9, 3, 20160, {{3, 5040}, {4, 4536}}},
    {7, 4, 360, {}},
    {8, 4, 2520, {{4, 315}}},
};

std::size_t sum_classes(const std::map<std::size_t, std::size_t>& m) {
  std::size_t s = 0;
  for (auto [i, c] : m)
    s += c;
  return s;
}

} // namespace

TEST_CASE("canonical cycle order") {
  std::vector<Vertex> c{4, 2, 0, 3, 1};
  CHECK(canonical_cycle_order(c) == std::vector<Vertex>{0, 2, 4, 1, 3});
  std::vector<Vertex> d{5, 3, 4};
  CHECK(canonical_cycle_order(d) == std::vector<Vertex>{3, 4, 5});
}

TEST_CASE("cycle graph from edges") {
  std::vector<BccInstance::Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 5}, {4, 5}, {3, 4}};
  auto g = cycle_graph_from_edges(6, e);
  REQUIRE(g);
  CHECK(g->to_string() == "(0 1 2)(3 4 5)");
  CHECK(g->smaller_length() == 3);
  std::vector<BccInstance::Edge> path{{0, 1}, {1, 2}};
  CHECK(!cycle_graph_from_edges(3, path));
}

TEST_CASE("family counts match brute force") {
  for (const auto& ex : kExpected) {
    CAPTURE(ex.n);
    CAPTURE(ex.min_len);
    auto fam = enumerate_family(ex.n, ex.min_len);
    CHECK(fam.one_cycle.size() == ex.one);
    CHECK(fam.class_counts() == ex.classes);
    CHECK(fam.two_cycle.size() == sum_classes(ex.classes));
    CHECK(std::is_sorted(fam.one_cycle.begin(), fam.one_cycle.end()));
    CHECK(std::is_sorted(fam.two_cycle.begin(), fam.two_cycle.end()));
    CHECK(std::adjacent_find(fam.two_cycle.begin(), fam.two_cycle.end()) == fam.two_cycle.end());
  }
}

TEST_CASE("encode and decode round trip") {
  auto fam = enumerate_family(8);
  for (std::size_t i = 0; i < fam.one_cycle.size(); ++i) {
    auto g = fam.left(i);
    CHECK(g.cycles.size() == 1);
    CHECK(encode_cycle_graph(g) == fam.one_cycle[i]);
    CHECK(fam.index_one(fam.one_cycle[i]) == i);
    auto again = cycle_graph_from_edges(8, g.edges());
    REQUIRE(again);
    CHECK(*again == g);
  }
  for (std::size_t i = 0; i < fam.two_cycle.size(); ++i) {
    auto g = fam.right(i);
    CHECK(g.cycles.size() == 2);
    CHECK(g.smaller_length() == fam.class_of(i));
    CHECK(encode_cycle_graph(g) == fam.two_cycle[i]);
    auto again = cycle_graph_from_edges(8, g.edges());
    REQUIRE(again);
    CHECK(*again == g);
  }
  CHECK(!fam.index_one(fam.two_cycle[0]));
}

TEST_CASE("family limits") {
  CHECK_THROWS_AS(enumerate_family(12), ResourceLimitError);
  CHECK_THROWS_AS(enumerate_family(4), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_family(8, 5), std::invalid_argument);
  CHECK_THROWS_AS(family_count_closed_forms(kClosedFormExactLimit + 1), ResourceLimitError);
}

TEST_CASE("closed forms agree with enumeration") {
  for (const auto& ex : kExpected) {
    auto cf = family_count_closed_forms(ex.n, ex.min_len);
    CHECK(cf.one_cycle == ex.one);
    CHECK(cf.two_cycle == sum_classes(ex.classes));
    for (auto [i, c] : ex.classes)
      CHECK(cf.classes.at(i) == c);
  }
  CHECK(family_count_closed_forms(6).ratio == mpq_class(1, 6));
  CHECK(family_count_closed_forms(7).ratio == mpq_class(7, 24));
  CHECK(family_count_closed_forms(8).ratio == mpq_class(47, 120));
  CHECK(family_count_closed_forms(9).ratio == mpq_class(19, 40));
}

TEST_CASE("ratio values") {
  for (std::size_t n = 6; n <= 60; ++n) {
    auto cf = family_count_closed_forms(n);
    CHECK(family_ratio(n) == doctest::Approx(cf.ratio.get_d()).epsilon(1e-12));
    CHECK(family_ratio(n + 1) > family_ratio(n));
  }
  // Python oracle, float sum.
  CHECK(family_ratio(10000) / std::log(10000.0) == doctest::Approx(0.44989140853332316).epsilon(1e-4));
  CHECK(family_ratio(100000) / std::log(100000.0) == doctest::Approx(0.4599228997784028).epsilon(1e-4));
  CHECK(family_ratio(1000000) / std::log(1000000.0) == doctest::Approx(0.4666032307951944).epsilon(1e-4));
  auto big = family_count_closed_forms(kClosedFormExactLimit);
  CHECK(big.ratio.get_d() == doctest::Approx(family_ratio(kClosedFormExactLimit)).epsilon(1e-12));
}

TEST_CASE("family instance") {
  auto fam = enumerate_family(6);
  auto inst = family_instance(fam.right(0));
  CHECK(inst.size() == 6);
  CHECK(inst.input_edge_count() == 6);
  CHECK(inst.has_canonical_ports());
  CHECK(family_instance(fam.left(0), KnowledgeMode::KT1).mode() == KnowledgeMode::KT1);
}

#ifdef BCCLAB_LONG_TESTS
TEST_CASE("family counts for n = 10 and 11") {
  for (std::size_t n : {10u, 11u}) {
    auto fam = enumerate_family(n);
    auto cf = family_count_closed_forms(n);
    CHECK(cf.one_cycle == fam.one_cycle.size());
    CHECK(cf.two_cycle == fam.two_cycle.size());
    for (auto [i, c] : fam.class_counts())
      CHECK(cf.classes.at(i) == c);
  }
}
#endif
