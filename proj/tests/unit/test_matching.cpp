#include <doctest.h>

#include <random>

#include "bcclab/matching.hpp"

using namespace bcclab;

namespace {

// Exhaustive Hall condition over all left subsets.
bool hall_oracle(const BipartiteGraph& g, std::size_t k) {
  const std::size_t L = g.left_size();
  for (std::uint32_t mask = 1; mask < (1u << L); ++mask) {
    std::vector<bool> seen(g.right_size(), false);
    std::size_t nb = 0;
    std::size_t s = 0;
    for (std::size_t l = 0; l < L; ++l)
      if (mask >> l & 1u) {
        ++s;
        for (auto r : g.neighbors(l))
          if (!seen[r]) {
            seen[r] = true;
            ++nb;
          }
      }
    if (nb < k * s)
      return false;
  }
  return true;
}

void check_result(const BipartiteGraph& g, std::size_t k, const KMatchingResult& res) {
  if (res.matching) {
    CHECK(is_valid_k_matching(g, *res.matching));
    CHECK(res.matched_copies == k * g.left_size());
  } else {
    REQUIRE(!res.violator.empty());
    auto h = hall_check(g, res.violator, k);
    CHECK(!h.satisfied);
    CHECK(h.neighborhood == res.violator_neighborhood);
    CHECK(h.neighborhood < k * res.violator.size());
  }
}

} // namespace

TEST_CASE("star: one left vertex, k right neighbors") {
  BipartiteGraph g(1, 3);
  for (std::size_t r = 0; r < 3; ++r)
    g.add_edge(0, r);
  g.add_edge(0, 1);
  CHECK(g.edge_count() == 3);
  CHECK(k_matching(g, 3).matching);
  auto res = k_matching(g, 4);
  CHECK(!res.matching);
  CHECK(res.violator == std::vector<std::uint32_t>{0});
  CHECK(res.violator_neighborhood == 3);
}

TEST_CASE("complete bipartite K(m, km) has a k-matching, K(m, km-1) does not") {
  for (std::size_t m = 1; m <= 5; ++m)
    for (std::size_t k = 1; k <= 4; ++k) {
      BipartiteGraph full(m, k * m);
      BipartiteGraph short_by_one(m, k * m - 1);
      for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t r = 0; r < k * m; ++r)
          full.add_edge(l, r);
        for (std::size_t r = 0; r + 1 < k * m; ++r)
          short_by_one.add_edge(l, r);
      }
      auto a = k_matching(full, k);
      CHECK(a.matching);
      check_result(full, k, a);
      auto b = k_matching(short_by_one, k);
      CHECK(!b.matching);
      check_result(short_by_one, k, b);
    }
}

TEST_CASE("random graphs against the exhaustive Hall oracle") {
  std::mt19937_64 rng(31);
  std::size_t yes = 0;
  std::size_t no = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = 1 + rng() % 12;
    const std::size_t k = 1 + rng() % 4;
    const std::size_t R = 1 + rng() % (k * L + 4);
    const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    BipartiteGraph g(L, R);
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t r = 0; r < R; ++r)
        if (std::bernoulli_distribution(p)(rng))
          g.add_edge(l, r);
    auto res = k_matching(g, k);
    CHECK(res.matching.has_value() == hall_oracle(g, k));
    check_result(g, k, res);
    (res.matching ? yes : no) += 1;
  }
  CHECK(yes > 10);
  CHECK(no > 10);
}

TEST_CASE("planted k-matchings are found") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t L = 5 + rng() % 40;
    const std::size_t k = 1 + rng() % 4;
    const std::size_t R = k * L + rng() % 10;
    std::vector<std::uint32_t> perm(R);
    for (std::size_t i = 0; i < R; ++i)
      perm[i] = static_cast<std::uint32_t>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    BipartiteGraph g(L, R);
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t c = 0; c < k; ++c)
        g.add_edge(l, perm[l * k + c]);
    for (int extra = 0; extra < 3 * static_cast<int>(L); ++extra)
      g.add_edge(rng() % L, rng() % R);
    auto res = k_matching(g, k);
    REQUIRE(res.matching);
    check_result(g, k, res);
  }
}

TEST_CASE("validity checker rejects bad matchings") {
  BipartiteGraph g(2, 4);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(1, 1);
  g.add_edge(1, 2);
  CHECK(is_valid_k_matching(g, KMatching{1, {{0}, {1}}}));
  CHECK(!is_valid_k_matching(g, KMatching{1, {{1}, {1}}}));  // shared
  CHECK(!is_valid_k_matching(g, KMatching{1, {{3}, {1}}}));  // not an edge
  CHECK(!is_valid_k_matching(g, KMatching{2, {{0, 1}, {2}}}));  // too small
  auto h = hall_check(g, std::vector<std::uint32_t>{0, 1}, 2);
  CHECK(!h.satisfied);
  CHECK(h.neighborhood == 3);
  CHECK(h.required == 4);
}
