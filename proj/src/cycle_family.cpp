#include "bcclab/cycle_family.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bcclab/errors.hpp"

namespace bcclab {

namespace {

void check_min_len(std::size_t min_cycle_len) {
  if (min_cycle_len != 3 && min_cycle_len != 4)
    throw std::invalid_argument("minimum cycle length must be 3 or 4");
}

// Calls visit with every canonical cycle through all of `vertices` (ascending).
void for_each_canonical_cycle(const std::vector<Vertex>& vertices,
                              const std::function<void(const std::vector<Vertex>&)>& visit) {
  if (vertices.size() < 3)
    return;
  std::vector<Vertex> rest(vertices.begin() + 1, vertices.end());
  std::vector<Vertex> cycle(vertices.size());
  cycle[0] = vertices[0];
  do {
    if (rest.front() > rest.back())
      continue;
    std::copy(rest.begin(), rest.end(), cycle.begin() + 1);
    visit(cycle);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

mpz_class factorial(std::size_t k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

mpz_class binomial(std::size_t n, std::size_t k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

} // namespace

std::size_t CycleGraph::smaller_length() const {
  std::size_t m = n;
  for (const auto& c : cycles)
    m = std::min(m, c.size());
  return m;
}

std::vector<BccInstance::Edge> CycleGraph::edges() const {
  std::vector<BccInstance::Edge> out;
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto a = c[i];
      auto b = c[(i + 1) % c.size()];
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::string CycleGraph::to_string() const {
  std::ostringstream out;
  for (const auto& c : cycles) {
    out << '(';
    for (std::size_t i = 0; i < c.size(); ++i)
      out << (i ? " " : "") << c[i];
    out << ')';
  }
  return out.str();
}

std::vector<Vertex> canonical_cycle_order(std::span<const Vertex> cycle) {
  const auto len = cycle.size();
  if (len < 3)
    throw std::invalid_argument("a cycle needs at least 3 vertices");
  auto start = static_cast<std::size_t>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
  const auto fwd = cycle[(start + 1) % len];
  const auto back = cycle[(start + len - 1) % len];
  std::vector<Vertex> out(len);
  for (std::size_t i = 0; i < len; ++i)
    out[i] = fwd < back ? cycle[(start + i) % len] : cycle[(start + len - i) % len];
  return out;
}

std::optional<CycleGraph> cycle_graph_from_edges(std::size_t n, std::span<const BccInstance::Edge> edges) {
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n || a == b)
      return std::nullopt;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (const auto& nb : adj)
    if (nb.size() != 2 || nb[0] == nb[1])
      return std::nullopt;
  CycleGraph g;
  g.n = n;
  std::vector<bool> seen(n, false);
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s])
      continue;
    std::vector<Vertex> cycle{s};
    seen[s] = true;
    Vertex prev = s;
    Vertex cur = adj[s][0];
    while (cur != s) {
      seen[cur] = true;
      cycle.push_back(cur);
      Vertex next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = next;
    }
    g.cycles.push_back(canonical_cycle_order(cycle));
  }
  return g;
}

FamilyKey encode_cycle_graph(const CycleGraph& g) {
  if (g.n > kFamilyEnumerationLimit || g.cycles.empty() || g.cycles.size() > 2)
    throw std::invalid_argument("family keys cover one or two cycles on at most 11 vertices");
  FamilyKey key = g.cycles[0].size();
  unsigned shift = 4;
  for (const auto& c : g.cycles)
    for (auto v : c) {
      key |= static_cast<FamilyKey>(v) << shift;
      shift += 4;
    }
  return key;
}

CycleGraph decode_cycle_graph(FamilyKey key, std::size_t n) {
  CycleGraph g;
  g.n = n;
  const std::size_t first = key & 0xF;
  std::vector<Vertex> seq(n);
  for (std::size_t i = 0; i < n; ++i)
    seq[i] = static_cast<Vertex>((key >> (4 + 4 * i)) & 0xF);
  g.cycles.emplace_back(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(first));
  if (first < n)
    g.cycles.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(first), seq.end());
  return g;
}

std::optional<std::size_t> CycleFamily::index_one(FamilyKey key) const {
  auto it = std::lower_bound(one_cycle.begin(), one_cycle.end(), key);
  if (it == one_cycle.end() || *it != key)
    return std::nullopt;
  return static_cast<std::size_t>(it - one_cycle.begin());
}

std::optional<std::size_t> CycleFamily::index_two(FamilyKey key) const {
  auto it = std::lower_bound(two_cycle.begin(), two_cycle.end(), key);
  if (it == two_cycle.end() || *it != key)
    return std::nullopt;
  return static_cast<std::size_t>(it - two_cycle.begin());
}

std::size_t CycleFamily::class_of(std::size_t right_index) const {
  const std::size_t first = two_cycle.at(right_index) & 0xF;
  return std::min(first, n - first);
}

std::map<std::size_t, std::size_t> CycleFamily::class_counts() const {
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = min_cycle_len; 2 * i <= n; ++i)
    counts[i] = 0;
  for (std::size_t r = 0; r < two_cycle.size(); ++r)
    ++counts[class_of(r)];
  return counts;
}

CycleFamily enumerate_family(std::size_t n, std::size_t min_cycle_len) {
  check_min_len(min_cycle_len);
  if (n > kFamilyEnumerationLimit)
    throw ResourceLimitError("family enumeration is limited to n <= " + std::to_string(kFamilyEnumerationLimit),
                             kFamilyEnumerationLimit);
  if (n < kFamilyMinSize)
    throw std::invalid_argument("family enumeration needs n >= " + std::to_string(kFamilyMinSize));
  CycleFamily fam;
  fam.n = n;
  fam.min_cycle_len = min_cycle_len;

  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), 0);
  for_each_canonical_cycle(all, [&](const std::vector<Vertex>& c) {
    fam.one_cycle.push_back(encode_cycle_graph(CycleGraph{n, {c}}));
  });

  for (std::uint32_t mask = 1; mask < (1u << n); mask += 2) {  // vertex 0 in the first cycle
    const auto len = static_cast<std::size_t>(std::popcount(mask));
    if (len < min_cycle_len || n - len < min_cycle_len)
      continue;
    std::vector<Vertex> inside;
    std::vector<Vertex> outside;
    for (Vertex v = 0; v < n; ++v)
      ((mask >> v) & 1u ? inside : outside).push_back(v);
    for_each_canonical_cycle(inside, [&](const std::vector<Vertex>& a) {
      for_each_canonical_cycle(outside, [&](const std::vector<Vertex>& b) {
        fam.two_cycle.push_back(encode_cycle_graph(CycleGraph{n, {a, b}}));
      });
    });
  }
  std::sort(fam.one_cycle.begin(), fam.one_cycle.end());
  std::sort(fam.two_cycle.begin(), fam.two_cycle.end());
  return fam;
}

BccInstance family_instance(const CycleGraph& g, KnowledgeMode mode) {
  auto edges = g.edges();
  return BccInstance(g.n, mode, {}, edges);
}

FamilyCounts family_count_closed_forms(std::size_t n, std::size_t min_cycle_len) {
  check_min_len(min_cycle_len);
  if (n < 6)
    throw std::invalid_argument("closed forms need n >= 6");
  if (n > kClosedFormExactLimit)
    throw ResourceLimitError("exact closed forms are limited to n <= " + std::to_string(kClosedFormExactLimit),
                             kClosedFormExactLimit);
  FamilyCounts c;
  c.n = n;
  c.min_cycle_len = min_cycle_len;
  c.one_cycle = factorial(n - 1) / 2;
  c.two_cycle = 0;
  for (std::size_t i = min_cycle_len; 2 * i <= n; ++i) {
    mpz_class t = binomial(n, i) * factorial(i - 1) * factorial(n - i - 1) / 4;
    if (2 * i == n)
      t /= 2;
    c.classes[i] = t;
    c.two_cycle += t;
  }
  c.ratio = mpq_class(c.two_cycle, c.one_cycle);
  c.ratio.canonicalize();
  c.ratio_value = c.ratio.get_d();
  return c;
}

double family_ratio(std::size_t n, std::size_t min_cycle_len) {
  check_min_len(min_cycle_len);
  if (n < 6)
    throw std::invalid_argument("the family ratio needs n >= 6");
  long double sum = 0;
  const auto nn = static_cast<long double>(n);
  for (std::size_t i = min_cycle_len; 2 * i <= n; ++i) {
    const auto ii = static_cast<long double>(i);
    sum += 2 * i == n ? 1.0L / nn : nn / (2.0L * ii * (nn - ii));
  }
  return static_cast<double>(sum);
}

} // namespace bcclab
