#include "bcclab/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace bcclab {

void BipartiteGraph::add_edge(std::size_t l, std::size_t r) {
  if (l >= adj_.size() || r >= right_)
    throw std::invalid_argument("bipartite edge out of range");
  auto& nb = adj_[l];
  auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(r));
  if (it == nb.end() || *it != r)
    nb.insert(it, static_cast<std::uint32_t>(r));
}

bool BipartiteGraph::has_edge(std::size_t l, std::size_t r) const {
  const auto& nb = adj_.at(l);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(r));
}

std::size_t BipartiteGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& nb : adj_)
    m += nb.size();
  return m;
}

std::size_t BipartiteGraph::neighborhood_size(std::span<const std::uint32_t> left_subset) const {
  std::vector<bool> hit(right_, false);
  std::size_t count = 0;
  for (auto l : left_subset)
    for (auto r : adj_.at(l))
      if (!hit[r]) {
        hit[r] = true;
        ++count;
      }
  return count;
}

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Hopcroft-Karp on left copies; copy c belongs to left vertex c / k.
class HopcroftKarp {
public:
  HopcroftKarp(const BipartiteGraph& g, std::size_t k)
      : g_(g), k_(k), copies_(g.left_size() * k), match_left_(copies_, kNone),
        match_right_(g.right_size(), kNone), dist_(copies_) {}

  std::size_t run() {
    std::size_t matched = 0;
    while (bfs())
      for (std::uint32_t c = 0; c < copies_; ++c)
        if (match_left_[c] == kNone && dfs(c))
          ++matched;
    return matched;
  }

  std::uint32_t partner(std::uint32_t copy) const { return match_left_[copy]; }
  std::uint32_t owner(std::uint32_t right) const { return match_right_[right]; }
  std::size_t copies() const { return copies_; }

private:
  std::span<const std::uint32_t> adj(std::uint32_t c) const { return g_.neighbors(c / k_); }

  bool bfs() {
    std::queue<std::uint32_t> q;
    bool found = false;
    for (std::uint32_t c = 0; c < copies_; ++c) {
      if (match_left_[c] == kNone) {
        dist_[c] = 0;
        q.push(c);
      } else {
        dist_[c] = kNone;
      }
    }
    while (!q.empty()) {
      auto c = q.front();
      q.pop();
      for (auto r : adj(c)) {
        auto next = match_right_[r];
        if (next == kNone)
          found = true;
        else if (dist_[next] == kNone) {
          dist_[next] = dist_[c] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool dfs(std::uint32_t c) {
    for (auto r : adj(c)) {
      auto next = match_right_[r];
      if (next == kNone || (dist_[next] == dist_[c] + 1 && dfs(next))) {
        match_left_[c] = r;
        match_right_[r] = c;
        return true;
      }
    }
    dist_[c] = kNone;
    return false;
  }

  const BipartiteGraph& g_;
  std::size_t k_;
  std::size_t copies_;
  std::vector<std::uint32_t> match_left_;
  std::vector<std::uint32_t> match_right_;
  std::vector<std::uint32_t> dist_;
};

} // namespace

KMatchingResult k_matching(const BipartiteGraph& g, std::size_t k) {
  KMatchingResult result;
  if (k == 0) {
    result.matching = KMatching{0, std::vector<std::vector<std::uint32_t>>(g.left_size())};
    return result;
  }
  HopcroftKarp hk(g, k);
  result.matched_copies = hk.run();
  if (result.matched_copies == hk.copies()) {
    KMatching m{k, std::vector<std::vector<std::uint32_t>>(g.left_size())};
    for (std::uint32_t c = 0; c < hk.copies(); ++c)
      m.nbr[c / k].push_back(hk.partner(c));
    for (auto& s : m.nbr)
      std::sort(s.begin(), s.end());
    result.matching = std::move(m);
    return result;
  }
  // Alternating reachability from unmatched copies.
  std::vector<bool> left_seen(hk.copies(), false);
  std::vector<bool> right_seen(g.right_size(), false);
  std::queue<std::uint32_t> q;
  for (std::uint32_t c = 0; c < hk.copies(); ++c)
    if (hk.partner(c) == kNone) {
      left_seen[c] = true;
      q.push(c);
    }
  while (!q.empty()) {
    auto c = q.front();
    q.pop();
    for (auto r : g.neighbors(c / k)) {
      if (right_seen[r])
        continue;
      right_seen[r] = true;
      auto next = hk.owner(r);
      if (next != kNone && !left_seen[next]) {
        left_seen[next] = true;
        q.push(next);
      }
    }
  }
  for (std::uint32_t l = 0; l < g.left_size(); ++l)
    if (left_seen[static_cast<std::size_t>(l) * k])
      result.violator.push_back(l);
  result.violator_neighborhood = g.neighborhood_size(result.violator);
  return result;
}

bool is_valid_k_matching(const BipartiteGraph& g, const KMatching& m) {
  if (m.nbr.size() != g.left_size())
    return false;
  std::vector<bool> used(g.right_size(), false);
  for (std::size_t l = 0; l < m.nbr.size(); ++l) {
    if (m.nbr[l].size() != m.k)
      return false;
    for (auto r : m.nbr[l]) {
      if (r >= g.right_size() || used[r] || !g.has_edge(l, r))
        return false;
      used[r] = true;
    }
  }
  return true;
}

HallResult hall_check(const BipartiteGraph& g, std::span<const std::uint32_t> left_subset, std::size_t k) {
  std::vector<std::uint32_t> s(left_subset.begin(), left_subset.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (auto l : s)
    if (l >= g.left_size())
      throw std::invalid_argument("subset element outside the left side");
  HallResult r;
  r.neighborhood = g.neighborhood_size(s);
  r.required = k * s.size();
  r.satisfied = r.neighborhood >= r.required;
  if (!r.satisfied)
    r.witness = std::move(s);
  return r;
}

} // namespace bcclab
