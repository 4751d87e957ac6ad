#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bcclab {

/// Bipartite graph with left vertices 0..left-1 and right vertices 0..right-1.
class BipartiteGraph {
public:
  BipartiteGraph(std::size_t left, std::size_t right) : right_(right), adj_(left) {}

  std::size_t left_size() const noexcept { return adj_.size(); }
  std::size_t right_size() const noexcept { return right_; }
  /// Duplicate edges are ignored.
  void add_edge(std::size_t l, std::size_t r);
  std::span<const std::uint32_t> neighbors(std::size_t l) const { return adj_.at(l); }
  bool has_edge(std::size_t l, std::size_t r) const;
  std::size_t edge_count() const;

  /// |N(S)|.
  std::size_t neighborhood_size(std::span<const std::uint32_t> left_subset) const;

private:
  std::size_t right_;
  std::vector<std::vector<std::uint32_t>> adj_;  // sorted
};

/// nbr[l] is a k-subset of the right side; the subsets are pairwise disjoint.
struct KMatching {
  std::size_t k{0};
  std::vector<std::vector<std::uint32_t>> nbr;
};

struct KMatchingResult {
  std::optional<KMatching> matching;
  /// Left set S with |N(S)| < k|S| when no saturating k-matching exists.
  std::vector<std::uint32_t> violator;
  std::size_t violator_neighborhood{0};
  std::size_t matched_copies{0};
};

/// Blows every left vertex up into k copies and runs Hopcroft-Karp. When some
/// copy stays unmatched, the left vertices reachable from unmatched copies by
/// alternating paths form a Hall violator.
KMatchingResult k_matching(const BipartiteGraph& g, std::size_t k);

/// True if m is a valid k-matching of every left vertex of g.
bool is_valid_k_matching(const BipartiteGraph& g, const KMatching& m);

struct HallResult {
  bool satisfied{true};
  std::size_t neighborhood{0};
  std::size_t required{0};
  std::vector<std::uint32_t> witness;  // S itself when violated
};

/// Compares |N(S)| with k|S| for one subset.
HallResult hall_check(const BipartiteGraph& g, std::span<const std::uint32_t> left_subset, std::size_t k);

} // namespace bcclab
