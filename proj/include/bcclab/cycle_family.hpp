#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bcclab/bcc.hpp"

namespace bcclab {

constexpr std::size_t kFamilyMinSize = 5;
constexpr std::size_t kFamilyEnumerationLimit = 11;
constexpr std::size_t kClosedFormExactLimit = 5000;

/// Input graph made of disjoint cycles on vertices 0..n-1. Each cycle starts at
/// its smallest vertex and continues toward the smaller of its two neighbors;
/// cycles are ordered by their first vertex. This is the lexicographically
/// smallest rotation and reflection.
struct CycleGraph {
  std::size_t n{0};
  std::vector<std::vector<Vertex>> cycles;

  std::size_t smaller_length() const;
  std::vector<BccInstance::Edge> edges() const;
  std::string to_string() const;  // "(0 1 2)(3 4 5)"
  friend bool operator==(const CycleGraph&, const CycleGraph&) = default;
};

/// Rotates and reflects one cycle into canonical order.
std::vector<Vertex> canonical_cycle_order(std::span<const Vertex> cycle);

/// Decomposes a 2-regular graph into canonical cycles; nullopt if some vertex
/// does not have degree 2.
std::optional<CycleGraph> cycle_graph_from_edges(std::size_t n, std::span<const BccInstance::Edge> edges);

/// 4 bits for the length of the first cycle, then 4 bits per vertex. n <= 11.
using FamilyKey = std::uint64_t;
FamilyKey encode_cycle_graph(const CycleGraph& g);
CycleGraph decode_cycle_graph(FamilyKey key, std::size_t n);

/// One-cycle and two-cycle input graphs on n labeled vertices, both cycles of
/// length at least min_cycle_len.
struct CycleFamily {
  std::size_t n{0};
  std::size_t min_cycle_len{3};
  std::vector<FamilyKey> one_cycle;  // ascending
  std::vector<FamilyKey> two_cycle;  // ascending

  std::optional<std::size_t> index_one(FamilyKey key) const;
  std::optional<std::size_t> index_two(FamilyKey key) const;
  CycleGraph left(std::size_t i) const { return decode_cycle_graph(one_cycle.at(i), n); }
  CycleGraph right(std::size_t i) const { return decode_cycle_graph(two_cycle.at(i), n); }
  /// Smaller cycle length of a two-cycle member.
  std::size_t class_of(std::size_t right_index) const;
  /// |T_i| keyed by i.
  std::map<std::size_t, std::size_t> class_counts() const;
};

/// Exhaustive enumeration for 5 <= n <= 11 and min_cycle_len in {3, 4}.
/// Throws ResourceLimitError above the limit, std::invalid_argument otherwise.
CycleFamily enumerate_family(std::size_t n, std::size_t min_cycle_len = 3);

/// Canonical-port instance with ids 0..n-1.
BccInstance family_instance(const CycleGraph& g, KnowledgeMode mode = KnowledgeMode::KT0);

struct FamilyCounts {
  std::size_t n{0};
  std::size_t min_cycle_len{3};
  mpz_class one_cycle;
  std::map<std::size_t, mpz_class> classes;
  mpz_class two_cycle;
  mpq_class ratio;
  double ratio_value{0};
};

/// |V1| = (n-1)!/2 and |T_i| = C(n,i) (i-1)!/2 (n-i-1)!/2, halved at i = n/2.
/// Exact for 6 <= n <= kClosedFormExactLimit; throws ResourceLimitError above.
FamilyCounts family_count_closed_forms(std::size_t n, std::size_t min_cycle_len = 3);

/// |V2| / |V1| = sum over classes of n / (2 i (n-i)), with 1/n for i = n/2.
/// Floating point; any n >= 6.
double family_ratio(std::size_t n, std::size_t min_cycle_len = 3);

} // namespace bcclab
