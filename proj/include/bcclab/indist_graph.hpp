#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bcclab/bcc.hpp"
#include "bcclab/crossing.hpp"
#include "bcclab/cycle_family.hpp"
#include "bcclab/matching.hpp"

namespace bcclab {

/// One edge {I1, I2}: `ops` counts the crossing operations (unordered pairs of
/// active directed edges, a pair and its double reversal counted once) that
/// turn I1 into I2. The witness pair lives in family_instance(left).
struct IndistEdge {
  std::uint32_t left{0};
  std::uint32_t right{0};
  std::uint32_t ops{0};
  DirectedInputEdge witness_first;
  DirectedInputEdge witness_second;
  /// Active edges (in the canonical orientation of I1) that end up in the
  /// smaller of the two cycles; 0 if the canonical pair itself is not active.
  std::uint32_t active_split{0};
};

/// Bipartite graph between one-cycle (left) and two-cycle (right) members.
struct IndistGraph {
  std::size_t n{0};
  std::size_t t{0};
  std::vector<Symbol> x;
  std::vector<Symbol> y;
  std::string algorithm;
  std::size_t left_size{0};
  std::size_t right_size{0};
  std::vector<IndistEdge> edges;  // sorted by (left, right)
  std::vector<std::uint32_t> left_active;  // canonical-orientation active edges per I1
  std::vector<std::uint32_t> left_ops;
  std::vector<std::uint32_t> right_ops;

  BipartiteGraph to_bipartite() const;
  std::vector<std::uint32_t> left_degrees() const;
  /// Counted from the right side's own adjacency lists.
  std::vector<std::uint32_t> right_degrees() const;
};

/// Every left member is simulated once as a canonical-port KT-0 instance.
/// Throws std::invalid_argument if |x| or |y| != t, InternalConsistencyError if
/// a crossing lands on a two-cycle graph missing from the family.
IndistGraph build_indist_graph(const CycleFamily& family, const Algorithm& alg, std::size_t t,
                               const std::vector<Symbol>& x, const std::vector<Symbol>& y, const Coins& coins = {});

struct ClassStats {
  std::size_t members{0};
  std::size_t ops{0};
  std::map<std::size_t, std::size_t> ops_per_member;  // ops -> member count
};

struct DegreeStats {
  std::map<std::size_t, std::size_t> left_degree_histogram;
  std::map<std::size_t, std::size_t> right_degree_histogram;
  std::map<std::size_t, std::size_t> left_ops_histogram;
  std::map<std::size_t, std::size_t> left_ops_into_class;  // class i -> ops summed over the left side
  std::map<std::size_t, ClassStats> classes;
  std::size_t left_degree_sum{0};
  std::size_t right_degree_sum{0};
  std::size_t left_ops_sum{0};
  std::size_t right_ops_sum{0};
  bool handshake{false};
  /// For each I1 with d active edges and each 3 <= i <= d/2: the number of
  /// neighbors reached by a canonical active pair whose split is (i, d-i),
  /// compared with d/2. Reported, not asserted.
  std::size_t floor_checks{0};
  std::size_t floor_shortfalls{0};
  double floor_min_ratio{0};
  /// Class bound |T_i| <= |V1| n / (i (n-i)) for every class.
  bool class_bound_holds{true};
};

DegreeStats degree_stats(const IndistGraph& g, const CycleFamily& family);

/// Structured-text dump: one line per edge, keyed by canonical cycle strings.
void write_indist_graph(std::ostream& out, const IndistGraph& g, const CycleFamily& family);

} // namespace bcclab
