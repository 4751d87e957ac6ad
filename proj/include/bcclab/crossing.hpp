#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcclab/bcc.hpp"

namespace bcclab {

/// Input edge {v, u} read from v: p is v's port facing u, q is u's port facing v.
struct DirectedInputEdge {
  Vertex head{0};
  Vertex tail{0};
  Port head_port{0};
  Port tail_port{0};

  DirectedInputEdge reversed() const { return {tail, head, tail_port, head_port}; }
  friend bool operator==(const DirectedInputEdge&, const DirectedInputEdge&) = default;
};

/// Throws std::invalid_argument when {v, u} is not an input edge.
DirectedInputEdge directed_edge(const BccInstance& inst, Vertex v, Vertex u);

/// Four distinct endpoints, and neither (v1, u2) nor (v2, u1) is an input edge.
/// Throws std::invalid_argument if either edge does not belong to inst.
bool are_independent(const BccInstance& inst, const DirectedInputEdge& e1, const DirectedInputEdge& e2);

/// The edge and port changes made by a crossing.
struct CrossingDelta {
  std::array<BccInstance::Edge, 2> removed;
  std::array<BccInstance::Edge, 2> added;
  std::array<BccInstance::PortAssignment, 8> assignments;
};

/// Throws PreconditionViolation on dependent edges, UnsupportedOperation in KT-1.
CrossingDelta crossing_delta(const BccInstance& inst, const DirectedInputEdge& e1, const DirectedInputEdge& e2);

/// Replaces (v1,u1),(v2,u2) by (v1,u2),(v2,u1). The new edges take the old
/// input ports p1,q2 and p2,q1; the old pairs move to p1',q1' and p2',q2'.
BccInstance cross(const BccInstance& inst, const DirectedInputEdge& e1, const DirectedInputEdge& e2);

/// The two edges of cross(inst, e1, e2) that replaced e1 and e2, read from v1 and v2.
std::pair<DirectedInputEdge, DirectedInputEdge> crossed_edges(const BccInstance& crossed,
                                                              const DirectedInputEdge& e1,
                                                              const DirectedInputEdge& e2);

/// 2t symbols: the head's broadcasts in rounds 1..t, then the tail's.
struct EdgeLabel {
  std::vector<Symbol> symbols;

  std::string to_string() const;
  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
  friend auto operator<=>(const EdgeLabel& a, const EdgeLabel& b) { return a.symbols <=> b.symbols; }
};

/// Label from an existing transcript (single-symbol payloads).
EdgeLabel edge_label(const Transcript& transcript, std::size_t t, const DirectedInputEdge& e);
EdgeLabel edge_label(const BccInstance& inst, const Algorithm& alg, std::size_t t, const DirectedInputEdge& e,
                     const Coins& coins = {});

/// Directed input edges (both orientations) whose head broadcast x and tail
/// broadcast y in rounds 1..t. Throws std::invalid_argument if |x| or |y| != t.
std::vector<DirectedInputEdge> active_edges(const BccInstance& inst, const Algorithm& alg, std::size_t t,
                                            const std::vector<Symbol>& x, const std::vector<Symbol>& y,
                                            const Coins& coins = {});

/// First place two runs disagree. round 0 means the initial views differ.
struct StateDifference {
  Vertex vertex{0};
  std::size_t round{0};
  std::optional<Port> port;
  std::string what;
};

struct StateComparison {
  bool identical{true};
  std::optional<StateDifference> difference;
};

/// Full simulation of both instances for t rounds; compares every vertex's
/// view, received symbols, internal state and verdict.
StateComparison compare_states(const BccInstance& i1, const BccInstance& i2, const Algorithm& alg, std::size_t t,
                               const Coins& coins = {});
bool states_identical(const BccInstance& i1, const BccInstance& i2, const Algorithm& alg, std::size_t t,
                      const Coins& coins = {});

/// Decides indistinguishability against a fixed base instance from one run.
///
/// By induction on rounds, two instances with equal views give every vertex the
/// same state after t rounds exactly when the base run already delivers, on
/// every rewired port, the same symbols from the old far end as from the new
/// one. The check costs O(t) per rewired port instead of a full simulation.
/// A negative answer is conservative: the states may still coincide if the
/// algorithm ignores the differing symbols.
class IndistinguishabilityChecker {
public:
  IndistinguishabilityChecker(const BccInstance& base, const Algorithm& alg, std::size_t t, const Coins& coins = {});

  const BccInstance& base() const noexcept { return base_; }
  const Transcript& transcript() const noexcept { return run_.transcript; }
  std::size_t rounds() const noexcept { return t_; }

  /// Any instance over the same vertices, ids and mode.
  bool check(const BccInstance& other) const;
  /// cross(base, e1, e2) without building it.
  bool check_crossing(const DirectedInputEdge& e1, const DirectedInputEdge& e2) const;

private:
  bool same_sequence(Vertex a, Vertex b) const;

  const BccInstance& base_;
  std::size_t t_;
  SimulationResult run_;
};

/// Vertices of a single-cycle input graph in canonical order: start at the
/// smallest id, continue toward the neighbor with the smaller id. Throws
/// std::invalid_argument when the input graph is not one Hamiltonian cycle.
std::vector<Vertex> canonical_cycle(const BccInstance& inst);

enum class VerifyMode { Auto, Simulation, Checker };
std::string to_string(VerifyMode m);
VerifyMode parse_verify_mode(std::string_view text);

struct FoolingOptions {
  Coins coins;
  VerifyMode verify = VerifyMode::Auto;
  std::size_t simulation_limit = 64;  // Auto uses full simulation up to this n
};

/// Two canonically oriented cycle edges, by position in the canonical cycle:
/// edge i runs from cycle[i] to cycle[i + 1 mod n].
struct FoolingPair {
  std::uint32_t first{0};
  std::uint32_t second{0};
  std::uint32_t bucket{0};
  std::uint32_t split_first{0};   // cycle through the vertices after `first`
  std::uint32_t split_second{0};
  bool verified{false};
};

struct LabelBucket {
  EdgeLabel label;
  std::vector<std::uint32_t> edges;  // positions
};

struct FoolingReport {
  std::size_t n{0};
  std::size_t t{0};
  std::string algorithm;
  VerifyMode method{VerifyMode::Auto};
  std::vector<Vertex> cycle;
  std::vector<LabelBucket> buckets;  // ascending label
  std::vector<FoolingPair> pairs;    // by bucket, then positions
  std::size_t rejected{0};           // candidates that failed verification

  DirectedInputEdge edge(const BccInstance& inst, std::uint32_t position) const;
};

using FoolingVisitor = std::function<void(const FoolingPair&)>;

/// Buckets the canonically oriented cycle edges by label and tries every
/// independent pair inside a bucket; the crossings split the cycle in two.
/// A candidate is reported only after it passes verification. The visitor
/// overload streams pairs and leaves report.pairs empty.
FoolingReport find_fooling_pairs(const BccInstance& inst, const Algorithm& alg, std::size_t t,
                                 const FoolingOptions& options = {});
FoolingReport find_fooling_pairs(const BccInstance& inst, const Algorithm& alg, std::size_t t,
                                 const FoolingOptions& options, const FoolingVisitor& visit);

} // namespace bcclab
