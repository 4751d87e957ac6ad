#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bcclab/bcc.hpp"
#include "bcclab/partition.hpp"

namespace bcclab {

enum class ReductionVariant { General, TwoRegular };
std::string to_string(ReductionVariant v);
ReductionVariant parse_reduction_variant(std::string_view text);  // "general" | "two-regular"

/// Graph G(P_A, P_B) on vertex roles a_i, l_i, r_i, b_i (i = 1..n) with ids
/// i, n+i, 2n+i, 3n+i. TwoRegular has only l and r.
///
/// General: rungs (l_i, r_i); a_j joined to every l_i with i in the j-th block
/// of P_A (blocks in canonical order), every a_j without a block joined to
/// l_n; the same for b and r with P_B. TwoRegular: rungs plus (l_i, l_j) for
/// each pair of P_A and (r_i, r_j) for each pair of P_B.
class ReductionGraph {
public:
  ReductionVariant variant() const noexcept { return variant_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t vertex_count() const noexcept { return variant_ == ReductionVariant::General ? 4 * n_ : 2 * n_; }
  const std::vector<BccInstance::Edge>& edges() const noexcept { return edges_; }

  /// Vertex indices for role members, i in 1..n. a and b throw for TwoRegular.
  Vertex a(std::size_t i) const;
  Vertex l(std::size_t i) const;
  Vertex r(std::size_t i) const;
  Vertex b(std::size_t i) const;
  VertexId id(Vertex v) const;
  std::vector<VertexId> ids() const;
  /// Alice hosts A and L, Bob hosts R and B; both ascending by id.
  std::vector<Vertex> alice_hosts() const;
  std::vector<Vertex> bob_hosts() const;

  BccInstance instance(KnowledgeMode mode = KnowledgeMode::KT1) const;

  friend ReductionGraph build_reduction(ReductionVariant, const SetPartition&, const SetPartition&);

private:
  ReductionVariant variant_{ReductionVariant::General};
  std::size_t n_{0};
  std::vector<BccInstance::Edge> edges_;  // (min, max), sorted
};

/// Throws std::invalid_argument on ground-size mismatch, or when TwoRegular
/// gets a partition that is not a perfect pairing.
ReductionGraph build_reduction(ReductionVariant variant, const SetPartition& p_a, const SetPartition& p_b);

/// Components of the graph (breadth-first search) restricted to l_1..l_n.
SetPartition components_partition(const ReductionGraph& g);
/// The same restricted to r_1..r_n.
SetPartition components_partition_right(const ReductionGraph& g);

bool verify_join_correspondence(const SetPartition& p_a, const SetPartition& p_b, ReductionVariant variant);

/// Structural facts about a TwoRegular graph.
struct CycleShape {
  bool two_regular{false};
  std::vector<std::size_t> cycle_lengths;  // ascending
  bool all_even_at_least_4{false};
};
CycleShape cycle_shape(const ReductionGraph& g);

/// Per-round messages, one symbol per hosted vertex in increasing id order.
struct TwoPartyTrace {
  ReductionVariant variant{ReductionVariant::General};
  std::size_t n{0};
  std::size_t rounds{0};
  std::size_t hosted_per_side{0};
  std::vector<std::vector<Symbol>> alice_to_bob;
  std::vector<std::vector<Symbol>> bob_to_alice;
  std::size_t alice_symbols{0};
  std::size_t bob_symbols{0};

  std::size_t total_symbols() const noexcept { return alice_symbols + bob_symbols; }
};

/// Trits packed 2 bits each (0, 1, and 2 for ⊥), symbol k in bits 2(k mod 4)
/// of byte k / 4, written as lowercase hex.
std::string pack_trits(const std::vector<Symbol>& symbols);
void write_trace(std::ostream& out, const TwoPartyTrace& trace);

enum class Party { Alice, Bob };

/// One side of the protocol. It sees only its own partition; hosted views come
/// from the id scheme, the fixed rungs and its own half of the edges.
class TwoPartyEndpoint {
public:
  TwoPartyEndpoint(Party party, ReductionVariant variant, const SetPartition& own_input, const Algorithm& alg,
                   const Coins& coins = {});

  std::size_t hosted_count() const noexcept { return hosted_.size(); }
  /// Hosted vertex ids, ascending.
  const std::vector<VertexId>& hosted_ids() const noexcept { return hosted_; }
  const VertexView& view(std::size_t k) const { return views_.at(k); }
  const VertexProgram& program(std::size_t k) const { return *programs_.at(k); }
  /// Symbols heard by hosted vertex k in round r (1-based), by port index.
  const std::vector<Payload>& heard(std::size_t k, std::size_t r) const { return heard_.at(k).at(r - 1); }

  /// This round's message. Throws ProtocolViolation on a payload that is not one symbol.
  std::vector<Symbol> emit(std::size_t round);
  /// Delivers the round to every hosted vertex given the other side's message.
  void absorb(std::size_t round, const std::vector<Symbol>& other);

private:
  Party party_;
  std::size_t n_;
  std::size_t total_;
  std::vector<VertexId> hosted_;
  std::vector<VertexView> views_;
  std::vector<std::unique_ptr<VertexProgram>> programs_;
  std::vector<std::vector<std::vector<Payload>>> heard_;
  std::vector<Symbol> last_emitted_;
};

struct TwoPartyResult {
  TwoPartyTrace trace;
  std::vector<Verdict> verdicts;  // by vertex index of the reduction graph
  Verdict system_verdict{Verdict::Yes};
  bool equivalent{false};
  std::optional<std::string> mismatch;
};

/// Runs both endpoints for t rounds and compares every hosted vertex (view,
/// heard symbols, state, verdict) with a monolithic KT-1 simulation.
TwoPartyResult two_party_simulate(const Algorithm& alg, const SetPartition& p_a, const SetPartition& p_b,
                                  ReductionVariant variant, std::size_t t, const Coins& coins = {});

} // namespace bcclab
