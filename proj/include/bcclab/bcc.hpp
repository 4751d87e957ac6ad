#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace bcclab {

/// Internal vertex index, 0..n-1. Identifiers are separate (VertexId).
using Vertex = std::uint32_t;
using VertexId = std::uint64_t;
/// KT-0: 1..n-1. KT-1: the identifier of the vertex at the other end.
using Port = std::uint64_t;

enum class KnowledgeMode : std::uint8_t { KT0, KT1 };
std::string to_string(KnowledgeMode mode);
KnowledgeMode parse_knowledge_mode(std::string_view text);

/// One character of the broadcast alphabet. Silent is ⊥ and is a real character.
enum class Symbol : std::uint8_t { Zero = 0, One = 1, Silent = 2 };
char to_char(Symbol s);  // '0', '1', '_'
Symbol symbol_from_char(char c);

inline constexpr std::size_t kMaxBandwidth = 16;

/// The symbols one vertex broadcasts in one round (1..b of them), packed
/// base-3 into 32 bits so transcripts of large cliques stay compact.
class Payload {
public:
  constexpr Payload() = default;
  constexpr Payload(Symbol s) : bits_((1u << kLengthShift) | static_cast<std::uint32_t>(s)) {}  // NOLINT
  static Payload from_symbols(std::span<const Symbol> symbols);
  static Payload parse(std::string_view text);

  std::size_t size() const noexcept { return bits_ >> kLengthShift; }
  bool empty() const noexcept { return size() == 0; }
  Symbol operator[](std::size_t i) const;
  void push_back(Symbol s);
  std::string to_string() const;
  std::uint32_t raw() const noexcept { return bits_; }

  friend constexpr bool operator==(Payload a, Payload b) noexcept { return a.bits_ == b.bits_; }
  friend constexpr bool operator<(Payload a, Payload b) noexcept { return a.bits_ < b.bits_; }

private:
  static constexpr unsigned kLengthShift = 27;
  std::uint32_t bits_{0};
};

using Coins = std::vector<std::uint8_t>;  // public coin tape, one bit per entry

/// What a vertex knows before round 1.
///
/// KT-0: own id, port count, and which ports carry input edges. No foreign ids.
/// KT-1: additionally the full id roster; ports are the neighbors' ids.
struct VertexView {
  VertexId id{0};
  KnowledgeMode mode{KnowledgeMode::KT0};
  std::size_t port_count{0};
  std::vector<Port> input_ports;  // ascending
  std::shared_ptr<const std::vector<VertexId>> roster;  // KT-1 only, ascending
  std::shared_ptr<const Coins> coins;  // identical at every vertex

  /// k-th port in ascending order; received symbols are indexed the same way.
  Port port_at(std::size_t k) const;
  std::size_t index_of_port(Port p) const;
  std::size_t vertex_count() const noexcept { return port_count + 1; }
  bool has_input_port(Port p) const;

  friend bool operator==(const VertexView& a, const VertexView& b);
};

/// An n-vertex clique network with an input graph and per-vertex port tables.
///
/// Port tables are stored as a base rule plus exceptions. The base rule is the
/// canonical KT-0 assignment (port of v facing u = rank of u's id among the
/// other vertices) or the KT-1 law (port = id). Exceptions exist only in KT-0
/// and are kept normalized, so two instances with the same wiring compare equal.
class BccInstance {
public:
  using Edge = std::pair<Vertex, Vertex>;

  /// Canonical ports. ids defaults to 0..n-1 when empty.
  BccInstance(std::size_t n, KnowledgeMode mode, std::vector<VertexId> ids, std::span<const Edge> input_edges);

  /// KT-0 instance with explicit tables: port_of[v][u] for u != v (entry at v ignored).
  static BccInstance with_port_tables(KnowledgeMode mode, std::vector<VertexId> ids,
                                      std::span<const Edge> input_edges,
                                      const std::vector<std::vector<Port>>& port_of);

  std::size_t size() const noexcept { return ids_.size(); }
  KnowledgeMode mode() const noexcept { return mode_; }
  VertexId id(Vertex v) const { return ids_.at(v); }
  const std::vector<VertexId>& ids() const noexcept { return ids_; }
  std::optional<Vertex> vertex_with_id(VertexId id) const;
  VertexId max_id() const;

  bool has_input_edge(Vertex a, Vertex b) const;
  std::span<const Vertex> input_neighbors(Vertex v) const { return adjacency_.at(v); }
  /// Undirected input edges as (min, max) pairs, sorted.
  std::vector<Edge> input_edges() const;
  std::size_t input_edge_count() const;

  Port port_of(Vertex v, Vertex u) const;
  Vertex neighbor_at(Vertex v, Port p) const;
  /// Position of port p in v's ascending port list.
  std::size_t port_index(Vertex v, Port p) const;
  Port port_at_index(Vertex v, std::size_t k) const;
  /// True when no port exception is stored.
  bool has_canonical_ports() const noexcept { return port_exceptions_.empty(); }
  /// Vertices with at least one port exception.
  std::vector<Vertex> rewired_vertices() const;

  /// The local knowledge of v; coins are shared, not copied.
  VertexView view(Vertex v, std::shared_ptr<const Coins> coins = nullptr) const;

  /// Replaces input edges and port assignments at the given slots. Used by
  /// crossings. The slots must keep every port table a bijection.
  struct PortAssignment {
    Vertex vertex;
    Port port;
    Vertex far_end;
  };
  BccInstance rewired(std::span<const Edge> removed_edges, std::span<const Edge> added_edges,
                      std::span<const PortAssignment> assignments) const;

  friend bool operator==(const BccInstance& a, const BccInstance& b);

private:
  BccInstance() = default;
  Port canonical_port(Vertex v, Vertex u) const;
  Vertex canonical_neighbor(Vertex v, Port p) const;
  void index_ids();
  void set_edges(std::span<const Edge> edges);

  KnowledgeMode mode_{KnowledgeMode::KT0};
  std::vector<VertexId> ids_;
  std::vector<Vertex> by_id_;  // vertices sorted by id
  std::vector<std::uint32_t> rank_;  // position of each vertex in by_id_
  std::shared_ptr<const std::vector<VertexId>> sorted_ids_;
  std::vector<std::vector<Vertex>> adjacency_;  // sorted
  // (v, u) -> port and (v, port) -> u, only where they differ from the base rule.
  std::map<std::pair<Vertex, Vertex>, Port> port_exceptions_;
  std::map<std::pair<Vertex, Port>, Vertex> neighbor_exceptions_;
};

enum class Verdict : std::uint8_t { No = 0, Yes = 1 };
std::string to_string(Verdict v);

/// Per-vertex state machine. One instance per vertex, created from its view.
class VertexProgram {
public:
  virtual ~VertexProgram() = default;
  /// Payload for round `round` (1-based), 1..b symbols.
  virtual Payload broadcast(std::size_t round) = 0;
  /// Symbols heard in round `round`, indexed like VertexView::port_at.
  virtual void receive(std::size_t round, std::span<const Payload> by_port) = 0;
  virtual Verdict decide() const = 0;
  /// Optional output label (e.g. a component name).
  virtual std::optional<std::uint64_t> label() const { return std::nullopt; }
  /// Serialized internal state; equal snapshots mean equal states.
  virtual std::string snapshot() const = 0;
};

/// A deterministic algorithm: the same code instantiated at every vertex.
class Algorithm {
public:
  virtual ~Algorithm() = default;
  virtual std::string name() const = 0;
  /// Throws UnsupportedOperation when the view's mode is not supported.
  virtual std::unique_ptr<VertexProgram> instantiate(const VertexView& view) const = 0;
};

/// Who sent what, and what arrived on which port, per round.
class Transcript {
public:
  Transcript() = default;
  Transcript(std::size_t n, std::size_t rounds);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t rounds() const noexcept { return rounds_; }
  Payload sent(Vertex v, std::size_t round) const { return sent_[v * rounds_ + (round - 1)]; }
  std::span<const Payload> sent_sequence(Vertex v) const { return {sent_.data() + v * rounds_, rounds_}; }
  std::span<const Payload> received(Vertex v, std::size_t round) const {
    return {received_.data() + (v * rounds_ + (round - 1)) * stride(), stride()};
  }

  void set_sent(Vertex v, std::size_t round, Payload p) { sent_[v * rounds_ + (round - 1)] = p; }
  std::span<Payload> received_mut(Vertex v, std::size_t round) {
    return {received_.data() + (v * rounds_ + (round - 1)) * stride(), stride()};
  }

  /// Total symbols sent by all vertices.
  std::size_t symbols_sent() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

private:
  std::size_t stride() const noexcept { return n_ == 0 ? 0 : n_ - 1; }
  std::size_t n_{0};
  std::size_t rounds_{0};
  std::vector<Payload> sent_;
  std::vector<Payload> received_;
};

struct SimulationOptions {
  std::size_t bandwidth = 1;  // b: symbols per round
};

struct SimulationResult {
  std::vector<VertexView> views;
  Transcript transcript;
  std::vector<std::unique_ptr<VertexProgram>> programs;
  std::vector<Verdict> verdicts;
};

/// Synchronous execution for `rounds` rounds. Round-r broadcasts are delivered
/// to every other vertex on the port facing the sender before round r+1.
/// Throws ProtocolViolation if a payload is empty or longer than b.
SimulationResult simulate(const BccInstance& inst, const Algorithm& alg, std::size_t rounds,
                          const Coins& coins = {}, SimulationOptions options = {});

/// YES iff every vertex says YES. Throws std::invalid_argument on a missing verdict.
Verdict system_verdict(std::span<const std::optional<Verdict>> verdicts);
Verdict system_verdict(std::span<const Verdict> verdicts);

/// Error under the distribution that puts mass 1/2 uniformly on each family:
/// 1/2 * (yes instances judged NO) / |yes| + 1/2 * (no instances judged YES) / |no|.
mpq_class evaluate_error(const Algorithm& alg, std::size_t rounds, std::span<const BccInstance> yes_family,
                         std::span<const BccInstance> no_family, const Coins& coins = {});

/// Instance file: JSON object {"n", "mode": "KT0"|"KT1", "ids": [...],
/// "input_edges": [[u, v], ...], "port_of": [[...], ...] (optional; row v lists
/// the port facing each u, with null at u == v)}.
void write_instance(std::ostream& out, const BccInstance& inst, bool explicit_ports = false);
BccInstance read_instance(std::istream& in);
std::string instance_to_json(const BccInstance& inst, bool explicit_ports = false);
BccInstance instance_from_json(std::string_view text);

/// Transcript dump: per round, a "sent" line with one payload per vertex and one
/// line per vertex with the payloads received on its ports in ascending port order.
/// Symbols are written as 0, 1 and _ (for ⊥); multi-symbol payloads are joined.
void write_transcript(std::ostream& out, const BccInstance& inst, const Transcript& t);

} // namespace bcclab
