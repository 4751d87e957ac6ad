#include "bcclab/reduction.hpp"

#include <algorithm>
#include <iomanip>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "bcclab/errors.hpp"

namespace bcclab {

std::string to_string(ReductionVariant v) {
  return v == ReductionVariant::General ? "general" : "two-regular";
}

ReductionVariant parse_reduction_variant(std::string_view text) {
  if (text == "general")
    return ReductionVariant::General;
  if (text == "two-regular")
    return ReductionVariant::TwoRegular;
  throw std::invalid_argument("unknown reduction variant '" + std::string(text) + "'");
}

namespace {

void check_index(std::size_t i, std::size_t n) {
  if (i < 1 || i > n)
    throw std::invalid_argument("role index " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

void require_pairing(const SetPartition& p) {
  if (!p.is_pairing())
    throw std::invalid_argument("the two-regular reduction needs perfect pairings, got " + p.format());
}

} // namespace

Vertex ReductionGraph::a(std::size_t i) const {
  check_index(i, n_);
  if (variant_ == ReductionVariant::TwoRegular)
    throw std::invalid_argument("the two-regular graph has no A vertices");
  return static_cast<Vertex>(i - 1);
}

Vertex ReductionGraph::l(std::size_t i) const {
  check_index(i, n_);
  return static_cast<Vertex>(variant_ == ReductionVariant::General ? n_ + i - 1 : i - 1);
}

Vertex ReductionGraph::r(std::size_t i) const {
  check_index(i, n_);
  return static_cast<Vertex>(variant_ == ReductionVariant::General ? 2 * n_ + i - 1 : n_ + i - 1);
}

Vertex ReductionGraph::b(std::size_t i) const {
  check_index(i, n_);
  if (variant_ == ReductionVariant::TwoRegular)
    throw std::invalid_argument("the two-regular graph has no B vertices");
  return static_cast<Vertex>(3 * n_ + i - 1);
}

VertexId ReductionGraph::id(Vertex v) const {
  if (v >= vertex_count())
    throw std::invalid_argument("vertex outside the reduction graph");
  return variant_ == ReductionVariant::General ? v + 1 : v + n_ + 1;
}

std::vector<VertexId> ReductionGraph::ids() const {
  std::vector<VertexId> out(vertex_count());
  for (Vertex v = 0; v < out.size(); ++v)
    out[v] = id(v);
  return out;
}

std::vector<Vertex> ReductionGraph::alice_hosts() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < vertex_count() / 2; ++v)
    out.push_back(v);
  return out;
}

std::vector<Vertex> ReductionGraph::bob_hosts() const {
  std::vector<Vertex> out;
  for (auto v = static_cast<Vertex>(vertex_count() / 2); v < vertex_count(); ++v)
    out.push_back(v);
  return out;
}

BccInstance ReductionGraph::instance(KnowledgeMode mode) const {
  return BccInstance(vertex_count(), mode, ids(), edges_);
}

ReductionGraph build_reduction(ReductionVariant variant, const SetPartition& p_a, const SetPartition& p_b) {
  if (p_a.ground_size() != p_b.ground_size())
    throw std::invalid_argument("partitions have different ground sizes");
  ReductionGraph g;
  g.variant_ = variant;
  g.n_ = p_a.ground_size();
  const auto n = g.n_;
  auto add = [&](Vertex x, Vertex y) { g.edges_.emplace_back(std::min(x, y), std::max(x, y)); };
  for (std::size_t i = 1; i <= n; ++i)
    add(g.l(i), g.r(i));
  if (variant == ReductionVariant::TwoRegular) {
    require_pairing(p_a);
    require_pairing(p_b);
    for (const auto& blk : p_a.blocks())
      add(g.l(blk[0]), g.l(blk[1]));
    for (const auto& blk : p_b.blocks())
      add(g.r(blk[0]), g.r(blk[1]));
  } else {
    auto attach = [&](const SetPartition& p, auto hub, auto side) {
      const auto& blocks = p.blocks();
      for (std::size_t j = 1; j <= n; ++j) {
        if (j <= blocks.size())
          for (auto e : blocks[j - 1])
            add(hub(j), side(e));
        else
          add(hub(j), side(n));
      }
    };
    attach(p_a, [&](std::size_t j) { return g.a(j); }, [&](std::size_t i) { return g.l(i); });
    attach(p_b, [&](std::size_t j) { return g.b(j); }, [&](std::size_t i) { return g.r(i); });
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  return g;
}

namespace {

std::vector<std::uint64_t> component_labels(const ReductionGraph& g) {
  const auto count = g.vertex_count();
  std::vector<std::vector<Vertex>> adj(count);
  for (auto [x, y] : g.edges()) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  constexpr auto kUnset = ~std::uint64_t{0};
  std::vector<std::uint64_t> comp(count, kUnset);
  std::uint64_t next = 0;
  for (Vertex s = 0; s < count; ++s) {
    if (comp[s] != kUnset)
      continue;
    comp[s] = next;
    std::queue<Vertex> q;
    q.push(s);
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (auto u : adj[v])
        if (comp[u] == kUnset) {
          comp[u] = next;
          q.push(u);
        }
    }
    ++next;
  }
  return comp;
}

} // namespace

SetPartition components_partition(const ReductionGraph& g) {
  auto comp = component_labels(g);
  std::vector<std::uint64_t> labels;
  for (std::size_t i = 1; i <= g.n(); ++i)
    labels.push_back(comp[g.l(i)]);
  return partition_from_labels(labels);
}

SetPartition components_partition_right(const ReductionGraph& g) {
  auto comp = component_labels(g);
  std::vector<std::uint64_t> labels;
  for (std::size_t i = 1; i <= g.n(); ++i)
    labels.push_back(comp[g.r(i)]);
  return partition_from_labels(labels);
}

bool verify_join_correspondence(const SetPartition& p_a, const SetPartition& p_b, ReductionVariant variant) {
  auto g = build_reduction(variant, p_a, p_b);
  auto expected = join(p_a, p_b);
  return components_partition(g) == expected && components_partition_right(g) == expected;
}

CycleShape cycle_shape(const ReductionGraph& g) {
  CycleShape shape;
  const auto count = g.vertex_count();
  std::vector<std::size_t> degree(count, 0);
  for (auto [x, y] : g.edges()) {
    ++degree[x];
    ++degree[y];
  }
  shape.two_regular = std::all_of(degree.begin(), degree.end(), [](std::size_t d) { return d == 2; });
  auto comp = component_labels(g);
  std::vector<std::size_t> sizes;
  for (auto c : comp) {
    if (c >= sizes.size())
      sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  std::sort(sizes.begin(), sizes.end());
  shape.cycle_lengths = sizes;
  shape.all_even_at_least_4 =
      shape.two_regular && std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s >= 4 && s % 2 == 0; });
  return shape;
}

std::string pack_trits(const std::vector<Symbol>& symbols) {
  std::vector<std::uint8_t> bytes((symbols.size() + 3) / 4, 0);
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    std::uint8_t code = symbols[k] == Symbol::Zero ? 0 : symbols[k] == Symbol::One ? 1 : 2;
    bytes[k / 4] = static_cast<std::uint8_t>(bytes[k / 4] | (code << (2 * (k % 4))));
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (auto b : bytes)
    out << std::setw(2) << static_cast<unsigned>(b);
  return out.str();
}

void write_trace(std::ostream& out, const TwoPartyTrace& trace) {
  out << "# two-party variant=" << to_string(trace.variant) << " n=" << trace.n << " rounds=" << trace.rounds
      << " hosted_per_side=" << trace.hosted_per_side << '\n';
  for (std::size_t r = 0; r < trace.rounds; ++r)
    out << "round " << (r + 1) << " alice " << pack_trits(trace.alice_to_bob[r]) << " bob "
        << pack_trits(trace.bob_to_alice[r]) << '\n';
  out << "symbols alice=" << trace.alice_symbols << " bob=" << trace.bob_symbols
      << " total=" << trace.total_symbols() << '\n';
}

TwoPartyEndpoint::TwoPartyEndpoint(Party party, ReductionVariant variant, const SetPartition& own_input,
                                   const Algorithm& alg, const Coins& coins)
    : party_(party), n_(own_input.ground_size()) {
  const auto n = n_;
  const bool general = variant == ReductionVariant::General;
  if (!general)
    require_pairing(own_input);
  total_ = general ? 4 * n : 2 * n;
  const VertexId first_id = general ? 1 : n + 1;
  auto roster = std::make_shared<std::vector<VertexId>>();
  for (VertexId id = first_id; id < first_id + total_; ++id)
    roster->push_back(id);
  auto tape = std::make_shared<const Coins>(coins);

  // Ids by role: hub j is a_j / b_j, side i is l_i / r_i, across i is r_i / l_i.
  const bool alice = party == Party::Alice;
  auto hub_id = [&](std::size_t j) -> VertexId { return alice ? j : 3 * n + j; };
  auto side_id = [&](std::size_t i) -> VertexId { return alice ? n + i : 2 * n + i; };
  auto across_id = [&](std::size_t i) -> VertexId { return alice ? 2 * n + i : n + i; };

  std::vector<std::pair<VertexId, std::vector<VertexId>>> hosted;
  const auto& blocks = own_input.blocks();
  if (general) {
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<VertexId> nb;
      if (j <= blocks.size())
        for (auto e : blocks[j - 1])
          nb.push_back(side_id(e));
      else
        nb.push_back(side_id(n));
      hosted.emplace_back(hub_id(j), std::move(nb));
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<VertexId> nb{across_id(i)};
    const auto blk = own_input.block_of(static_cast<Element>(i));
    if (general) {
      nb.push_back(hub_id(blk + 1));
      if (i == n)
        for (std::size_t j = blocks.size() + 1; j <= n; ++j)
          nb.push_back(hub_id(j));
    } else {
      for (auto e : blocks[blk])
        if (e != i)
          nb.push_back(side_id(e));
    }
    hosted.emplace_back(side_id(i), std::move(nb));
  }
  std::sort(hosted.begin(), hosted.end());

  for (auto& [id, nb] : hosted) {
    VertexView v;
    v.id = id;
    v.mode = KnowledgeMode::KT1;
    v.port_count = total_ - 1;
    std::sort(nb.begin(), nb.end());
    v.input_ports = nb;
    v.roster = roster;
    v.coins = tape;
    hosted_.push_back(id);
    programs_.push_back(alg.instantiate(v));
    views_.push_back(std::move(v));
  }
  heard_.resize(hosted_.size());
}

std::vector<Symbol> TwoPartyEndpoint::emit(std::size_t round) {
  std::vector<Symbol> msg;
  msg.reserve(hosted_.size());
  for (std::size_t k = 0; k < hosted_.size(); ++k) {
    auto p = programs_[k]->broadcast(round);
    if (p.size() != 1)
      throw ProtocolViolation("hosted vertex broadcast " + std::to_string(p.size()) + " symbols", hosted_[k], round);
    msg.push_back(p[0]);
  }
  last_emitted_ = msg;
  return msg;
}

void TwoPartyEndpoint::absorb(std::size_t round, const std::vector<Symbol>& other) {
  if (other.size() != hosted_.size() || last_emitted_.size() != hosted_.size())
    throw std::invalid_argument("round messages do not line up");
  // Alice's ids all precede Bob's.
  std::vector<Payload> all;
  all.reserve(total_);
  const auto& first = party_ == Party::Alice ? last_emitted_ : other;
  const auto& second = party_ == Party::Alice ? other : last_emitted_;
  for (auto s : first)
    all.emplace_back(s);
  for (auto s : second)
    all.emplace_back(s);
  const std::size_t offset = party_ == Party::Alice ? 0 : hosted_.size();
  std::vector<Payload> by_port(total_ - 1);
  for (std::size_t k = 0; k < hosted_.size(); ++k) {
    const auto self = offset + k;
    for (std::size_t j = 0, p = 0; j < total_; ++j)
      if (j != self)
        by_port[p++] = all[j];
    programs_[k]->receive(round, by_port);
    heard_[k].push_back(by_port);
  }
}

TwoPartyResult two_party_simulate(const Algorithm& alg, const SetPartition& p_a, const SetPartition& p_b,
                                  ReductionVariant variant, std::size_t t, const Coins& coins) {
  auto graph = build_reduction(variant, p_a, p_b);
  TwoPartyEndpoint alice(Party::Alice, variant, p_a, alg, coins);
  TwoPartyEndpoint bob(Party::Bob, variant, p_b, alg, coins);

  TwoPartyResult result;
  auto& trace = result.trace;
  trace.variant = variant;
  trace.n = p_a.ground_size();
  trace.rounds = t;
  trace.hosted_per_side = alice.hosted_count();
  for (std::size_t r = 1; r <= t; ++r) {
    auto ma = alice.emit(r);
    auto mb = bob.emit(r);
    alice.absorb(r, mb);
    bob.absorb(r, ma);
    trace.alice_symbols += ma.size();
    trace.bob_symbols += mb.size();
    trace.alice_to_bob.push_back(std::move(ma));
    trace.bob_to_alice.push_back(std::move(mb));
  }

  const auto inst = graph.instance(KnowledgeMode::KT1);
  auto mono = simulate(inst, alg, t, coins);
  result.verdicts.assign(graph.vertex_count(), Verdict::Yes);
  result.equivalent = true;
  auto fail = [&](const std::string& what) {
    if (result.equivalent)
      result.mismatch = what;
    result.equivalent = false;
  };
  for (const auto* side : {&alice, &bob}) {
    for (std::size_t k = 0; k < side->hosted_count(); ++k) {
      const auto id = side->hosted_ids()[k];
      auto v = inst.vertex_with_id(id);
      if (!v) {
        fail("hosted id " + std::to_string(id) + " missing from the graph");
        continue;
      }
      const auto tag = "vertex id " + std::to_string(id);
      result.verdicts[*v] = side->program(k).decide();
      if (!(side->view(k) == mono.views[*v]))
        fail(tag + ": initial view differs");
      for (std::size_t r = 1; r <= t; ++r) {
        auto expected = mono.transcript.received(*v, r);
        const auto& got = side->heard(k, r);
        if (!std::equal(got.begin(), got.end(), expected.begin(), expected.end()))
          fail(tag + ": round " + std::to_string(r) + " receptions differ");
        const auto& msg = side == &alice ? trace.alice_to_bob[r - 1] : trace.bob_to_alice[r - 1];
        if (!(Payload(msg[k]) == mono.transcript.sent(*v, r)))
          fail(tag + ": round " + std::to_string(r) + " broadcast differs");
      }
      if (side->program(k).snapshot() != mono.programs[*v]->snapshot())
        fail(tag + ": final state differs");
      if (result.verdicts[*v] != mono.verdicts[*v])
        fail(tag + ": verdict differs");
    }
  }
  result.system_verdict = system_verdict(std::span<const Verdict>(result.verdicts));
  return result;
}

} // namespace bcclab
