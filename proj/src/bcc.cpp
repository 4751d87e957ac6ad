#include "bcclab/bcc.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bcclab/errors.hpp"

namespace bcclab {

std::string to_string(KnowledgeMode mode) { return mode == KnowledgeMode::KT0 ? "KT0" : "KT1"; }

KnowledgeMode parse_knowledge_mode(std::string_view text) {
  if (text == "KT0" || text == "kt0" || text == "KT-0")
    return KnowledgeMode::KT0;
  if (text == "KT1" || text == "kt1" || text == "KT-1")
    return KnowledgeMode::KT1;
  throw std::invalid_argument("unknown knowledge mode '" + std::string(text) + "'");
}

char to_char(Symbol s) {
  switch (s) {
  case Symbol::Zero:
    return '0';
  case Symbol::One:
    return '1';
  case Symbol::Silent:
    return '_';
  }
  return '?';
}

Symbol symbol_from_char(char c) {
  switch (c) {
  case '0':
    return Symbol::Zero;
  case '1':
    return Symbol::One;
  case '_':
    return Symbol::Silent;
  default:
    throw std::invalid_argument(std::string("not a symbol: '") + c + "'");
  }
}

std::string to_string(Verdict v) { return v == Verdict::Yes ? "YES" : "NO"; }

// ---------------------------------------------------------------------------
// Payload

namespace {

constexpr std::uint32_t kPow3[kMaxBandwidth + 1] = {
    1u,       3u,        9u,        27u,       81u,        243u,       729u,        2187u,      6561u,
    19683u,   59049u,    177147u,   531441u,   1594323u,   4782969u,   14348907u,   43046721u};

} // namespace

Payload Payload::from_symbols(std::span<const Symbol> symbols) {
  Payload p;
  for (auto s : symbols)
    p.push_back(s);
  return p;
}

Payload Payload::parse(std::string_view text) {
  Payload p;
  for (char c : text)
    p.push_back(symbol_from_char(c));
  return p;
}

Symbol Payload::operator[](std::size_t i) const {
  if (i >= size())
    throw std::out_of_range("payload index");
  std::uint32_t code = bits_ & ((1u << kLengthShift) - 1);
  return static_cast<Symbol>((code / kPow3[i]) % 3);
}

void Payload::push_back(Symbol s) {
  const auto len = size();
  if (len == kMaxBandwidth)
    throw std::length_error("payload longer than " + std::to_string(kMaxBandwidth) + " symbols");
  std::uint32_t code = bits_ & ((1u << kLengthShift) - 1);
  code += static_cast<std::uint32_t>(s) * kPow3[len];
  bits_ = (static_cast<std::uint32_t>(len + 1) << kLengthShift) | code;
}

std::string Payload::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < size(); ++i)
    out += to_char((*this)[i]);
  return out;
}

// ---------------------------------------------------------------------------
// VertexView

Port VertexView::port_at(std::size_t k) const {
  if (k >= port_count)
    throw std::out_of_range("port index " + std::to_string(k));
  if (mode == KnowledgeMode::KT0)
    return k + 1;
  auto own = static_cast<std::size_t>(std::lower_bound(roster->begin(), roster->end(), id) - roster->begin());
  return (*roster)[k < own ? k : k + 1];
}

std::size_t VertexView::index_of_port(Port p) const {
  if (mode == KnowledgeMode::KT0) {
    if (p == 0 || p > port_count)
      throw std::invalid_argument("no port " + std::to_string(p));
    return p - 1;
  }
  auto it = std::lower_bound(roster->begin(), roster->end(), p);
  if (it == roster->end() || *it != p || p == id)
    throw std::invalid_argument("no port " + std::to_string(p));
  auto pos = static_cast<std::size_t>(it - roster->begin());
  return p > id ? pos - 1 : pos;
}

bool VertexView::has_input_port(Port p) const {
  return std::binary_search(input_ports.begin(), input_ports.end(), p);
}

bool operator==(const VertexView& a, const VertexView& b) {
  auto same_ptr = [](const auto& x, const auto& y) {
    if (x == y)
      return true;
    if (!x || !y)
      return (!x || x->empty()) && (!y || y->empty());
    return *x == *y;
  };
  return a.id == b.id && a.mode == b.mode && a.port_count == b.port_count && a.input_ports == b.input_ports &&
         same_ptr(a.roster, b.roster) && same_ptr(a.coins, b.coins);
}

// ---------------------------------------------------------------------------
// BccInstance

BccInstance::BccInstance(std::size_t n, KnowledgeMode mode, std::vector<VertexId> ids,
                         std::span<const Edge> input_edges)
    : mode_(mode), ids_(std::move(ids)) {
  if (n == 0)
    throw std::invalid_argument("instance needs at least one vertex");
  if (ids_.empty()) {
    ids_.resize(n);
    std::iota(ids_.begin(), ids_.end(), VertexId{0});
  }
  if (ids_.size() != n)
    throw std::invalid_argument("id list has " + std::to_string(ids_.size()) + " entries for n=" +
                                std::to_string(n));
  index_ids();
  set_edges(input_edges);
}

void BccInstance::index_ids() {
  const auto n = ids_.size();
  by_id_.resize(n);
  std::iota(by_id_.begin(), by_id_.end(), Vertex{0});
  std::sort(by_id_.begin(), by_id_.end(), [&](Vertex a, Vertex b) { return ids_[a] < ids_[b]; });
  rank_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && ids_[by_id_[i]] == ids_[by_id_[i - 1]])
      throw std::invalid_argument("duplicate vertex id " + std::to_string(ids_[by_id_[i]]));
    rank_[by_id_[i]] = static_cast<std::uint32_t>(i);
  }
  auto sorted = std::make_shared<std::vector<VertexId>>(ids_);
  std::sort(sorted->begin(), sorted->end());
  sorted_ids_ = std::move(sorted);
}

void BccInstance::set_edges(std::span<const Edge> edges) {
  const auto n = ids_.size();
  adjacency_.assign(n, {});
  for (auto [a, b] : edges) {
    if (a >= n || b >= n)
      throw std::invalid_argument("input edge endpoint out of range");
    if (a == b)
      throw std::invalid_argument("input edge is a self loop at vertex " + std::to_string(a));
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
      throw std::invalid_argument("duplicate input edge");
  }
}

BccInstance BccInstance::with_port_tables(KnowledgeMode mode, std::vector<VertexId> ids,
                                          std::span<const Edge> input_edges,
                                          const std::vector<std::vector<Port>>& port_of) {
  const auto n = ids.empty() ? port_of.size() : ids.size();
  BccInstance inst(n, mode, std::move(ids), input_edges);
  if (port_of.size() != n)
    throw std::invalid_argument("port table has " + std::to_string(port_of.size()) + " rows for n=" +
                                std::to_string(n));
  for (Vertex v = 0; v < n; ++v) {
    const auto& row = port_of[v];
    if (row.size() != n)
      throw std::invalid_argument("port table row " + std::to_string(v) + " has wrong length");
    std::set<Port> used;
    for (Vertex u = 0; u < n; ++u) {
      if (u == v)
        continue;
      Port p = row[u];
      if (mode == KnowledgeMode::KT1) {
        if (p != inst.ids_[u])
          throw std::invalid_argument("KT1 port law violated at vertex " + std::to_string(v));
        continue;
      }
      if (p == 0 || p >= n)
        throw std::invalid_argument("KT0 port " + std::to_string(p) + " out of range 1.." + std::to_string(n - 1));
      if (!used.insert(p).second)
        throw std::invalid_argument("port " + std::to_string(p) + " used twice at vertex " + std::to_string(v));
      if (p != inst.canonical_port(v, u)) {
        inst.port_exceptions_[{v, u}] = p;
        inst.neighbor_exceptions_[{v, p}] = u;
      }
    }
  }
  return inst;
}

std::optional<Vertex> BccInstance::vertex_with_id(VertexId id) const {
  auto it = std::lower_bound(by_id_.begin(), by_id_.end(), id, [&](Vertex v, VertexId x) { return ids_[v] < x; });
  if (it == by_id_.end() || ids_[*it] != id)
    return std::nullopt;
  return *it;
}

VertexId BccInstance::max_id() const { return ids_[by_id_.back()]; }

bool BccInstance::has_input_edge(Vertex a, Vertex b) const {
  const auto& adj = adjacency_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<BccInstance::Edge> BccInstance::input_edges() const {
  std::vector<Edge> out;
  for (Vertex v = 0; v < adjacency_.size(); ++v)
    for (Vertex u : adjacency_[v])
      if (v < u)
        out.emplace_back(v, u);
  return out;
}

std::size_t BccInstance::input_edge_count() const {
  std::size_t deg = 0;
  for (const auto& adj : adjacency_)
    deg += adj.size();
  return deg / 2;
}

Port BccInstance::canonical_port(Vertex v, Vertex u) const {
  if (mode_ == KnowledgeMode::KT1)
    return ids_[u];
  return rank_[u] < rank_[v] ? rank_[u] + 1 : rank_[u];
}

Vertex BccInstance::canonical_neighbor(Vertex v, Port p) const {
  const auto n = ids_.size();
  if (mode_ == KnowledgeMode::KT1) {
    auto u = vertex_with_id(p);
    if (!u || *u == v)
      throw std::invalid_argument("vertex " + std::to_string(v) + " has no port " + std::to_string(p));
    return *u;
  }
  if (p == 0 || p >= n)
    throw std::invalid_argument("vertex " + std::to_string(v) + " has no port " + std::to_string(p));
  std::size_t idx = p - 1;
  if (idx >= rank_[v])
    ++idx;
  return by_id_[idx];
}

Port BccInstance::port_of(Vertex v, Vertex u) const {
  if (v >= size() || u >= size() || u == v)
    throw std::invalid_argument("port_of: bad vertex pair");
  if (!port_exceptions_.empty()) {
    auto it = port_exceptions_.find({v, u});
    if (it != port_exceptions_.end())
      return it->second;
  }
  return canonical_port(v, u);
}

Vertex BccInstance::neighbor_at(Vertex v, Port p) const {
  if (!neighbor_exceptions_.empty()) {
    auto it = neighbor_exceptions_.find({v, p});
    if (it != neighbor_exceptions_.end())
      return it->second;
  }
  return canonical_neighbor(v, p);
}

std::size_t BccInstance::port_index(Vertex v, Port p) const {
  if (mode_ == KnowledgeMode::KT0) {
    if (p == 0 || p >= size())
      throw std::invalid_argument("no port " + std::to_string(p));
    return p - 1;
  }
  auto u = vertex_with_id(p);
  if (!u || *u == v)
    throw std::invalid_argument("no port " + std::to_string(p));
  return rank_[*u] > rank_[v] ? rank_[*u] - 1 : rank_[*u];
}

Port BccInstance::port_at_index(Vertex v, std::size_t k) const {
  if (mode_ == KnowledgeMode::KT0)
    return k + 1;
  std::size_t idx = k >= rank_[v] ? k + 1 : k;
  return ids_[by_id_.at(idx)];
}

std::vector<Vertex> BccInstance::rewired_vertices() const {
  std::vector<Vertex> out;
  for (const auto& [key, port] : port_exceptions_)
    if (out.empty() || out.back() != key.first)
      out.push_back(key.first);
  return out;
}

VertexView BccInstance::view(Vertex v, std::shared_ptr<const Coins> coins) const {
  VertexView view;
  view.id = ids_.at(v);
  view.mode = mode_;
  view.port_count = size() - 1;
  for (Vertex u : adjacency_[v])
    view.input_ports.push_back(port_of(v, u));
  std::sort(view.input_ports.begin(), view.input_ports.end());
  if (mode_ == KnowledgeMode::KT1)
    view.roster = sorted_ids_;
  view.coins = coins ? std::move(coins) : std::make_shared<const Coins>();
  return view;
}

BccInstance BccInstance::rewired(std::span<const Edge> removed_edges, std::span<const Edge> added_edges,
                                 std::span<const PortAssignment> assignments) const {
  if (!assignments.empty() && mode_ == KnowledgeMode::KT1)
    throw UnsupportedOperation("KT1 port tables are fixed by the id law and cannot be rewired");
  BccInstance out = *this;
  for (auto [a, b] : removed_edges) {
    if (!has_input_edge(a, b))
      throw std::invalid_argument("rewire: edge to remove is not an input edge");
    auto drop = [&](Vertex x, Vertex y) {
      auto& adj = out.adjacency_[x];
      adj.erase(std::lower_bound(adj.begin(), adj.end(), y));
    };
    drop(a, b);
    drop(b, a);
  }
  for (auto [a, b] : added_edges) {
    if (a == b || a >= size() || b >= size() || out.has_input_edge(a, b))
      throw std::invalid_argument("rewire: edge to add is invalid or already present");
    auto add = [&](Vertex x, Vertex y) {
      auto& adj = out.adjacency_[x];
      adj.insert(std::lower_bound(adj.begin(), adj.end(), y), y);
    };
    add(a, b);
    add(b, a);
  }
  // Each vertex's assignments must permute the far ends of the ports they touch.
  std::map<Vertex, std::pair<std::multiset<Vertex>, std::multiset<Vertex>>> per_vertex;
  for (const auto& a : assignments) {
    per_vertex[a.vertex].first.insert(neighbor_at(a.vertex, a.port));
    per_vertex[a.vertex].second.insert(a.far_end);
  }
  for (const auto& [v, sets] : per_vertex)
    if (sets.first != sets.second)
      throw std::invalid_argument("rewire: assignments at vertex " + std::to_string(v) + " break the port bijection");
  for (const auto& a : assignments) {
    out.neighbor_exceptions_[{a.vertex, a.port}] = a.far_end;
    out.port_exceptions_[{a.vertex, a.far_end}] = a.port;
  }
  for (const auto& a : assignments) {
    if (out.canonical_neighbor(a.vertex, a.port) == a.far_end)
      out.neighbor_exceptions_.erase({a.vertex, a.port});
    if (out.canonical_port(a.vertex, a.far_end) == a.port)
      out.port_exceptions_.erase({a.vertex, a.far_end});
  }
  return out;
}

bool operator==(const BccInstance& a, const BccInstance& b) {
  return a.mode_ == b.mode_ && a.ids_ == b.ids_ && a.adjacency_ == b.adjacency_ &&
         a.port_exceptions_ == b.port_exceptions_ && a.neighbor_exceptions_ == b.neighbor_exceptions_;
}

// ---------------------------------------------------------------------------
// Transcript and simulation

Transcript::Transcript(std::size_t n, std::size_t rounds)
    : n_(n), rounds_(rounds), sent_(n * rounds), received_(n * rounds * (n == 0 ? 0 : n - 1)) {}

std::size_t Transcript::symbols_sent() const {
  std::size_t total = 0;
  for (auto p : sent_)
    total += p.size();
  return total;
}

SimulationResult simulate(const BccInstance& inst, const Algorithm& alg, std::size_t rounds, const Coins& coins,
                          SimulationOptions options) {
  if (options.bandwidth == 0 || options.bandwidth > kMaxBandwidth)
    throw std::invalid_argument("bandwidth must be in 1.." + std::to_string(kMaxBandwidth));
  const std::size_t n = inst.size();
  SimulationResult result;
  auto shared_coins = std::make_shared<const Coins>(coins);
  result.views.reserve(n);
  result.programs.reserve(n);
  for (Vertex v = 0; v < n; ++v) {
    result.views.push_back(inst.view(v, shared_coins));
    result.programs.push_back(alg.instantiate(result.views.back()));
  }
  result.transcript = Transcript(n, rounds);
  // sender[v * (n-1) + k] is the vertex behind v's k-th port.
  std::vector<Vertex> sender;
  if (rounds > 0) {
    sender.resize(n * (n - 1));
    for (Vertex v = 0; v < n; ++v)
      for (std::size_t k = 0; k + 1 < n; ++k)
        sender[v * (n - 1) + k] = inst.neighbor_at(v, inst.port_at_index(v, k));
  }
  auto& tr = result.transcript;
  for (std::size_t r = 1; r <= rounds; ++r) {
    for (Vertex v = 0; v < n; ++v) {
      Payload p = result.programs[v]->broadcast(r);
      if (p.empty())
        throw ProtocolViolation("empty payload (broadcast ⊥ to stay silent)", inst.id(v), r);
      if (p.size() > options.bandwidth)
        throw ProtocolViolation("payload of " + std::to_string(p.size()) + " symbols exceeds b=" +
                                    std::to_string(options.bandwidth),
                                inst.id(v), r);
      tr.set_sent(v, r, p);
    }
    for (Vertex v = 0; v < n; ++v) {
      auto recv = tr.received_mut(v, r);
      for (std::size_t k = 0; k + 1 < n; ++k)
        recv[k] = tr.sent(sender[v * (n - 1) + k], r);
    }
    for (Vertex v = 0; v < n; ++v)
      result.programs[v]->receive(r, tr.received(v, r));
  }
  result.verdicts.reserve(n);
  for (const auto& prog : result.programs)
    result.verdicts.push_back(prog->decide());
  return result;
}

Verdict system_verdict(std::span<const std::optional<Verdict>> verdicts) {
  if (verdicts.empty())
    throw std::invalid_argument("system verdict needs one verdict per vertex");
  Verdict out = Verdict::Yes;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (!verdicts[i])
      throw std::invalid_argument("missing verdict for vertex " + std::to_string(i));
    if (*verdicts[i] == Verdict::No)
      out = Verdict::No;
  }
  return out;
}

Verdict system_verdict(std::span<const Verdict> verdicts) {
  std::vector<std::optional<Verdict>> wrapped(verdicts.begin(), verdicts.end());
  return system_verdict(wrapped);
}

mpq_class evaluate_error(const Algorithm& alg, std::size_t rounds, std::span<const BccInstance> yes_family,
                         std::span<const BccInstance> no_family, const Coins& coins) {
  if (yes_family.empty() || no_family.empty())
    throw std::invalid_argument("evaluate_error needs nonempty YES and NO families");
  const auto n = yes_family.front().size();
  const auto mode = yes_family.front().mode();
  auto check = [&](const BccInstance& inst) {
    if (inst.size() != n || inst.mode() != mode)
      throw std::invalid_argument("evaluate_error: families mix vertex counts or knowledge modes");
  };
  std::size_t yes_wrong = 0;
  std::size_t no_wrong = 0;
  for (const auto& inst : yes_family) {
    check(inst);
    if (system_verdict(simulate(inst, alg, rounds, coins).verdicts) == Verdict::No)
      ++yes_wrong;
  }
  for (const auto& inst : no_family) {
    check(inst);
    if (system_verdict(simulate(inst, alg, rounds, coins).verdicts) == Verdict::Yes)
      ++no_wrong;
  }
  mpq_class err = mpq_class(static_cast<unsigned long>(yes_wrong), static_cast<unsigned long>(yes_family.size())) / 2 +
                  mpq_class(static_cast<unsigned long>(no_wrong), static_cast<unsigned long>(no_family.size())) / 2;
  err.canonicalize();
  return err;
}

// ---------------------------------------------------------------------------
// Files

std::string instance_to_json(const BccInstance& inst, bool explicit_ports) {
  nlohmann::ordered_json j;
  j["n"] = inst.size();
  j["mode"] = to_string(inst.mode());
  j["ids"] = inst.ids();
  auto edges = nlohmann::json::array();
  for (auto [a, b] : inst.input_edges())
    edges.push_back({a, b});
  j["input_edges"] = edges;
  if (explicit_ports || !inst.has_canonical_ports()) {
    auto table = nlohmann::json::array();
    for (Vertex v = 0; v < inst.size(); ++v) {
      auto row = nlohmann::json::array();
      for (Vertex u = 0; u < inst.size(); ++u)
        row.push_back(u == v ? nlohmann::json(nullptr) : nlohmann::json(inst.port_of(v, u)));
      table.push_back(row);
    }
    j["port_of"] = table;
  }
  return j.dump();
}

BccInstance instance_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("instance file: ") + e.what());
  }
  try {
    auto n = j.at("n").get<std::size_t>();
    auto mode = parse_knowledge_mode(j.at("mode").get<std::string>());
    std::vector<VertexId> ids;
    if (j.contains("ids"))
      ids = j.at("ids").get<std::vector<VertexId>>();
    std::vector<BccInstance::Edge> edges;
    for (const auto& e : j.at("input_edges"))
      edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
    if (!j.contains("port_of"))
      return BccInstance(n, mode, std::move(ids), edges);
    std::vector<std::vector<Port>> table;
    for (std::size_t v = 0; v < j.at("port_of").size(); ++v) {
      const auto& row = j.at("port_of").at(v);
      std::vector<Port> r;
      for (const auto& x : row)
        r.push_back(x.is_null() ? 0 : x.get<Port>());
      table.push_back(std::move(r));
    }
    if (ids.empty()) {
      ids.resize(n);
      std::iota(ids.begin(), ids.end(), VertexId{0});
    }
    return BccInstance::with_port_tables(mode, std::move(ids), edges, table);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance file: ") + e.what());
  }
}

void write_instance(std::ostream& out, const BccInstance& inst, bool explicit_ports) {
  out << instance_to_json(inst, explicit_ports) << '\n';
}

BccInstance read_instance(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

void write_transcript(std::ostream& out, const BccInstance& inst, const Transcript& t) {
  out << "# transcript n=" << t.vertex_count() << " rounds=" << t.rounds() << " mode=" << to_string(inst.mode())
      << '\n';
  for (std::size_t r = 1; r <= t.rounds(); ++r) {
    out << "round " << r << '\n' << "sent";
    for (Vertex v = 0; v < t.vertex_count(); ++v)
      out << ' ' << t.sent(v, r).to_string();
    out << '\n';
    for (Vertex v = 0; v < t.vertex_count(); ++v) {
      out << "recv " << inst.id(v) << ' ';
      auto recv = t.received(v, r);
      bool single = std::all_of(recv.begin(), recv.end(), [](Payload p) { return p.size() == 1; });
      for (std::size_t k = 0; k < recv.size(); ++k)
        out << (single || k == 0 ? "" : ",") << recv[k].to_string();
      out << '\n';
    }
  }
}

} // namespace bcclab
