#include "bcclab/crossing.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "bcclab/errors.hpp"

namespace bcclab {

namespace {

void require_member(const BccInstance& inst, const DirectedInputEdge& e) {
  const auto n = inst.size();
  if (e.head >= n || e.tail >= n || e.head == e.tail || !inst.has_input_edge(e.head, e.tail))
    throw std::invalid_argument("directed edge (" + std::to_string(e.head) + "," + std::to_string(e.tail) +
                                ") is not an input edge");
  if (inst.port_of(e.head, e.tail) != e.head_port || inst.port_of(e.tail, e.head) != e.tail_port)
    throw std::invalid_argument("directed edge (" + std::to_string(e.head) + "," + std::to_string(e.tail) +
                                ") carries ports that do not match the instance");
}

char symbol_char(Symbol s) {
  switch (s) {
    case Symbol::Zero: return '0';
    case Symbol::One: return '1';
    case Symbol::Silent: return '_';
  }
  return '?';
}

std::vector<Port> input_ports_of(const BccInstance& inst, Vertex v) {
  std::vector<Port> ports;
  for (auto u : inst.input_neighbors(v))
    ports.push_back(inst.port_of(v, u));
  std::sort(ports.begin(), ports.end());
  return ports;
}

} // namespace

DirectedInputEdge directed_edge(const BccInstance& inst, Vertex v, Vertex u) {
  if (v >= inst.size() || u >= inst.size() || v == u || !inst.has_input_edge(v, u))
    throw std::invalid_argument("(" + std::to_string(v) + "," + std::to_string(u) + ") is not an input edge");
  return {v, u, inst.port_of(v, u), inst.port_of(u, v)};
}

bool are_independent(const BccInstance& inst, const DirectedInputEdge& e1, const DirectedInputEdge& e2) {
  require_member(inst, e1);
  require_member(inst, e2);
  std::array<Vertex, 4> vs{e1.head, e1.tail, e2.head, e2.tail};
  std::sort(vs.begin(), vs.end());
  if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    return false;
  return !inst.has_input_edge(e1.head, e2.tail) && !inst.has_input_edge(e2.head, e1.tail);
}

CrossingDelta crossing_delta(const BccInstance& inst, const DirectedInputEdge& e1, const DirectedInputEdge& e2) {
  if (inst.mode() == KnowledgeMode::KT1)
    throw UnsupportedOperation("crossings are not defined for KT-1 instances");
  if (!are_independent(inst, e1, e2))
    throw PreconditionViolation("crossing needs independent edges");
  const auto [v1, u1, p1, q1] = e1;
  const auto [v2, u2, p2, q2] = e2;
  const Port p1x = inst.port_of(v1, u2);
  const Port q1x = inst.port_of(u1, v2);
  const Port p2x = inst.port_of(v2, u1);
  const Port q2x = inst.port_of(u2, v1);
  CrossingDelta d{
      {{{v1, u1}, {v2, u2}}},
      {{{v1, u2}, {v2, u1}}},
      {{{v1, p1, u2},
        {v1, p1x, u1},
        {u1, q1, v2},
        {u1, q1x, v1},
        {v2, p2, u1},
        {v2, p2x, u2},
        {u2, q2, v1},
        {u2, q2x, v2}}},
  };
  return d;
}

BccInstance cross(const BccInstance& inst, const DirectedInputEdge& e1, const DirectedInputEdge& e2) {
  auto d = crossing_delta(inst, e1, e2);
  return inst.rewired(d.removed, d.added, d.assignments);
}

std::pair<DirectedInputEdge, DirectedInputEdge> crossed_edges(const BccInstance& crossed,
                                                              const DirectedInputEdge& e1,
                                                              const DirectedInputEdge& e2) {
  return {directed_edge(crossed, e1.head, e2.tail), directed_edge(crossed, e2.head, e1.tail)};
}

std::string EdgeLabel::to_string() const {
  std::string s;
  s.reserve(symbols.size());
  for (auto x : symbols)
    s.push_back(symbol_char(x));
  return s;
}

EdgeLabel edge_label(const Transcript& transcript, std::size_t t, const DirectedInputEdge& e) {
  if (t > transcript.rounds())
    throw std::invalid_argument("transcript is shorter than the requested label");
  EdgeLabel label;
  label.symbols.reserve(2 * t);
  for (auto v : {e.head, e.tail})
    for (std::size_t r = 1; r <= t; ++r) {
      auto p = transcript.sent(v, r);
      if (p.size() != 1)
        throw std::invalid_argument("edge labels need single-symbol broadcasts");
      label.symbols.push_back(p[0]);
    }
  return label;
}

EdgeLabel edge_label(const BccInstance& inst, const Algorithm& alg, std::size_t t, const DirectedInputEdge& e,
                     const Coins& coins) {
  require_member(inst, e);
  auto run = simulate(inst, alg, t, coins);
  return edge_label(run.transcript, t, e);
}

std::vector<DirectedInputEdge> active_edges(const BccInstance& inst, const Algorithm& alg, std::size_t t,
                                            const std::vector<Symbol>& x, const std::vector<Symbol>& y,
                                            const Coins& coins) {
  if (x.size() != t || y.size() != t)
    throw std::invalid_argument("active_edges: |x| and |y| must equal t = " + std::to_string(t));
  auto run = simulate(inst, alg, t, coins);
  auto matches = [&](Vertex v, const std::vector<Symbol>& seq) {
    for (std::size_t r = 1; r <= t; ++r) {
      auto p = run.transcript.sent(v, r);
      if (p.size() != 1 || p[0] != seq[r - 1])
        return false;
    }
    return true;
  };
  std::vector<DirectedInputEdge> out;
  for (Vertex v = 0; v < inst.size(); ++v) {
    if (!matches(v, x))
      continue;
    for (auto u : inst.input_neighbors(v))
      if (matches(u, y))
        out.push_back(directed_edge(inst, v, u));
  }
  return out;
}

StateComparison compare_states(const BccInstance& i1, const BccInstance& i2, const Algorithm& alg, std::size_t t,
                               const Coins& coins) {
  auto differ = [](Vertex v, std::size_t r, std::optional<Port> p, std::string what) {
    return StateComparison{false, StateDifference{v, r, p, std::move(what)}};
  };
  if (i1.size() != i2.size() || i1.mode() != i2.mode())
    return differ(0, 0, std::nullopt, "instances differ in size or knowledge mode");
  auto a = simulate(i1, alg, t, coins);
  auto b = simulate(i2, alg, t, coins);
  const auto n = i1.size();
  for (Vertex v = 0; v < n; ++v)
    if (!(a.views[v] == b.views[v]))
      return differ(v, 0, std::nullopt, "initial views differ");
  for (std::size_t r = 1; r <= t; ++r)
    for (Vertex v = 0; v < n; ++v) {
      auto ra = a.transcript.received(v, r);
      auto rb = b.transcript.received(v, r);
      for (std::size_t k = 0; k < ra.size(); ++k)
        if (!(ra[k] == rb[k]))
          return differ(v, r, a.views[v].port_at(k), "received symbols differ");
    }
  for (Vertex v = 0; v < n; ++v) {
    if (a.programs[v]->snapshot() != b.programs[v]->snapshot())
      return differ(v, t, std::nullopt, "internal states differ");
    if (a.verdicts[v] != b.verdicts[v])
      return differ(v, t, std::nullopt, "verdicts differ");
  }
  return {};
}

bool states_identical(const BccInstance& i1, const BccInstance& i2, const Algorithm& alg, std::size_t t,
                      const Coins& coins) {
  return compare_states(i1, i2, alg, t, coins).identical;
}

IndistinguishabilityChecker::IndistinguishabilityChecker(const BccInstance& base, const Algorithm& alg,
                                                         std::size_t t, const Coins& coins)
    : base_(base), t_(t), run_(simulate(base, alg, t, coins)) {
  for (Vertex v = 0; v < base.size(); ++v)
    for (std::size_t r = 1; r <= t; ++r)
      if (run_.transcript.sent(v, r).size() != 1)
        throw std::invalid_argument("the checker needs single-symbol broadcasts");
}

bool IndistinguishabilityChecker::same_sequence(Vertex a, Vertex b) const {
  if (a == b)
    return true;
  for (std::size_t r = 1; r <= t_; ++r)
    if (!(run_.transcript.sent(a, r) == run_.transcript.sent(b, r)))
      return false;
  return true;
}

bool IndistinguishabilityChecker::check(const BccInstance& other) const {
  const auto n = base_.size();
  if (other.size() != n || other.mode() != base_.mode() || other.ids() != base_.ids())
    return false;
  for (Vertex v = 0; v < n; ++v)
    if (input_ports_of(base_, v) != input_ports_of(other, v))
      return false;
  if (base_.mode() == KnowledgeMode::KT1)
    return true;
  auto touched = base_.rewired_vertices();
  auto more = other.rewired_vertices();
  touched.insert(touched.end(), more.begin(), more.end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (auto w : touched)
    for (Port p = 1; p < n; ++p)
      if (!same_sequence(base_.neighbor_at(w, p), other.neighbor_at(w, p)))
        return false;
  return true;
}

bool IndistinguishabilityChecker::check_crossing(const DirectedInputEdge& e1, const DirectedInputEdge& e2) const {
  auto d = crossing_delta(base_, e1, e2);
  for (auto w : {e1.head, e1.tail, e2.head, e2.tail}) {
    auto before = input_ports_of(base_, w);
    std::vector<Port> after;
    for (auto p : before) {
      auto far = base_.neighbor_at(w, p);
      bool removed = false;
      for (auto [a, b] : d.removed)
        removed = removed || (a == w && b == far) || (b == w && a == far);
      if (!removed)
        after.push_back(p);
    }
    for (auto [a, b] : d.added) {
      if (a != w && b != w)
        continue;
      auto far = a == w ? b : a;
      for (const auto& s : d.assignments)
        if (s.vertex == w && s.far_end == far)
          after.push_back(s.port);
    }
    std::sort(after.begin(), after.end());
    if (after != before)
      return false;
  }
  for (const auto& s : d.assignments)
    if (!same_sequence(base_.neighbor_at(s.vertex, s.port), s.far_end))
      return false;
  return true;
}

std::vector<Vertex> canonical_cycle(const BccInstance& inst) {
  const auto n = inst.size();
  if (n < 3)
    throw std::invalid_argument("a cycle needs at least 3 vertices");
  for (Vertex v = 0; v < n; ++v)
    if (inst.input_neighbors(v).size() != 2)
      throw std::invalid_argument("input graph is not a single cycle: vertex " + std::to_string(v) +
                                  " has degree " + std::to_string(inst.input_neighbors(v).size()));
  Vertex start = 0;
  for (Vertex v = 1; v < n; ++v)
    if (inst.id(v) < inst.id(start))
      start = v;
  auto nb = inst.input_neighbors(start);
  Vertex next = inst.id(nb[0]) < inst.id(nb[1]) ? nb[0] : nb[1];
  std::vector<Vertex> cycle{start};
  std::vector<bool> seen(n, false);
  seen[start] = true;
  Vertex prev = start;
  Vertex cur = next;
  while (cur != start) {
    if (seen[cur])
      throw std::invalid_argument("input graph is not a single cycle");
    seen[cur] = true;
    cycle.push_back(cur);
    auto ns = inst.input_neighbors(cur);
    Vertex step = ns[0] == prev ? ns[1] : ns[0];
    prev = cur;
    cur = step;
  }
  if (cycle.size() != n)
    throw std::invalid_argument("input graph is not a single cycle: it has a cycle of length " +
                                std::to_string(cycle.size()));
  return cycle;
}

std::string to_string(VerifyMode m) {
  switch (m) {
    case VerifyMode::Auto: return "auto";
    case VerifyMode::Simulation: return "simulation";
    case VerifyMode::Checker: return "checker";
  }
  return "?";
}

VerifyMode parse_verify_mode(std::string_view text) {
  if (text == "auto")
    return VerifyMode::Auto;
  if (text == "simulation")
    return VerifyMode::Simulation;
  if (text == "checker")
    return VerifyMode::Checker;
  throw std::invalid_argument("unknown verification mode '" + std::string(text) + "'");
}

DirectedInputEdge FoolingReport::edge(const BccInstance& inst, std::uint32_t position) const {
  return directed_edge(inst, cycle.at(position), cycle.at((position + 1) % cycle.size()));
}

FoolingReport find_fooling_pairs(const BccInstance& inst, const Algorithm& alg, std::size_t t,
                                 const FoolingOptions& options, const FoolingVisitor& visit) {
  if (inst.mode() != KnowledgeMode::KT0)
    throw UnsupportedOperation("fooling pairs are built from crossings, which need a KT-0 instance");
  FoolingReport report;
  report.n = inst.size();
  report.t = t;
  report.algorithm = alg.name();
  report.method = options.verify;
  if (report.method == VerifyMode::Auto)
    report.method = inst.size() <= options.simulation_limit ? VerifyMode::Simulation : VerifyMode::Checker;
  report.cycle = canonical_cycle(inst);

  IndistinguishabilityChecker checker(inst, alg, t, options.coins);
  const auto n = static_cast<std::uint32_t>(inst.size());
  std::vector<DirectedInputEdge> edges;
  edges.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    edges.push_back(report.edge(inst, i));

  std::map<EdgeLabel, std::vector<std::uint32_t>> by_label;
  for (std::uint32_t i = 0; i < n; ++i)
    by_label[edge_label(checker.transcript(), t, edges[i])].push_back(i);
  for (auto& [label, members] : by_label)
    report.buckets.push_back({label, std::move(members)});

  for (std::uint32_t b = 0; b < report.buckets.size(); ++b) {
    const auto& members = report.buckets[b].edges;
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto i = members[x];
        const auto j = members[y];
        if (!are_independent(inst, edges[i], edges[j]))
          continue;
        FoolingPair pair{i, j, b, j - i, n - (j - i), false};
        if (report.method == VerifyMode::Simulation)
          pair.verified = states_identical(inst, cross(inst, edges[i], edges[j]), alg, t, options.coins);
        else
          pair.verified = checker.check_crossing(edges[i], edges[j]);
        if (!pair.verified) {
          ++report.rejected;
          continue;
        }
        visit(pair);
      }
  }
  return report;
}

FoolingReport find_fooling_pairs(const BccInstance& inst, const Algorithm& alg, std::size_t t,
                                 const FoolingOptions& options) {
  std::vector<FoolingPair> pairs;
  auto report = find_fooling_pairs(inst, alg, t, options, [&](const FoolingPair& p) { pairs.push_back(p); });
  report.pairs = std::move(pairs);
  return report;
}

} // namespace bcclab
