#include "bcclab/indist_graph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "bcclab/errors.hpp"

namespace bcclab {

BipartiteGraph IndistGraph::to_bipartite() const {
  BipartiteGraph g(left_size, right_size);
  for (const auto& e : edges)
    g.add_edge(e.left, e.right);
  return g;
}

std::vector<std::uint32_t> IndistGraph::left_degrees() const {
  std::vector<std::uint32_t> deg(left_size, 0);
  for (const auto& e : edges)
    ++deg[e.left];
  return deg;
}

std::vector<std::uint32_t> IndistGraph::right_degrees() const {
  std::vector<std::vector<std::uint32_t>> adj(right_size);
  for (const auto& e : edges)
    adj[e.right].push_back(e.left);
  std::vector<std::uint32_t> deg(right_size, 0);
  for (std::size_t r = 0; r < right_size; ++r) {
    auto& a = adj[r];
    std::sort(a.begin(), a.end());
    deg[r] = static_cast<std::uint32_t>(std::unique(a.begin(), a.end()) - a.begin());
  }
  return deg;
}

IndistGraph build_indist_graph(const CycleFamily& family, const Algorithm& alg, std::size_t t,
                               const std::vector<Symbol>& x, const std::vector<Symbol>& y, const Coins& coins) {
  if (x.size() != t || y.size() != t)
    throw std::invalid_argument("|x| and |y| must equal t = " + std::to_string(t));
  const auto n = family.n;
  IndistGraph g;
  g.n = n;
  g.t = t;
  g.x = x;
  g.y = y;
  g.algorithm = alg.name();
  g.left_size = family.one_cycle.size();
  g.right_size = family.two_cycle.size();
  g.left_active.assign(g.left_size, 0);
  g.left_ops.assign(g.left_size, 0);
  g.right_ops.assign(g.right_size, 0);

  std::vector<bool> sends_x(n, true);
  std::vector<bool> sends_y(n, true);
  std::vector<IndistEdge> local;
  for (std::uint32_t li = 0; li < g.left_size; ++li) {
    const auto graph = family.left(li);
    const auto& c = graph.cycles.front();
    const auto inst = family_instance(graph);
    if (t > 0) {
      auto run = simulate(inst, alg, t, coins);
      for (Vertex v = 0; v < n; ++v) {
        bool mx = true;
        bool my = true;
        for (std::size_t r = 1; r <= t; ++r) {
          auto p = run.transcript.sent(v, r);
          mx = mx && p.size() == 1 && p[0] == x[r - 1];
          my = my && p.size() == 1 && p[0] == y[r - 1];
        }
        sends_x[v] = mx;
        sends_y[v] = my;
      }
    }
    auto active = [&](const DirectedInputEdge& e) { return sends_x[e.head] && sends_y[e.tail]; };

    std::vector<DirectedInputEdge> fwd;
    std::vector<std::uint32_t> active_prefix{0};
    for (std::size_t j = 0; j < n; ++j) {
      fwd.push_back(directed_edge(inst, c[j], c[(j + 1) % n]));
      active_prefix.push_back(active_prefix.back() + (active(fwd.back()) ? 1 : 0));
    }
    const auto d = active_prefix.back();
    g.left_active[li] = d;

    const auto base_edges = graph.edges();
    local.clear();
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (bool aligned : {true, false}) {
          const auto e1 = fwd[j];
          const auto e2 = aligned ? fwd[k] : fwd[k].reversed();
          const bool as_is = active(e1) && active(e2);
          const bool reversed = active(e1.reversed()) && active(e2.reversed());
          if (!(as_is || reversed) || !are_independent(inst, e1, e2))
            continue;
          std::vector<BccInstance::Edge> crossed;
          auto same = [](BccInstance::Edge a, Vertex p, Vertex q) {
            return (a.first == p && a.second == q) || (a.first == q && a.second == p);
          };
          for (auto ed : base_edges)
            if (!same(ed, e1.head, e1.tail) && !same(ed, e2.head, e2.tail))
              crossed.push_back(ed);
          crossed.emplace_back(std::min(e1.head, e2.tail), std::max(e1.head, e2.tail));
          crossed.emplace_back(std::min(e2.head, e1.tail), std::max(e2.head, e1.tail));
          auto result = cycle_graph_from_edges(n, crossed);
          if (!result)
            throw InternalConsistencyError("crossing produced a vertex of degree other than 2");
          if (result->cycles.size() != 2 || result->smaller_length() < family.min_cycle_len)
            continue;
          auto idx = family.index_two(encode_cycle_graph(*result));
          if (!idx)
            throw InternalConsistencyError("crossed graph " + result->to_string() + " is missing from the family");
          IndistEdge edge;
          edge.left = li;
          edge.right = static_cast<std::uint32_t>(*idx);
          edge.ops = 1;
          edge.witness_first = as_is ? e1 : e1.reversed();
          edge.witness_second = as_is ? e2 : e2.reversed();
          if (aligned && as_is) {
            const auto s = active_prefix[k] - active_prefix[j + 1] + 1;
            edge.active_split = std::min(s, d - s);
          }
          local.push_back(edge);
        }
    std::sort(local.begin(), local.end(), [](const IndistEdge& a, const IndistEdge& b) { return a.right < b.right; });
    for (std::size_t i = 0; i < local.size();) {
      auto merged = local[i];
      std::size_t j = i + 1;
      for (; j < local.size() && local[j].right == merged.right; ++j) {
        merged.ops += local[j].ops;
        merged.active_split = std::max(merged.active_split, local[j].active_split);
      }
      g.left_ops[li] += merged.ops;
      g.right_ops[merged.right] += merged.ops;
      g.edges.push_back(merged);
      i = j;
    }
  }
  return g;
}

DegreeStats degree_stats(const IndistGraph& g, const CycleFamily& family) {
  DegreeStats s;
  const auto left_deg = g.left_degrees();
  const auto right_deg = g.right_degrees();
  for (auto d : left_deg) {
    ++s.left_degree_histogram[d];
    s.left_degree_sum += d;
  }
  for (auto d : right_deg) {
    ++s.right_degree_histogram[d];
    s.right_degree_sum += d;
  }
  for (auto o : g.left_ops) {
    ++s.left_ops_histogram[o];
    s.left_ops_sum += o;
  }
  for (const auto& [i, count] : family.class_counts())
    s.classes[i].members = count;
  for (std::size_t r = 0; r < g.right_size; ++r) {
    auto& cls = s.classes[family.class_of(r)];
    cls.ops += g.right_ops[r];
    ++cls.ops_per_member[g.right_ops[r]];
    s.right_ops_sum += g.right_ops[r];
  }
  for (const auto& e : g.edges)
    s.left_ops_into_class[family.class_of(e.right)] += e.ops;
  s.handshake = s.left_degree_sum == s.right_degree_sum && s.left_degree_sum == g.edges.size() &&
                s.left_ops_sum == s.right_ops_sum;

  s.floor_min_ratio = 0;
  bool any = false;
  std::size_t begin = 0;
  for (std::uint32_t li = 0; li < g.left_size; ++li) {
    std::size_t end = begin;
    while (end < g.edges.size() && g.edges[end].left == li)
      ++end;
    const auto d = g.left_active[li];
    for (std::uint32_t i = 3; 2 * i <= d; ++i) {
      std::size_t hits = 0;
      for (auto e = begin; e < end; ++e)
        hits += g.edges[e].active_split == i ? 1 : 0;
      ++s.floor_checks;
      const double ratio = static_cast<double>(hits) / (d / 2.0);
      if (2 * hits < d)
        ++s.floor_shortfalls;
      s.floor_min_ratio = any ? std::min(s.floor_min_ratio, ratio) : ratio;
      any = true;
    }
    begin = end;
  }

  const auto n = family.n;
  const mpz_class v1(static_cast<unsigned long>(family.one_cycle.size()));
  for (const auto& [i, cls] : s.classes) {
    // |T_i| i (n-i) <= |V1| n
    mpz_class lhs = mpz_class(static_cast<unsigned long>(cls.members)) * static_cast<unsigned long>(i * (n - i));
    if (lhs > v1 * static_cast<unsigned long>(n))
      s.class_bound_holds = false;
  }
  return s;
}

void write_indist_graph(std::ostream& out, const IndistGraph& g, const CycleFamily& family) {
  out << "# indist-graph n=" << g.n << " t=" << g.t << " x=" << EdgeLabel{g.x}.to_string()
      << " y=" << EdgeLabel{g.y}.to_string() << " algorithm=" << g.algorithm << " left=" << g.left_size
      << " right=" << g.right_size << " edges=" << g.edges.size() << '\n';
  out << "# left right ops witness\n";
  for (const auto& e : g.edges)
    out << family.left(e.left).to_string() << ' ' << family.right(e.right).to_string() << ' ' << e.ops << " ("
        << e.witness_first.head << ',' << e.witness_first.tail << ")(" << e.witness_second.head << ','
        << e.witness_second.tail << ")\n";
}

} // namespace bcclab
