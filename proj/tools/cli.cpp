#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcclab/algorithms.hpp"
#include "bcclab/bcc.hpp"
#include "bcclab/bounds.hpp"
#include "bcclab/crossing.hpp"
#include "bcclab/cycle_family.hpp"
#include "bcclab/errors.hpp"
#include "bcclab/indist_graph.hpp"
#include "bcclab/join_matrix.hpp"
#include "bcclab/matching.hpp"
#include "bcclab/partition.hpp"
#include "bcclab/reduction.hpp"

namespace bcclab::cli {

namespace {

using json = nlohmann::json;

struct Options {
  std::string format = "json";
  std::string output;
  std::size_t n = 0;
  std::size_t t = 0;
  std::string kind = "M";
  std::string variant = "general";
  std::string eps = "0";
  std::string algo = "always-yes";
  std::uint64_t seed = kDefaultSeed;
  unsigned silence = 300;
  std::size_t limit = 0;
  std::size_t min_len = 3;
  std::size_t k = 1;
  std::string a;
  std::string b;
  std::string x;
  std::string y;
  std::string verify = "auto";
  std::size_t max_records = 20;
  std::size_t spot_checks = 3;
  std::string instance;
  std::size_t cycle = 0;
  std::string mode = "KT0";
  std::string e1;
  std::string e2;
  long rounds = -1;
  std::size_t bandwidth = 1;
  std::size_t max_degree = 2;
  std::size_t id_bits = 0;
  bool upto = false;
  bool pairs = false;
  bool exhaustive = false;
  bool closed_form_only = false;
  bool verify_edges = false;
  bool random_graph = false;
  std::size_t random = 0;
  std::size_t left = 8;
  std::size_t right = 16;
  double density = 0.3;
  std::string text_out;
  std::string binary_out;
  std::string out_file;
  std::string bound = "all";
  double comm = 0;
};

class Reporter {
public:
  Reporter(std::ostream& out, bool human, std::string command, json config)
      : out_(out), human_(human), command_(std::move(command)), config_(std::move(config)) {}

  void emit(const std::string& record, json data) {
    if (human_) {
      out_ << command_ << ' ' << record << ':';
      for (auto it = data.begin(); it != data.end(); ++it)
        out_ << ' ' << it.key() << '=' << (it->is_string() ? it->get<std::string>() : it->dump());
      out_ << '\n';
      return;
    }
    data["tool"] = "bcclab";
    data["version"] = kVersion;
    data["command"] = command_;
    data["config"] = config_;
    data["record"] = record;
    out_ << data.dump() << '\n';
  }

private:
  std::ostream& out_;
  bool human_;
  std::string command_;
  json config_;
};

std::vector<Symbol> parse_symbols(const std::string& text) {
  std::vector<Symbol> out;
  for (char c : text)
    out.push_back(symbol_from_char(c));
  return out;
}

std::string symbols_text(const std::vector<Symbol>& s) { return EdgeLabel{s}.to_string(); }

std::unique_ptr<Algorithm> algorithm_from(const Options& o, const AlgorithmParams& params) {
  if (o.algo == "random-table")
    return std::make_unique<RandomTableAlgorithm>(o.seed, o.silence);
  return make_algorithm(o.algo, params);
}

std::size_t default_rounds(const Options& o, const BccInstance& inst, const AlgorithmParams& params) {
  if (o.rounds >= 0)
    return static_cast<std::size_t>(o.rounds);
  if (o.algo == "full-exchange-sparse")
    return FullExchangeSparse::round_budget(inst.max_id(), params.max_degree);
  if (o.algo == "id-exchange")
    return IdExchange(params.max_degree, params.id_bits).round_budget(inst.size());
  return 0;
}

std::size_t max_degree_of(const BccInstance& inst) {
  std::size_t d = 0;
  for (Vertex v = 0; v < inst.size(); ++v)
    d = std::max(d, inst.input_neighbors(v).size());
  return d;
}

BccInstance cycle_instance(std::size_t n, KnowledgeMode mode) {
  std::vector<BccInstance::Edge> edges;
  for (Vertex v = 0; v < n; ++v)
    edges.emplace_back(std::min<Vertex>(v, (v + 1) % n), std::max<Vertex>(v, (v + 1) % n));
  return BccInstance(n, mode, {}, edges);
}

BccInstance shuffled_cycle(std::size_t n, std::uint64_t seed) {
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v)
    order[v] = v;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<BccInstance::Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = order[i];
    auto q = order[(i + 1) % n];
    edges.emplace_back(std::min(p, q), std::max(p, q));
  }
  return BccInstance(n, KnowledgeMode::KT0, {}, edges);
}

BccInstance load_instance(const Options& o) {
  if (!o.instance.empty()) {
    std::ifstream in(o.instance);
    if (!in)
      throw std::invalid_argument("cannot open instance file '" + o.instance + "'");
    return read_instance(in);
  }
  if (o.cycle >= 3)
    return cycle_instance(o.cycle, parse_knowledge_mode(o.mode));
  throw std::invalid_argument("give --instance FILE or --cycle N (N >= 3)");
}

std::pair<Vertex, Vertex> parse_edge(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("edge must be written v,u");
  return {static_cast<Vertex>(std::stoul(text.substr(0, comma))),
          static_cast<Vertex>(std::stoul(text.substr(comma + 1)))};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::invalid_argument("cannot write '" + path + "'");
  return f;
}

json histogram(const std::map<std::size_t, std::size_t>& h) {
  json j = json::object();
  for (auto [k, v] : h)
    j[std::to_string(k)] = v;
  return j;
}

json edge_json(const DirectedInputEdge& e) {
  return {{"head", e.head}, {"tail", e.tail}, {"head_port", e.head_port}, {"tail_port", e.tail_port}};
}

// ---------------------------------------------------------------------------

int cmd_bell(const Options& o, Reporter& rep) {
  for (std::size_t n = o.upto ? 0 : o.n; n <= o.n; ++n)
    rep.emit("bell", {{"n", n}, {"bell", bell(n).get_str()}, {"source", "formula"}});
  return kOk;
}

int cmd_partitions(const Options& o, Reporter& rep) {
  std::size_t count = 0;
  auto show = [&](const SetPartition& p) {
    if (count < o.max_records)
      rep.emit("partition", {{"index", count}, {"partition", p.format()}});
    ++count;
  };
  mpz_class expected;
  const std::size_t limit = o.limit ? o.limit : (o.pairs ? kPairPartitionEnumerationLimit : kPartitionEnumerationLimit);
  if (o.pairs) {
    for (const auto& p : enumerate_pair_partitions(o.n, limit))
      show(p);
    expected = pair_partition_count(o.n);
  } else {
    for (const auto& p : enumerate_partitions(o.n, limit))
      show(p);
    expected = bell(o.n);
  }
  const bool pass = expected == count;
  rep.emit("summary", {{"n", o.n},
                       {"count", count},
                       {"expected", expected.get_str()},
                       {"expected_source", "formula"},
                       {"pass", pass}});
  return pass ? kOk : kVerificationFailed;
}

int cmd_join(const Options& o, Reporter& rep) {
  auto pa = SetPartition::parse(o.a);
  auto pb = SetPartition::parse(o.b);
  auto j = join(pa, pb);
  rep.emit("join", {{"a", pa.format()}, {"b", pb.format()}, {"join", j.format()}, {"blocks", j.block_count()},
                    {"trivial", j.is_trivial()}});
  return kOk;
}

int cmd_matrix_rank(const Options& o, Reporter& rep) {
  const auto kind = parse_join_matrix_kind(o.kind);
  auto m = build_join_matrix(kind, o.n, o.limit);
  if (!o.text_out.empty()) {
    auto f = open_out(o.text_out);
    write_join_matrix_text(f, m);
  }
  if (!o.binary_out.empty()) {
    auto f = open_out(o.binary_out);
    write_join_matrix_binary(f, m);
  }
  const auto rank = exact_rank(m);
  const mpz_class expected = kind == JoinMatrixKind::M ? bell(o.n) : pair_partition_count(o.n);
  const bool pass = expected == rank && m.dimension() == rank;
  rep.emit("rank", {{"kind", to_string(kind)},
                    {"n", o.n},
                    {"dimension", m.dimension()},
                    {"rank", rank},
                    {"expected", expected.get_str()},
                    {"expected_source", "formula"},
                    {"pass", pass}});
  return pass ? kOk : kVerificationFailed;
}

int cmd_family(const Options& o, Reporter& rep) {
  bool pass = true;
  const auto n = o.n;
  const double ratio = family_ratio(n, o.min_len);
  json summary{{"n", n}, {"min_cycle_len", o.min_len}, {"ratio_value", ratio},
               {"ratio_over_ln", ratio / std::log(static_cast<double>(n))}};
  std::optional<FamilyCounts> closed;
  if (n <= kClosedFormExactLimit) {
    closed = family_count_closed_forms(n, o.min_len);
    summary["one_cycle_closed_form"] = closed->one_cycle.get_str();
    summary["two_cycle_closed_form"] = closed->two_cycle.get_str();
    summary["ratio"] = closed->ratio.get_str();
  }
  if (n <= kFamilyEnumerationLimit && !o.closed_form_only) {
    auto fam = enumerate_family(n, o.min_len);
    const auto counts = fam.class_counts();
    summary["one_cycle"] = fam.one_cycle.size();
    summary["two_cycle"] = fam.two_cycle.size();
    pass = pass && closed && closed->one_cycle == fam.one_cycle.size() && closed->two_cycle == fam.two_cycle.size();
    for (auto [i, count] : counts) {
      const bool match = closed && closed->classes.count(i) && closed->classes.at(i) == count;
      // |T_i| i (n-i) <= |V1| n
      const bool bound = mpz_class(static_cast<unsigned long>(count)) * static_cast<unsigned long>(i * (n - i)) <=
                         mpz_class(static_cast<unsigned long>(fam.one_cycle.size())) * static_cast<unsigned long>(n);
      pass = pass && match && bound;
      rep.emit("class", {{"i", i},
                         {"enumerated", count},
                         {"closed_form", closed && closed->classes.count(i) ? closed->classes.at(i).get_str() : "-"},
                         {"match", match},
                         {"class_bound_holds", bound}});
    }
  }
  summary["pass"] = pass;
  rep.emit("summary", summary);
  return pass ? kOk : kVerificationFailed;
}

struct IndistSetup {
  CycleFamily family;
  std::unique_ptr<Algorithm> alg;
  IndistGraph graph;
};

IndistSetup build_indist(const Options& o) {
  IndistSetup s;
  s.family = enumerate_family(o.n, o.min_len);
  s.alg = algorithm_from(o, {o.max_degree, o.id_bits});
  auto x = parse_symbols(o.x);
  auto y = parse_symbols(o.y);
  s.graph = build_indist_graph(s.family, *s.alg, o.t, x, y);
  return s;
}

int cmd_indist_build(const Options& o, Reporter& rep) {
  auto s = build_indist(o);
  const auto& g = s.graph;
  if (!o.out_file.empty()) {
    auto f = open_out(o.out_file);
    write_indist_graph(f, g, s.family);
  }
  std::size_t ops = 0;
  for (auto v : g.left_ops)
    ops += v;
  auto stats = degree_stats(g, s.family);
  bool pass = stats.handshake;
  json summary{{"n", g.n},       {"t", g.t},          {"x", symbols_text(g.x)}, {"y", symbols_text(g.y)},
               {"left", g.left_size}, {"right", g.right_size}, {"edges", g.edges.size()}, {"ops", ops},
               {"handshake", stats.handshake}};
  if (o.verify_edges) {
    std::size_t verified = 0;
    for (const auto& e : g.edges) {
      auto inst = family_instance(s.family.left(e.left));
      if (states_identical(inst, cross(inst, e.witness_first, e.witness_second), *s.alg, g.t))
        ++verified;
    }
    summary["verified_edges"] = verified;
    pass = pass && verified == g.edges.size();
  }
  summary["pass"] = pass;
  rep.emit("summary", summary);
  return pass ? kOk : kVerificationFailed;
}

int cmd_indist_stats(const Options& o, Reporter& rep) {
  auto s = build_indist(o);
  auto st = degree_stats(s.graph, s.family);
  json classes = json::object();
  for (const auto& [i, c] : st.classes)
    classes[std::to_string(i)] = {{"members", c.members}, {"ops", c.ops}, {"ops_per_member", histogram(c.ops_per_member)}};
  rep.emit("stats", {{"left_degree_histogram", histogram(st.left_degree_histogram)},
                     {"right_degree_histogram", histogram(st.right_degree_histogram)},
                     {"left_ops_histogram", histogram(st.left_ops_histogram)},
                     {"left_ops_into_class", histogram(st.left_ops_into_class)},
                     {"classes", classes},
                     {"left_degree_sum", st.left_degree_sum},
                     {"right_degree_sum", st.right_degree_sum},
                     {"left_ops_sum", st.left_ops_sum},
                     {"right_ops_sum", st.right_ops_sum},
                     {"handshake", st.handshake},
                     {"floor_checks", st.floor_checks},
                     {"floor_shortfalls", st.floor_shortfalls},
                     {"floor_min_ratio", st.floor_min_ratio},
                     {"class_bound_holds", st.class_bound_holds}});
  return st.handshake ? kOk : kVerificationFailed;
}

int cmd_kmatch(const Options& o, Reporter& rep) {
  std::optional<BipartiteGraph> g;
  if (o.random_graph) {
    g.emplace(o.left, o.right);
    std::mt19937_64 rng(o.seed);
    std::bernoulli_distribution coin(o.density);
    for (std::size_t l = 0; l < o.left; ++l)
      for (std::size_t r = 0; r < o.right; ++r)
        if (coin(rng))
          g->add_edge(l, r);
  } else {
    g.emplace(build_indist(o).graph.to_bipartite());
  }
  auto res = k_matching(*g, o.k);
  bool pass = true;
  json rec{{"left", g->left_size()}, {"right", g->right_size()}, {"edges", g->edge_count()}, {"k", o.k},
           {"matched_copies", res.matched_copies}, {"saturating", res.matching.has_value()}};
  if (res.matching) {
    pass = is_valid_k_matching(*g, *res.matching);
    rec["valid"] = pass;
  } else {
    auto hall = hall_check(*g, res.violator, o.k);
    pass = !hall.satisfied;
    rec["violator_size"] = res.violator.size();
    rec["violator_neighborhood"] = res.violator_neighborhood;
    rec["violator_confirmed"] = pass;
  }
  rep.emit("kmatch", rec);
  return pass ? kOk : kVerificationFailed;
}

int cmd_cross(const Options& o, Reporter& rep) {
  auto inst = load_instance(o);
  auto [v1, u1] = parse_edge(o.e1);
  auto [v2, u2] = parse_edge(o.e2);
  auto e1 = directed_edge(inst, v1, u1);
  auto e2 = directed_edge(inst, v2, u2);
  const bool independent = are_independent(inst, e1, e2);
  json rec{{"e1", edge_json(e1)}, {"e2", edge_json(e2)}, {"independent", independent}};
  if (!independent) {
    rep.emit("cross", rec);
    return kUsageError;
  }
  auto crossed = cross(inst, e1, e2);
  auto [f1, f2] = crossed_edges(crossed, e1, e2);
  const bool involution = cross(crossed, f1, f2) == inst;
  json edges = json::array();
  for (auto [p, q] : crossed.input_edges())
    edges.push_back({p, q});
  rec["input_edges"] = edges;
  rec["involution"] = involution;
  if (!o.out_file.empty()) {
    auto f = open_out(o.out_file);
    write_instance(f, crossed, true);
  }
  rep.emit("cross", rec);
  return involution ? kOk : kVerificationFailed;
}

int cmd_fool(const Options& o, Reporter& rep) {
  auto inst = shuffled_cycle(o.n, o.seed);
  AlgorithmParams params{o.max_degree, o.id_bits};
  auto alg = algorithm_from(o, params);
  FoolingOptions fo;
  fo.verify = parse_verify_mode(o.verify);
  std::vector<FoolingPair> shown;
  std::vector<FoolingPair> sample;
  std::mt19937_64 rng(o.seed);
  std::size_t count = 0;
  auto report = find_fooling_pairs(inst, *alg, o.t, fo, [&](const FoolingPair& p) {
    if (shown.size() < o.max_records)
      shown.push_back(p);
    ++count;
    if (sample.size() < o.spot_checks)
      sample.push_back(p);
    else if (o.spot_checks > 0) {
      auto j = std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
      if (j < o.spot_checks)
        sample[j] = p;
    }
  });
  std::size_t largest = 0;
  for (const auto& b : report.buckets)
    largest = std::max(largest, b.edges.size());
  std::size_t spot_ok = 0;
  for (const auto& p : sample)
    spot_ok += states_identical(inst, cross(inst, report.edge(inst, p.first), report.edge(inst, p.second)), *alg, o.t)
                   ? 1
                   : 0;
  for (const auto& p : shown)
    rep.emit("pair", {{"t", o.t},
                      {"label", report.buckets[p.bucket].label.to_string()},
                      {"first", edge_json(report.edge(inst, p.first))},
                      {"second", edge_json(report.edge(inst, p.second))},
                      {"split", {p.split_first, p.split_second}},
                      {"verified", p.verified}});
  const bool pass = count > 0 && spot_ok == sample.size();
  json summary{{"n", o.n},
               {"t", o.t},
               {"algorithm", report.algorithm},
               {"method", to_string(report.method)},
               {"buckets", report.buckets.size()},
               {"largest_bucket", largest},
               {"pairs", count},
               {"rejected", report.rejected},
               {"spot_checks", sample.size()},
               {"spot_checks_passed", spot_ok},
               {"pass", pass}};
  if (o.t == 0 && o.n >= 5)
    summary["expected_pairs_t0"] = o.n * (o.n - 5) / 2;
  rep.emit("summary", summary);
  return pass ? kOk : kVerificationFailed;
}

std::pair<SetPartition, SetPartition> parse_inputs(const Options& o) {
  return {SetPartition::parse(o.a), SetPartition::parse(o.b)};
}

int cmd_reduce(const Options& o, Reporter& rep) {
  auto [pa, pb] = parse_inputs(o);
  const auto variant = parse_reduction_variant(o.variant);
  auto g = build_reduction(variant, pa, pb);
  if (!o.out_file.empty()) {
    auto f = open_out(o.out_file);
    write_instance(f, g.instance(KnowledgeMode::KT1));
  }
  auto comps = components_partition(g);
  auto j = join(pa, pb);
  json rec{{"variant", to_string(variant)}, {"vertices", g.vertex_count()}, {"edges", g.edges().size()},
           {"components", comps.format()}, {"join", j.format()}, {"match", comps == j}};
  if (variant == ReductionVariant::TwoRegular) {
    auto shape = cycle_shape(g);
    rec["cycle_lengths"] = shape.cycle_lengths;
    rec["two_regular"] = shape.two_regular;
    rec["all_even_at_least_4"] = shape.all_even_at_least_4;
  }
  rep.emit("reduce", rec);
  return comps == j ? kOk : kVerificationFailed;
}

int cmd_verify_join(const Options& o, Reporter& rep) {
  const auto variant = parse_reduction_variant(o.variant);
  std::size_t checked = 0;
  std::size_t failures = 0;
  auto check = [&](const SetPartition& pa, const SetPartition& pb) {
    ++checked;
    if (!verify_join_correspondence(pa, pb, variant)) {
      if (failures++ < o.max_records)
        rep.emit("failure", {{"a", pa.format()}, {"b", pb.format()}, {"join", join(pa, pb).format()},
                             {"components", components_partition(build_reduction(variant, pa, pb)).format()}});
    }
  };
  if (o.exhaustive) {
    std::vector<SetPartition> all;
    if (variant == ReductionVariant::TwoRegular)
      for (const auto& p : enumerate_pair_partitions(o.n))
        all.push_back(p);
    else
      all = enumerate_partitions(o.n);
    for (const auto& pa : all)
      for (const auto& pb : all)
        check(pa, pb);
  }
  std::mt19937_64 rng(o.seed);
  for (std::size_t i = 0; i < o.random; ++i) {
    if (variant == ReductionVariant::TwoRegular) {
      auto pa = random_pair_partition(o.n, rng);
      auto pb = random_pair_partition(o.n, rng);
      check(pa, pb);
    } else {
      auto pa = random_partition(o.n, rng);
      auto pb = random_partition(o.n, rng);
      check(pa, pb);
    }
  }
  if (checked == 0)
    throw std::invalid_argument("give --exhaustive or --random K");
  rep.emit("summary", {{"variant", to_string(variant)}, {"n", o.n}, {"checked", checked}, {"failures", failures},
                       {"pass", failures == 0}});
  return failures == 0 ? kOk : kVerificationFailed;
}

int cmd_twoparty(const Options& o, Reporter& rep) {
  auto [pa, pb] = parse_inputs(o);
  const auto variant = parse_reduction_variant(o.variant);
  auto graph = build_reduction(variant, pa, pb);
  auto inst = graph.instance(KnowledgeMode::KT1);
  AlgorithmParams params{std::max(o.max_degree, max_degree_of(inst)), o.id_bits};
  if (params.id_bits == 0)
    params.id_bits = id_bit_width(inst.max_id());
  auto alg = algorithm_from(o, params);
  const auto t = default_rounds(o, inst, params);
  auto res = two_party_simulate(*alg, pa, pb, variant, t);
  if (!o.out_file.empty()) {
    auto f = open_out(o.out_file);
    write_trace(f, res.trace);
  }
  const bool expected_yes = join(pa, pb).is_trivial();
  const auto per_round = res.trace.hosted_per_side;
  const bool accounting = res.trace.alice_symbols == t * per_round && res.trace.bob_symbols == t * per_round;
  json rec{{"variant", to_string(variant)},
           {"n", pa.ground_size()},
           {"rounds", t},
           {"algorithm", alg->name()},
           {"equivalent", res.equivalent},
           {"system_verdict", to_string(res.system_verdict)},
           {"join_trivial", expected_yes},
           {"symbols_per_side_per_round", per_round},
           {"alice_symbols", res.trace.alice_symbols},
           {"bob_symbols", res.trace.bob_symbols},
           {"total_symbols", res.trace.total_symbols()},
           {"accounting_exact", accounting},
           {"bits_per_trit", "log2(3)"}};
  if (res.mismatch)
    rec["mismatch"] = *res.mismatch;
  rep.emit("twoparty", rec);
  return res.equivalent && accounting ? kOk : kVerificationFailed;
}

int cmd_simulate(const Options& o, Reporter& rep) {
  auto inst = load_instance(o);
  AlgorithmParams params{std::max(o.max_degree, max_degree_of(inst)), o.id_bits};
  auto alg = algorithm_from(o, params);
  const auto t = default_rounds(o, inst, params);
  Coins coins;
  auto run = simulate(inst, *alg, t, coins, SimulationOptions{o.bandwidth});
  if (!o.out_file.empty()) {
    auto f = open_out(o.out_file);
    write_transcript(f, inst, run.transcript);
  }
  json labels = json::array();
  for (const auto& p : run.programs) {
    auto l = p->label();
    labels.push_back(l ? json(*l) : json(nullptr));
  }
  rep.emit("simulate", {{"n", inst.size()},
                        {"mode", to_string(inst.mode())},
                        {"algorithm", alg->name()},
                        {"rounds", t},
                        {"system_verdict", to_string(system_verdict(std::span<const Verdict>(run.verdicts)))},
                        {"labels", labels},
                        {"symbols_sent", run.transcript.symbols_sent()}});
  return kOk;
}

int cmd_error_eval(const Options& o, Reporter& rep) {
  auto fam = enumerate_family(o.n, o.min_len);
  const auto mode = o.algo == "full-exchange-sparse" ? KnowledgeMode::KT1 : parse_knowledge_mode(o.mode);
  std::vector<BccInstance> yes;
  std::vector<BccInstance> no;
  for (std::size_t i = 0; i < fam.one_cycle.size(); ++i)
    yes.push_back(family_instance(fam.left(i), mode));
  for (std::size_t i = 0; i < fam.two_cycle.size(); ++i)
    no.push_back(family_instance(fam.right(i), mode));
  AlgorithmParams params{o.max_degree, o.id_bits};
  auto alg = algorithm_from(o, params);
  const auto t = default_rounds(o, yes.front(), params);
  auto err = evaluate_error(*alg, t, yes, no);
  rep.emit("error", {{"n", o.n},
                     {"mode", to_string(mode)},
                     {"algorithm", alg->name()},
                     {"rounds", t},
                     {"yes_family", yes.size()},
                     {"no_family", no.size()},
                     {"error", err.get_str()},
                     {"error_value", err.get_d()}});
  return kOk;
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (text.find('.') != std::string::npos)
    q = mpq_class(std::stod(text));
  else if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("cannot parse '" + text + "' as a rational");
  q.canonicalize();
  return q;
}

json bound_json(const BoundReport& r) {
  json j{{"name", r.name}, {"value", r.value}, {"formula", r.formula}, {"parameters", r.parameters}};
  if (r.exact)
    j["exact"] = r.exact->get_str();
  return j;
}

int cmd_bounds(const Options& o, Reporter& rep) {
  const bool all = o.bound == "all";
  if (all || o.bound == "pigeonhole")
    rep.emit("bound", bound_json(pigeonhole_report(o.n, o.t)));
  const auto eps = parse_rational(o.eps);
  if (all || o.bound == "entropy")
    rep.emit("bound", bound_json(entropy_report(o.n, eps)));
  if (all || o.bound == "rounds") {
    const double comm = o.comm > 0 ? o.comm : entropy_comm_bound(o.n, eps);
    rep.emit("bound", bound_json(round_report(comm, o.n)));
  }
  return kOk;
}

json config_echo(CLI::App* app, CLI::App* sub) {
  json cfg = json::object();
  for (auto* level : {app, sub})
    for (const auto* opt : level->get_options()) {
      const auto name = opt->get_single_name();
      if (name == "help" || name.empty())
        continue;
      const auto& res = opt->results();
      if (!res.empty())
        cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
      else
        cfg[name] = opt->get_default_str();
    }
  cfg["subcommand"] = sub->get_name();
  return cfg;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"BCC(1) lower-bound verification lab", "bcclab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.add_option("--format", o.format, "json (one record per line) or human")->check(CLI::IsMember({"json", "human"}));
  app.add_option("--output", o.output, "write the report here instead of stdout");
  app.set_version_flag("--version", kVersion);

  auto add_n = [&](CLI::App* s, bool required = true) {
    auto* opt = s->add_option("--n", o.n, "ground size / vertex count");
    if (required)
      opt->required();
  };
  auto add_algo = [&](CLI::App* s) {
    s->add_option("--algo", o.algo, "always-yes, always-silent, id-exchange, full-exchange-sparse, random-table");
    s->add_option("--seed", o.seed, "seed for randomized choices");
    s->add_option("--silence", o.silence, "random-table: per-mille bias toward ⊥");
    s->add_option("--max-degree", o.max_degree, "degree bound d of the exchange algorithms");
    s->add_option("--id-bits", o.id_bits, "id-exchange: id width (0 derives it from n)");
  };
  auto add_indist = [&](CLI::App* s) {
    add_n(s);
    add_algo(s);
    s->add_option("--t", o.t, "rounds");
    s->add_option("--x", o.x, "head broadcast string over 0,1,_ (length t)");
    s->add_option("--y", o.y, "tail broadcast string over 0,1,_ (length t)");
    s->add_option("--min", o.min_len, "minimum cycle length (3 or 4)");
  };

  auto* bell_cmd = app.add_subcommand("bell", "Bell numbers");
  add_n(bell_cmd);
  bell_cmd->add_flag("--upto", o.upto, "emit B_0 .. B_n");

  auto* parts = app.add_subcommand("partitions", "enumerate set partitions or pairings");
  add_n(parts);
  parts->add_flag("--pairs", o.pairs, "perfect pairings only");
  parts->add_option("--max-records", o.max_records, "partitions to print");
  parts->add_option("--limit", o.limit, "override the enumeration limit");

  auto* join_cmd = app.add_subcommand("join", "join of two partitions");
  join_cmd->add_option("--a", o.a, "partition, e.g. (1,2)(3)")->required();
  join_cmd->add_option("--b", o.b, "partition")->required();

  auto* rank = app.add_subcommand("matrix-rank", "exact rank of a join matrix");
  rank->add_option("--kind", o.kind, "M or E");
  add_n(rank);
  rank->add_option("--limit", o.limit, "override the size limit");
  rank->add_option("--text", o.text_out, "write the matrix as text");
  rank->add_option("--binary", o.binary_out, "write the matrix in binary form");

  auto* family = app.add_subcommand("family", "cycle-family counts against closed forms");
  add_n(family);
  family->add_option("--min", o.min_len, "minimum cycle length (3 or 4)");
  family->add_flag("--closed-form", o.closed_form_only, "skip enumeration");

  auto* ibuild = app.add_subcommand("indist-build", "build the indistinguishability graph");
  add_indist(ibuild);
  ibuild->add_option("--out", o.out_file, "write the edge list");
  ibuild->add_flag("--verify", o.verify_edges, "re-verify every edge by simulation");

  auto* istats = app.add_subcommand("indist-stats", "degree statistics of the indistinguishability graph");
  add_indist(istats);

  auto* kmatch = app.add_subcommand("kmatch", "polygamous Hall k-matching");
  add_indist(kmatch);
  kmatch->get_option("--n")->required(false);
  kmatch->add_option("--k", o.k, "copies per left vertex");
  kmatch->add_flag("--random", o.random_graph, "use a random bipartite graph");
  kmatch->add_option("--left", o.left, "random graph: left size");
  kmatch->add_option("--right", o.right, "random graph: right size");
  kmatch->add_option("--density", o.density, "random graph: edge probability");

  auto* cross_cmd = app.add_subcommand("cross", "port-preserving crossing of two input edges");
  cross_cmd->add_option("--instance", o.instance, "instance file (JSON)");
  cross_cmd->add_option("--cycle", o.cycle, "use the cycle 0-1-...-(N-1)");
  cross_cmd->add_option("--mode", o.mode, "KT0 or KT1 for --cycle");
  cross_cmd->add_option("--e1", o.e1, "first edge v,u")->required();
  cross_cmd->add_option("--e2", o.e2, "second edge v,u")->required();
  cross_cmd->add_option("--out", o.out_file, "write the crossed instance");

  auto* fool = app.add_subcommand("fool", "fooling pairs on a one-cycle instance");
  add_n(fool);
  add_algo(fool);
  fool->add_option("--t", o.t, "rounds");
  fool->add_option("--verify", o.verify, "auto, simulation or checker");
  fool->add_option("--max-records", o.max_records, "pairs to print");
  fool->add_option("--spot-checks", o.spot_checks, "pairs re-verified by full simulation");

  auto* reduce = app.add_subcommand("reduce", "reduction graph G(P_A, P_B)");
  reduce->add_option("--variant", o.variant, "general or two-regular");
  reduce->add_option("--a", o.a, "Alice's partition")->required();
  reduce->add_option("--b", o.b, "Bob's partition")->required();
  reduce->add_option("--out", o.out_file, "write the graph as an instance file");

  auto* vjoin = app.add_subcommand("verify-join", "components of G(P_A, P_B) against the join");
  vjoin->add_option("--variant", o.variant, "general or two-regular");
  add_n(vjoin);
  vjoin->add_flag("--exhaustive", o.exhaustive, "all partition pairs");
  vjoin->add_option("--random", o.random, "number of random pairs");
  vjoin->add_option("--seed", o.seed, "seed");
  vjoin->add_option("--max-records", o.max_records, "failures to print");

  auto* twoparty = app.add_subcommand("twoparty", "Alice/Bob simulation of a KT-1 algorithm");
  add_algo(twoparty);
  twoparty->add_option("--variant", o.variant, "general or two-regular");
  twoparty->add_option("--a", o.a, "Alice's partition")->required();
  twoparty->add_option("--b", o.b, "Bob's partition")->required();
  twoparty->add_option("--t", o.rounds, "rounds (default: the algorithm's budget)");
  twoparty->add_option("--trace", o.out_file, "write the message trace");

  auto* sim = app.add_subcommand("simulate", "run an algorithm on one instance");
  add_algo(sim);
  sim->add_option("--instance", o.instance, "instance file (JSON)");
  sim->add_option("--cycle", o.cycle, "use the cycle 0-1-...-(N-1)");
  sim->add_option("--mode", o.mode, "KT0 or KT1 for --cycle");
  sim->add_option("--rounds", o.rounds, "rounds (default: the algorithm's budget)");
  sim->add_option("--bandwidth", o.bandwidth, "symbols per round");
  sim->add_option("--transcript", o.out_file, "write the transcript");

  auto* error = app.add_subcommand("error-eval", "exact error under the hard distribution");
  add_n(error);
  add_algo(error);
  error->add_option("--rounds", o.rounds, "rounds (default: the algorithm's budget)");
  error->add_option("--mode", o.mode, "KT0 or KT1");
  error->add_option("--min", o.min_len, "minimum cycle length (3 or 4)");

  auto* bounds = app.add_subcommand("bounds", "bound arithmetic");
  bounds->add_option("--bound", o.bound, "pigeonhole, entropy, rounds or all");
  add_n(bounds);
  bounds->add_option("--t", o.t, "rounds");
  bounds->add_option("--eps", o.eps, "error, as p/q or a decimal");
  bounds->add_option("--comm", o.comm, "communication in bits (default: the entropy bound)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsageError;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) {
      err << "cannot write '" << o.output << "'\n";
      return kUsageError;
    }
  }
  std::ostream& sink = o.output.empty() ? out : file;
  Reporter rep(sink, o.format == "human", sub->get_name(), config_echo(&app, sub));
  const auto name = sub->get_name();
  try {
    if (name == "bell") return cmd_bell(o, rep);
    if (name == "partitions") return cmd_partitions(o, rep);
    if (name == "join") return cmd_join(o, rep);
    if (name == "matrix-rank") return cmd_matrix_rank(o, rep);
    if (name == "family") return cmd_family(o, rep);
    if (name == "indist-build") return cmd_indist_build(o, rep);
    if (name == "indist-stats") return cmd_indist_stats(o, rep);
    if (name == "kmatch") return cmd_kmatch(o, rep);
    if (name == "cross") return cmd_cross(o, rep);
    if (name == "fool") return cmd_fool(o, rep);
    if (name == "reduce") return cmd_reduce(o, rep);
    if (name == "verify-join") return cmd_verify_join(o, rep);
    if (name == "twoparty") return cmd_twoparty(o, rep);
    if (name == "simulate") return cmd_simulate(o, rep);
    if (name == "error-eval") return cmd_error_eval(o, rep);
    if (name == "bounds") return cmd_bounds(o, rep);
  } catch (const ProtocolViolation& e) {
    rep.emit("error", {{"kind", "protocol-violation"}, {"message", e.what()}});
    return kVerificationFailed;
  } catch (const InternalConsistencyError& e) {
    rep.emit("error", {{"kind", "internal-consistency"}, {"message", e.what()}});
    return kVerificationFailed;
  } catch (const std::exception& e) {
    rep.emit("error", {{"kind", "usage"}, {"message", e.what()}});
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  err << "unknown subcommand\n";
  return kUsageError;
}

} // namespace bcclab::cli
