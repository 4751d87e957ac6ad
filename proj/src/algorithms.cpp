#include "bcclab/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "bcclab/disjoint_set.hpp"
#include "bcclab/errors.hpp"

namespace bcclab {

std::size_t id_bit_width(std::uint64_t x) { return std::max<std::size_t>(1, std::bit_width(x)); }

namespace {

class ConstantProgram final : public VertexProgram {
public:
  explicit ConstantProgram(Symbol s) : symbol_(s) {}
  Payload broadcast(std::size_t) override { return symbol_; }
  void receive(std::size_t round, std::span<const Payload>) override { rounds_ = round; }
  Verdict decide() const override { return Verdict::Yes; }
  std::string snapshot() const override { return "rounds=" + std::to_string(rounds_); }

private:
  Symbol symbol_;
  std::size_t rounds_ = 0;
};

/// d slots of w bits per sender; slot values are neighbor ids, ⊥ marks an empty slot.
class NeighborListExchange {
public:
  NeighborListExchange(std::size_t max_degree, std::size_t id_bits, std::vector<VertexId> own_list,
                       std::size_t ports)
      : d_(max_degree), w_(id_bits), own_(std::move(own_list)), values_(ports * max_degree, 0),
        empty_(ports * max_degree, 0) {
    if (own_.size() > d_)
      own_.resize(d_);
  }

  std::size_t rounds() const noexcept { return d_ * w_; }

  Payload broadcast(std::size_t step) const {
    const std::size_t slot = step / w_;
    const std::size_t bit = step % w_;
    if (slot >= own_.size())
      return Symbol::Silent;
    return ((own_[slot] >> bit) & 1u) != 0 ? Symbol::One : Symbol::Zero;
  }

  void receive(std::size_t step, std::span<const Payload> by_port) {
    const std::size_t slot = step / w_;
    const std::size_t bit = step % w_;
    for (std::size_t k = 0; k < by_port.size(); ++k) {
      auto s = by_port[k][0];
      auto idx = k * d_ + slot;
      if (s == Symbol::Silent)
        empty_[idx] = 1;
      else if (s == Symbol::One)
        values_[idx] |= std::uint64_t{1} << bit;
    }
  }

  /// YES iff the reconstructed input graph connects own_id with every sender.
  /// Writes the smallest id of own_id's component to component_label.
  bool connected(VertexId own_id, std::span<const VertexId> sender_ids, VertexId& component_label) const {
    std::vector<VertexId> nodes(sender_ids.begin(), sender_ids.end());
    nodes.push_back(own_id);
    std::sort(nodes.begin(), nodes.end());
    auto index = [&](VertexId id) -> std::ptrdiff_t {
      auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
      return (it != nodes.end() && *it == id) ? it - nodes.begin() : -1;
    };
    DisjointSet dsu(nodes.size());
    auto own_idx = static_cast<std::size_t>(index(own_id));
    for (auto nb : own_) {
      auto j = index(nb);
      if (j >= 0)
        dsu.unite(own_idx, static_cast<std::size_t>(j));
    }
    for (std::size_t k = 0; k < sender_ids.size(); ++k) {
      auto i = static_cast<std::size_t>(index(sender_ids[k]));
      for (std::size_t s = 0; s < d_; ++s) {
        if (empty_[k * d_ + s])
          continue;
        auto j = index(values_[k * d_ + s]);
        if (j >= 0)
          dsu.unite(i, static_cast<std::size_t>(j));
      }
    }
    auto root = dsu.find(own_idx);
    component_label = own_id;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (dsu.find(i) == root)
        component_label = std::min(component_label, nodes[i]);
    return dsu.set_count() == 1;
  }

  void append_snapshot(std::ostream& out) const {
    out << "own=";
    for (auto v : own_)
      out << v << ',';
    out << ";slots=";
    for (std::size_t i = 0; i < values_.size(); ++i)
      out << (empty_[i] ? std::string("_") : std::to_string(values_[i])) << ',';
  }

private:
  std::size_t d_;
  std::size_t w_;
  std::vector<VertexId> own_;
  std::vector<VertexId> values_;
  std::vector<std::uint8_t> empty_;
};

class FullExchangeProgram final : public VertexProgram {
public:
  FullExchangeProgram(const VertexView& view, std::size_t max_degree)
      : view_(view), exchange_(max_degree, id_bit_width(view.roster->back()), view.input_ports, view.port_count) {}

  Payload broadcast(std::size_t round) override {
    if (round > exchange_.rounds())
      return Symbol::Silent;
    return exchange_.broadcast(round - 1);
  }

  void receive(std::size_t round, std::span<const Payload> by_port) override {
    rounds_ = round;
    if (round <= exchange_.rounds())
      exchange_.receive(round - 1, by_port);
  }

  Verdict decide() const override {
    if (rounds_ < exchange_.rounds())
      return Verdict::Yes;
    return connected() ? Verdict::Yes : Verdict::No;
  }

  std::optional<std::uint64_t> label() const override {
    if (rounds_ < exchange_.rounds())
      return std::nullopt;
    VertexId label = 0;
    std::vector<VertexId> senders = sender_ids();
    exchange_.connected(view_.id, senders, label);
    return label;
  }

  std::string snapshot() const override {
    std::ostringstream out;
    out << "rounds=" << rounds_ << ';';
    exchange_.append_snapshot(out);
    return out.str();
  }

private:
  std::vector<VertexId> sender_ids() const {
    std::vector<VertexId> ids(view_.port_count);
    for (std::size_t k = 0; k < ids.size(); ++k)
      ids[k] = view_.port_at(k);
    return ids;
  }
  bool connected() const {
    VertexId label = 0;
    auto senders = sender_ids();
    return exchange_.connected(view_.id, senders, label);
  }

  VertexView view_;
  NeighborListExchange exchange_;
  std::size_t rounds_ = 0;
};

class IdExchangeProgram final : public VertexProgram {
public:
  IdExchangeProgram(const VertexView& view, std::size_t max_degree, std::size_t id_bits)
      : view_(view), d_(max_degree), w_(id_bits), learned_(view.port_count, 0) {}

  Payload broadcast(std::size_t round) override {
    if (round <= w_)
      return ((view_.id >> (round - 1)) & 1u) != 0 ? Symbol::One : Symbol::Zero;
    if (exchange_ && round - w_ <= exchange_->rounds())
      return exchange_->broadcast(round - w_ - 1);
    return Symbol::Silent;
  }

  void receive(std::size_t round, std::span<const Payload> by_port) override {
    rounds_ = round;
    if (round <= w_) {
      for (std::size_t k = 0; k < by_port.size(); ++k)
        if (by_port[k][0] == Symbol::One)
          learned_[k] |= std::uint64_t{1} << (round - 1);
      if (round == w_)
        start_exchange();
      return;
    }
    if (exchange_ && round - w_ <= exchange_->rounds())
      exchange_->receive(round - w_ - 1, by_port);
  }

  Verdict decide() const override {
    if (!complete())
      return Verdict::Yes;
    VertexId label = 0;
    return exchange_->connected(view_.id, learned_, label) ? Verdict::Yes : Verdict::No;
  }

  std::optional<std::uint64_t> label() const override {
    if (!complete())
      return std::nullopt;
    VertexId label = 0;
    exchange_->connected(view_.id, learned_, label);
    return label;
  }

  /// Id behind port index k, once phase 1 is over.
  const std::vector<VertexId>& learned_ids() const noexcept { return learned_; }

  std::string snapshot() const override {
    std::ostringstream out;
    out << "rounds=" << rounds_ << ";ids=";
    for (auto v : learned_)
      out << v << ',';
    if (exchange_) {
      out << ';';
      exchange_->append_snapshot(out);
    }
    return out.str();
  }

private:
  bool complete() const { return exchange_ && rounds_ >= w_ + exchange_->rounds(); }

  void start_exchange() {
    std::vector<VertexId> neighbor_ids;
    for (auto p : view_.input_ports)
      neighbor_ids.push_back(learned_[view_.index_of_port(p)]);
    std::sort(neighbor_ids.begin(), neighbor_ids.end());
    exchange_.emplace(d_, w_, std::move(neighbor_ids), view_.port_count);
  }

  VertexView view_;
  std::size_t d_;
  std::size_t w_;
  std::vector<VertexId> learned_;
  std::optional<NeighborListExchange> exchange_;
  std::size_t rounds_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomTableProgram final : public VertexProgram {
public:
  RandomTableProgram(const VertexView& view, std::uint64_t seed, unsigned silence)
      : seed_(seed), silence_(silence) {
    mix(view.id);
    mix(view.port_count);
    for (auto p : view.input_ports)
      mix(p);
    if (view.coins)
      for (auto c : *view.coins)
        mix(c);
  }

  Payload broadcast(std::size_t round) override {
    auto x = splitmix64(state_ ^ seed_ ^ (round * 0x632be59bd9b4e019ULL));
    if (x % 1000 < silence_)
      return Symbol::Silent;
    return (x >> 20) & 1u ? Symbol::One : Symbol::Zero;
  }

  void receive(std::size_t round, std::span<const Payload> by_port) override {
    mix(round);
    for (std::size_t k = 0; k < by_port.size(); ++k)
      mix((static_cast<std::uint64_t>(k) << 32) | by_port[k].raw());
  }

  Verdict decide() const override { return (state_ & 1u) ? Verdict::Yes : Verdict::No; }

  std::string snapshot() const override { return std::to_string(state_); }

private:
  void mix(std::uint64_t v) { state_ = splitmix64(state_ ^ v) + 0x9e3779b97f4a7c15ULL; }

  std::uint64_t seed_;
  unsigned silence_;
  std::uint64_t state_ = 0;
};

} // namespace

std::unique_ptr<VertexProgram> AlwaysYes::instantiate(const VertexView&) const {
  return std::make_unique<ConstantProgram>(Symbol::One);
}

std::unique_ptr<VertexProgram> AlwaysSilent::instantiate(const VertexView&) const {
  return std::make_unique<ConstantProgram>(Symbol::Silent);
}

std::unique_ptr<VertexProgram> FullExchangeSparse::instantiate(const VertexView& view) const {
  if (view.mode != KnowledgeMode::KT1)
    throw UnsupportedOperation("full-exchange-sparse needs KT-1 knowledge; use id-exchange under KT-0");
  return std::make_unique<FullExchangeProgram>(view, max_degree_);
}

std::size_t FullExchangeSparse::round_budget(VertexId max_id, std::size_t max_degree) {
  return max_degree * id_bit_width(max_id);
}

std::size_t IdExchange::id_bits_for(std::size_t n) const {
  return id_bits_ != 0 ? id_bits_ : id_bit_width(n == 0 ? 0 : n - 1);
}

std::unique_ptr<VertexProgram> IdExchange::instantiate(const VertexView& view) const {
  return std::make_unique<IdExchangeProgram>(view, max_degree_, id_bits_for(view.vertex_count()));
}

std::string RandomTableAlgorithm::name() const {
  return "random-table(seed=" + std::to_string(seed_) + ",silence=" + std::to_string(silence_per_mille_) + ")";
}

std::unique_ptr<VertexProgram> RandomTableAlgorithm::instantiate(const VertexView& view) const {
  return std::make_unique<RandomTableProgram>(view, seed_, silence_per_mille_);
}

std::vector<AlgorithmInfo> reference_algorithms() {
  return {
      {"always-yes", "KT0,KT1", "0", "broadcasts 1 every round; every vertex outputs YES"},
      {"always-silent", "KT0,KT1", "0", "broadcasts ⊥ every round; every vertex outputs YES"},
      {"id-exchange", "KT0,KT1", "w*(1+d), w = bit_width(n-1)",
       "ids bit-serially (w rounds), then the full-exchange-sparse neighbor lists over learned ids"},
      {"full-exchange-sparse", "KT1", "d*w, w = bit_width(max id)",
       "neighbor-id lists bit-serially in d slots; local connectivity check"},
  };
}

std::unique_ptr<Algorithm> make_algorithm(std::string_view name, const AlgorithmParams& params) {
  if (name == "always-yes")
    return std::make_unique<AlwaysYes>();
  if (name == "always-silent")
    return std::make_unique<AlwaysSilent>();
  if (name == "id-exchange")
    return std::make_unique<IdExchange>(params.max_degree, params.id_bits);
  if (name == "full-exchange-sparse")
    return std::make_unique<FullExchangeSparse>(params.max_degree);
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

} // namespace bcclab
