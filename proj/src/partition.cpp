#include "bcclab/partition.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "bcclab/disjoint_set.hpp"
#include "bcclab/errors.hpp"

namespace bcclab {

SetPartition::SetPartition(std::size_t ground_size, std::vector<std::vector<Element>> blocks) {
  if (ground_size == 0)
    throw std::invalid_argument("partition ground size must be positive");
  std::vector<std::int64_t> owner(ground_size, -1);
  std::size_t seen = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (Element e : blocks[b]) {
      if (e == 0 || e > ground_size)
        throw std::invalid_argument("element " + std::to_string(e) + " outside {1.." +
                                    std::to_string(ground_size) + "}");
      if (owner[e - 1] != -1)
        throw std::invalid_argument("duplicate element " + std::to_string(e));
      owner[e - 1] = static_cast<std::int64_t>(b);
      ++seen;
    }
  }
  if (seen != ground_size) {
    auto gap = std::find(owner.begin(), owner.end(), -1) - owner.begin();
    throw std::invalid_argument("element " + std::to_string(gap + 1) + " missing from partition");
  }
  // Relabel blocks in order of first appearance, which is order of minimum.
  std::vector<std::int64_t> relabel(blocks.size(), -1);
  std::uint32_t next = 0;
  labels_.resize(ground_size);
  for (std::size_t i = 0; i < ground_size; ++i) {
    auto b = static_cast<std::size_t>(owner[i]);
    if (relabel[b] == -1)
      relabel[b] = next++;
    labels_[i] = static_cast<std::uint32_t>(relabel[b]);
  }
  rebuild_blocks();
}

void SetPartition::rebuild_blocks() {
  blocks_.clear();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == blocks_.size())
      blocks_.emplace_back();
    blocks_[labels_[i]].push_back(static_cast<Element>(i + 1));
  }
}

SetPartition SetPartition::from_restricted_growth(std::span<const std::uint32_t> rgs) {
  if (rgs.empty())
    throw std::invalid_argument("restricted growth string must be nonempty");
  std::uint32_t bound = 0;
  for (auto label : rgs) {
    if (label > bound)
      throw std::invalid_argument("not a restricted growth string");
    if (label == bound)
      ++bound;
  }
  SetPartition p;
  p.labels_.assign(rgs.begin(), rgs.end());
  p.rebuild_blocks();
  return p;
}

SetPartition SetPartition::finest(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("partition ground size must be positive");
  std::vector<std::uint32_t> rgs(n);
  for (std::size_t i = 0; i < n; ++i)
    rgs[i] = static_cast<std::uint32_t>(i);
  return from_restricted_growth(rgs);
}

SetPartition SetPartition::trivial(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("partition ground size must be positive");
  std::vector<std::uint32_t> rgs(n, 0);
  return from_restricted_growth(rgs);
}

SetPartition SetPartition::parse(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  std::vector<std::vector<Element>> blocks;
  std::vector<std::size_t> first_seen;  // element -> position + 1
  Element max_element = 0;
  skip_ws();
  if (pos == text.size())
    throw ParseError("empty partition text", pos);
  while (true) {
    skip_ws();
    if (pos == text.size())
      break;
    if (text[pos] != '(')
      throw ParseError("expected '('", pos);
    ++pos;
    blocks.emplace_back();
    while (true) {
      skip_ws();
      if (pos == text.size())
        throw ParseError("unterminated block", pos);
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw ParseError("expected element", pos);
      std::size_t start = pos;
      std::uint64_t value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
        if (value > 1'000'000)
          throw ParseError("element too large", start);
        ++pos;
      }
      if (value == 0)
        throw ParseError("elements start at 1", start);
      auto e = static_cast<Element>(value);
      if (first_seen.size() < e)
        first_seen.resize(e, 0);
      if (first_seen[e - 1] != 0)
        throw ParseError("duplicate element " + std::to_string(e), start);
      first_seen[e - 1] = start + 1;
      max_element = std::max(max_element, e);
      blocks.back().push_back(e);
      skip_ws();
      if (pos == text.size())
        throw ParseError("unterminated block", pos);
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      throw ParseError("expected ',' or ')'", pos);
    }
  }
  for (std::size_t i = 0; i < max_element; ++i)
    if (first_seen[i] == 0)
      throw ParseError("element " + std::to_string(i + 1) + " missing (gap in {1.." +
                           std::to_string(max_element) + "})",
                       text.size());
  return SetPartition(max_element, std::move(blocks));
}

std::string SetPartition::format() const {
  std::string out;
  for (const auto& block : blocks_) {
    out += '(';
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i)
        out += ',';
      out += std::to_string(block[i]);
    }
    out += ')';
  }
  return out;
}

bool SetPartition::is_pairing() const noexcept {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 2; });
}

PairPartition::PairPartition(SetPartition p) : p_(std::move(p)) {
  if (!p_.is_pairing())
    throw std::invalid_argument("not a pair partition: " + p_.format());
}

SetPartition join(const SetPartition& p, const SetPartition& q) {
  if (p.ground_size() != q.ground_size())
    throw std::invalid_argument("join: ground sizes differ (" + std::to_string(p.ground_size()) +
                                " vs " + std::to_string(q.ground_size()) + ")");
  const std::size_t n = p.ground_size();
  DisjointSet dsu(n);
  for (const auto* part : {&p, &q})
    for (const auto& block : part->blocks())
      for (std::size_t i = 1; i < block.size(); ++i)
        dsu.unite(block[0] - 1, block[i] - 1);
  std::vector<std::uint32_t> rgs(n);
  std::vector<std::int64_t> label_of_root(n, -1);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto root = dsu.find(i);
    if (label_of_root[root] == -1)
      label_of_root[root] = next++;
    rgs[i] = static_cast<std::uint32_t>(label_of_root[root]);
  }
  return SetPartition::from_restricted_growth(rgs);
}

bool is_refinement(const SetPartition& p, const SetPartition& q) {
  if (p.ground_size() != q.ground_size())
    throw std::invalid_argument("is_refinement: ground sizes differ");
  for (const auto& block : p.blocks()) {
    auto target = q.block_of(block.front());
    for (Element e : block)
      if (q.block_of(e) != target)
        return false;
  }
  return true;
}

namespace {

void check_positive(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("ground size must be positive");
}

} // namespace

void for_each_restricted_growth(std::size_t n,
                                const std::function<void(std::span<const std::uint32_t>)>& visit,
                                std::size_t limit) {
  check_positive(n);
  if (n > limit)
    throw ResourceLimitError("partition enumeration for n=" + std::to_string(n) + " refused", limit);
  std::vector<std::uint32_t> rgs(n, 0);
  std::vector<std::uint32_t> prefix_max(n, 0);
  // Successor in lexicographic order: bump the rightmost position that may
  // still grow, then reset everything after it to 0.
  while (true) {
    visit(rgs);
    for (std::size_t i = 1; i < n; ++i)
      prefix_max[i] = std::max(prefix_max[i - 1], rgs[i - 1]);
    std::size_t i = n - 1;
    while (i >= 1 && rgs[i] == prefix_max[i] + 1)
      --i;
    if (i == 0)
      return;
    ++rgs[i];
    std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0u);
  }
}

std::vector<SetPartition> enumerate_partitions(std::size_t n, std::size_t limit) {
  std::vector<SetPartition> out;
  for_each_restricted_growth(
      n, [&](std::span<const std::uint32_t> rgs) { out.push_back(SetPartition::from_restricted_growth(rgs)); },
      limit);
  return out;
}

std::vector<PairPartition> enumerate_pair_partitions(std::size_t n, std::size_t limit) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("pair partitions need a positive even ground size, got " + std::to_string(n));
  if (n > limit)
    throw ResourceLimitError("pair partition enumeration for n=" + std::to_string(n) + " refused", limit);
  std::vector<PairPartition> out;
  std::vector<std::uint32_t> rgs(n, 0);
  std::vector<std::uint8_t> block_size;
  // Depth-first over labels in increasing order yields lexicographic growth strings.
  auto rec = [&](auto&& self, std::size_t i, std::size_t open) -> void {
    if (i == n) {
      out.emplace_back(SetPartition::from_restricted_growth(rgs));
      return;
    }
    const std::size_t remaining = n - i;
    for (std::uint32_t label = 0; label <= block_size.size(); ++label) {
      if (label == block_size.size()) {
        // New block: needs a partner later.
        if (open + 1 > remaining - 1)
          continue;
        block_size.push_back(1);
        rgs[i] = label;
        self(self, i + 1, open + 1);
        block_size.pop_back();
      } else if (block_size[label] == 1) {
        block_size[label] = 2;
        rgs[i] = label;
        self(self, i + 1, open - 1);
        block_size[label] = 1;
      }
    }
  };
  rec(rec, 0, 0);
  return out;
}

SetPartition partition_from_labels(std::span<const std::uint64_t> labels) {
  std::unordered_map<std::uint64_t, std::uint32_t> first;
  std::vector<std::uint32_t> rgs;
  rgs.reserve(labels.size());
  for (auto l : labels) {
    auto [it, fresh] = first.emplace(l, static_cast<std::uint32_t>(first.size()));
    rgs.push_back(it->second);
  }
  return SetPartition::from_restricted_growth(rgs);
}

SetPartition random_partition(std::size_t n, std::mt19937_64& rng) {
  if (n == 0)
    throw std::invalid_argument("partition ground size must be positive");
  const auto k = std::uniform_int_distribution<std::uint64_t>(1, n)(rng);
  std::uniform_int_distribution<std::uint64_t> pick(0, k - 1);
  std::vector<std::uint64_t> labels(n);
  for (auto& l : labels)
    l = pick(rng);
  return partition_from_labels(labels);
}

PairPartition random_pair_partition(std::size_t n, std::mt19937_64& rng) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("pairings need a positive even ground size");
  std::vector<Element> order(n);
  std::iota(order.begin(), order.end(), Element{1});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Element>> blocks;
  for (std::size_t i = 0; i < n; i += 2)
    blocks.push_back({order[i], order[i + 1]});
  return PairPartition(SetPartition(n, std::move(blocks)));
}

mpz_class bell(std::size_t n) {
  // Bell triangle: each row starts with the last entry of the previous row.
  std::vector<mpz_class> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<mpz_class> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const auto& x : row)
      next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

mpz_class pair_partition_count(std::size_t n) {
  if (n % 2 != 0)
    return 0;
  // (n-1)!! = n! / (2^{n/2} (n/2)!)
  mpz_class r = 1;
  for (std::size_t k = 1; k < n; k += 2)
    r *= static_cast<unsigned long>(k);
  return r;
}

} // namespace bcclab
