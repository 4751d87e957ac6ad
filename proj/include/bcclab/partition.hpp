#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace bcclab {

/// Elements of the ground set {1..n}. All public interfaces are 1-indexed.
using Element = std::uint32_t;

inline constexpr std::size_t kPartitionEnumerationLimit = 12;
inline constexpr std::size_t kPairPartitionEnumerationLimit = 14;

/// A partition of {1..n} held in canonical form: elements ascending inside each
/// block, blocks ordered by their minimum element, no empty blocks.
///
/// The canonical block index of an element equals its entry in the
/// restricted growth string, which is also the basis of the enumeration order.
class SetPartition {
public:
  /// Validates and canonicalizes. Empty blocks are dropped.
  /// Throws std::invalid_argument when the blocks overlap, leave gaps or name
  /// elements outside {1..ground_size}.
  SetPartition(std::size_t ground_size, std::vector<std::vector<Element>> blocks);

  /// Builds a partition from a restricted growth string (label per element, 0-based).
  static SetPartition from_restricted_growth(std::span<const std::uint32_t> rgs);
  /// All singletons; the identity of join.
  static SetPartition finest(std::size_t n);
  /// The one-block partition 𝟏; absorbing under join.
  static SetPartition trivial(std::size_t n);
  /// Parses "(1,2)(3,4)(5)". Throws ParseError with the offending offset.
  static SetPartition parse(std::string_view text);

  std::string format() const;

  std::size_t ground_size() const noexcept { return labels_.size(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<Element>>& blocks() const noexcept { return blocks_; }
  /// Canonical block index (0-based) holding element e (1-based).
  std::size_t block_of(Element e) const { return labels_.at(e - 1); }
  const std::vector<std::uint32_t>& restricted_growth_string() const noexcept { return labels_; }

  bool is_trivial() const noexcept { return blocks_.size() == 1; }
  bool is_pairing() const noexcept;

  friend bool operator==(const SetPartition& a, const SetPartition& b) { return a.labels_ == b.labels_; }
  /// Restricted-growth-string lexicographic order (the enumeration order).
  friend bool operator<(const SetPartition& a, const SetPartition& b) { return a.labels_ < b.labels_; }

private:
  SetPartition() = default;
  void rebuild_blocks();

  std::vector<std::uint32_t> labels_;
  std::vector<std::vector<Element>> blocks_;
};

/// A partition whose blocks all have exactly two elements.
class PairPartition {
public:
  /// Throws std::invalid_argument unless every block has size 2.
  explicit PairPartition(SetPartition p);
  static PairPartition parse(std::string_view text) { return PairPartition(SetPartition::parse(text)); }

  const SetPartition& partition() const noexcept { return p_; }
  operator const SetPartition&() const noexcept { return p_; }
  std::size_t ground_size() const noexcept { return p_.ground_size(); }
  std::string format() const { return p_.format(); }

  friend bool operator==(const PairPartition& a, const PairPartition& b) { return a.p_ == b.p_; }

private:
  SetPartition p_;
};

/// Finest common coarsening. Throws std::invalid_argument on ground-size mismatch.
SetPartition join(const SetPartition& p, const SetPartition& q);

/// True iff every block of p lies inside some block of q.
bool is_refinement(const SetPartition& p, const SetPartition& q);

/// Visits every partition of {1..n} in restricted-growth-string lexicographic
/// order. The callback receives the growth string (0-based labels).
void for_each_restricted_growth(std::size_t n,
                                const std::function<void(std::span<const std::uint32_t>)>& visit,
                                std::size_t limit = kPartitionEnumerationLimit);

/// Every partition of {1..n} exactly once, in restricted-growth-string order.
/// Index i of the result is the stable matrix index of that partition.
std::vector<SetPartition> enumerate_partitions(std::size_t n,
                                               std::size_t limit = kPartitionEnumerationLimit);

/// Every perfect pairing of {1..n}, in the same order as they appear in
/// enumerate_partitions(n). Throws std::invalid_argument for odd or zero n.
std::vector<PairPartition> enumerate_pair_partitions(std::size_t n,
                                                     std::size_t limit = kPairPartitionEnumerationLimit);

/// Canonical partition from arbitrary labels: equal labels share a block.
SetPartition partition_from_labels(std::span<const std::uint64_t> labels);

/// Random partition: a block count k uniform in 1..n, then a uniform label per element.
SetPartition random_partition(std::size_t n, std::mt19937_64& rng);
/// Uniformly random perfect pairing of {1..n}; n even.
PairPartition random_pair_partition(std::size_t n, std::mt19937_64& rng);

/// Exact Bell number via the Bell triangle.
mpz_class bell(std::size_t n);

/// n! / (2^{n/2} (n/2)!) for even n, else 0.
mpz_class pair_partition_count(std::size_t n);

} // namespace bcclab
