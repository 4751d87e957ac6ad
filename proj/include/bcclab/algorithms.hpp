#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bcclab/bcc.hpp"

namespace bcclab {

/// Broadcasts 1 every round and accepts. Round budget: 0.
class AlwaysYes final : public Algorithm {
public:
  std::string name() const override { return "always-yes"; }
  std::unique_ptr<VertexProgram> instantiate(const VertexView& view) const override;
};

/// Broadcasts ⊥ every round and accepts. Round budget: 0.
class AlwaysSilent final : public Algorithm {
public:
  std::string name() const override { return "always-silent"; }
  std::unique_ptr<VertexProgram> instantiate(const VertexView& view) const override;
};

/// KT-1 connectivity for input graphs of maximum degree d.
///
/// Each vertex broadcasts its ascending neighbor-id list in d slots of w bits
/// (least significant bit first); unused slots are all ⊥. w is the bit width of
/// the largest id in the roster, so the round budget is d * w. After the budget
/// every vertex holds the whole input graph and answers YES iff it is connected;
/// before that it answers YES. Vertices with more than d neighbors send the
/// first d.
class FullExchangeSparse final : public Algorithm {
public:
  explicit FullExchangeSparse(std::size_t max_degree = 2) : max_degree_(max_degree) {}
  std::string name() const override { return "full-exchange-sparse"; }
  std::unique_ptr<VertexProgram> instantiate(const VertexView& view) const override;
  std::size_t max_degree() const noexcept { return max_degree_; }
  /// d * bit_width(max_id).
  static std::size_t round_budget(VertexId max_id, std::size_t max_degree);

private:
  std::size_t max_degree_;
};

/// KT-0 lift of FullExchangeSparse.
///
/// Phase 1 (w rounds): every vertex broadcasts its own id bit-serially, least
/// significant bit first, so each vertex learns the id behind every port.
/// Phase 2 (d * w rounds): the FullExchangeSparse exchange, using the learned
/// ids. w defaults to bit_width(n - 1), which covers the default ids 0..n-1.
/// Round budget: w * (1 + d).
class IdExchange final : public Algorithm {
public:
  explicit IdExchange(std::size_t max_degree = 2, std::size_t id_bits = 0)
      : max_degree_(max_degree), id_bits_(id_bits) {}
  std::string name() const override { return "id-exchange"; }
  std::unique_ptr<VertexProgram> instantiate(const VertexView& view) const override;
  std::size_t id_bits_for(std::size_t n) const;
  std::size_t round_budget(std::size_t n) const { return id_bits_for(n) * (1 + max_degree_); }

private:
  std::size_t max_degree_;
  std::size_t id_bits_;
};

/// A pseudo-random deterministic algorithm: each broadcast is a seeded hash of
/// the vertex's complete local state (view plus everything received so far).
/// silence_per_mille biases the output toward ⊥. Used to exercise the
/// simulator and the crossing property on arbitrary port-sensitive behavior.
class RandomTableAlgorithm final : public Algorithm {
public:
  RandomTableAlgorithm(std::uint64_t seed, unsigned silence_per_mille)
      : seed_(seed), silence_per_mille_(silence_per_mille) {}
  std::string name() const override;
  std::unique_ptr<VertexProgram> instantiate(const VertexView& view) const override;

private:
  std::uint64_t seed_;
  unsigned silence_per_mille_;
};

struct AlgorithmInfo {
  std::string name;
  std::string modes;
  std::string round_budget;
  std::string description;
};

/// The shipped deterministic algorithms with their round-budget formulas.
std::vector<AlgorithmInfo> reference_algorithms();

struct AlgorithmParams {
  std::size_t max_degree = 2;
  std::size_t id_bits = 0;  // 0 = derive from n
};

/// Looks up a reference algorithm by name. Throws std::invalid_argument if unknown.
std::unique_ptr<Algorithm> make_algorithm(std::string_view name, const AlgorithmParams& params = {});

/// Smallest w with 2^w > x, at least 1.
std::size_t id_bit_width(std::uint64_t x);

} // namespace bcclab
