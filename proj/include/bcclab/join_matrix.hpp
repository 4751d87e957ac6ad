#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bcclab/partition.hpp"

namespace bcclab {

enum class JoinMatrixKind : std::uint8_t { M, E };

std::string to_string(JoinMatrixKind kind);
JoinMatrixKind parse_join_matrix_kind(std::string_view text);

inline constexpr std::size_t kJoinMatrixLimitM = 7;
inline constexpr std::size_t kJoinMatrixLimitE = 10;
/// Dense storage is refused beyond this dimension.
inline constexpr std::size_t kJoinMatrixMaxDimension = 1000;

/// Square 0/1 matrix; entry (i, j) is 1 iff index[i] ∨ index[j] is the one-block
/// partition. Rows and columns follow the partition enumeration order.
class JoinMatrix {
public:
  JoinMatrixKind kind() const noexcept { return kind_; }
  std::size_t ground_size() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return index_.size(); }
  const std::vector<SetPartition>& index() const noexcept { return index_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return entries_[i * dimension() + j]; }
  std::span<const std::uint8_t> row(std::size_t i) const {
    return {entries_.data() + i * dimension(), dimension()};
  }
  /// FNV-1a over the formatted index, one partition per line.
  std::uint64_t index_hash() const;

  friend JoinMatrix build_join_matrix(JoinMatrixKind kind, std::size_t n, std::size_t limit);
  friend JoinMatrix read_join_matrix_binary(std::istream& in);

private:
  JoinMatrixKind kind_{JoinMatrixKind::M};
  std::size_t n_{0};
  std::vector<SetPartition> index_;
  std::vector<std::uint8_t> entries_;
};

/// limit == 0 selects the per-kind default (M: 7, E: 10).
JoinMatrix build_join_matrix(JoinMatrixKind kind, std::size_t n, std::size_t limit = 0);

/// Rank over the rationals of an arbitrary integer matrix (row-major, rows x cols)
/// using fraction-free Bareiss elimination on unbounded integers.
std::size_t exact_rank(std::span<const mpz_class> entries, std::size_t rows, std::size_t cols);
std::size_t exact_rank(const JoinMatrix& m);

/// True iff the principal submatrix on subset x subset has rank |subset|.
/// Throws std::invalid_argument for an out-of-range or repeated index.
bool verify_principal_submatrix_rank(const JoinMatrix& m, std::span<const std::size_t> subset);

struct RankReport {
  JoinMatrixKind kind;
  std::size_t n;
  std::size_t dimension;
  std::size_t rank;
  mpz_class expected;
  bool pass;
};

/// Builds the matrix, ranks it and compares against B_n (M) or the pairing count (E).
RankReport rank_report(JoinMatrixKind kind, std::size_t n, std::size_t limit = 0);

/// Text dump: a header line "# join-matrix kind=M n=3 dimension=5 index_hash=<hex>",
/// one "# index <i> <partition>" line per row, then the 0/1 rows separated by spaces.
void write_join_matrix_text(std::ostream& out, const JoinMatrix& m);

/// Binary dump, little-endian: magic "BCCJMAT1", u8 kind (0=M, 1=E), u32 n,
/// u32 dimension, u64 index hash, then dimension^2 bytes of entries row-major.
void write_join_matrix_binary(std::ostream& out, const JoinMatrix& m);
/// Reads a binary dump; the index is regenerated from (kind, n) and its hash checked.
JoinMatrix read_join_matrix_binary(std::istream& in);

} // namespace bcclab
