#include "bcclab/join_matrix.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "bcclab/errors.hpp"

namespace bcclab {

std::string to_string(JoinMatrixKind kind) { return kind == JoinMatrixKind::M ? "M" : "E"; }

JoinMatrixKind parse_join_matrix_kind(std::string_view text) {
  if (text == "M" || text == "m")
    return JoinMatrixKind::M;
  if (text == "E" || text == "e")
    return JoinMatrixKind::E;
  throw std::invalid_argument("unknown matrix kind '" + std::string(text) + "' (expected M or E)");
}

std::uint64_t JoinMatrix::index_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& p : index_) {
    for (char c : p.format() + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

namespace {

std::vector<SetPartition> matrix_index(JoinMatrixKind kind, std::size_t n, std::size_t limit) {
  if (limit == 0)
    limit = kind == JoinMatrixKind::M ? kJoinMatrixLimitM : kJoinMatrixLimitE;
  if (n > limit)
    throw ResourceLimitError("join matrix " + to_string(kind) + " for n=" + std::to_string(n) + " refused",
                             limit);
  std::vector<SetPartition> index;
  if (kind == JoinMatrixKind::M) {
    index = enumerate_partitions(n, std::max(limit, n));
  } else {
    for (auto& pp : enumerate_pair_partitions(n, std::max(limit, n)))
      index.push_back(pp.partition());
  }
  if (index.size() > kJoinMatrixMaxDimension)
    throw ResourceLimitError("join matrix dimension " + std::to_string(index.size()) + " exceeds dense storage",
                             kJoinMatrixMaxDimension);
  return index;
}

} // namespace

JoinMatrix build_join_matrix(JoinMatrixKind kind, std::size_t n, std::size_t limit) {
  JoinMatrix m;
  m.kind_ = kind;
  m.n_ = n;
  m.index_ = matrix_index(kind, n, limit);
  const std::size_t d = m.index_.size();
  m.entries_.assign(d * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      std::uint8_t v = join(m.index_[i], m.index_[j]).is_trivial() ? 1 : 0;
      m.entries_[i * d + j] = v;
      m.entries_[j * d + i] = v;
    }
  return m;
}

std::size_t exact_rank(std::span<const mpz_class> entries, std::size_t rows, std::size_t cols) {
  if (entries.size() != rows * cols)
    throw std::invalid_argument("exact_rank: entry count does not match shape");
  std::vector<mpz_class> a(entries.begin(), entries.end());
  auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * cols + c]; };
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && sgn(at(pivot, c)) == 0)
      ++pivot;
    if (pivot == rows)
      continue;
    if (pivot != rank)
      for (std::size_t k = 0; k < cols; ++k)
        std::swap(at(pivot, k), at(rank, k));
    const mpz_class& p = at(rank, c);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      mpz_class factor = at(r, c);
      for (std::size_t k = c + 1; k < cols; ++k) {
        mpz_class& x = at(r, k);
        x = p * x - factor * at(rank, k);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      at(r, c) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

std::size_t exact_rank(const JoinMatrix& m) {
  const std::size_t d = m.dimension();
  std::vector<mpz_class> e(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      e[i * d + j] = m.at(i, j);
  return exact_rank(e, d, d);
}

bool verify_principal_submatrix_rank(const JoinMatrix& m, std::span<const std::size_t> subset) {
  std::vector<bool> used(m.dimension(), false);
  for (auto i : subset) {
    if (i >= m.dimension())
      throw std::invalid_argument("principal subset index " + std::to_string(i) + " out of range");
    if (used[i])
      throw std::invalid_argument("principal subset index " + std::to_string(i) + " repeated");
    used[i] = true;
  }
  const std::size_t s = subset.size();
  if (s == 0)
    return true;
  std::vector<mpz_class> e(s * s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      e[i * s + j] = m.at(subset[i], subset[j]);
  return exact_rank(e, s, s) == s;
}

RankReport rank_report(JoinMatrixKind kind, std::size_t n, std::size_t limit) {
  auto m = build_join_matrix(kind, n, limit);
  RankReport r{kind, n, m.dimension(), exact_rank(m), 0, false};
  r.expected = kind == JoinMatrixKind::M ? bell(n) : pair_partition_count(n);
  r.pass = r.expected == r.rank && r.rank == r.dimension;
  return r;
}

void write_join_matrix_text(std::ostream& out, const JoinMatrix& m) {
  std::array<char, 17> hex{};
  std::snprintf(hex.data(), hex.size(), "%016llx", static_cast<unsigned long long>(m.index_hash()));
  out << "# join-matrix kind=" << to_string(m.kind()) << " n=" << m.ground_size()
      << " dimension=" << m.dimension() << " index_hash=" << hex.data() << '\n';
  for (std::size_t i = 0; i < m.dimension(); ++i)
    out << "# index " << i << ' ' << m.index()[i].format() << '\n';
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    for (std::size_t j = 0; j < m.dimension(); ++j)
      out << (j ? " " : "") << static_cast<int>(m.at(i, j));
    out << '\n';
  }
}

namespace {

constexpr std::array<char, 8> kMagic{'B', 'C', 'C', 'J', 'M', 'A', 'T', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::istream& in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    int c = in.get();
    if (c == EOF)
      throw std::invalid_argument("join matrix dump truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

} // namespace

void write_join_matrix_binary(std::ostream& out, const JoinMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint8_t>(out, m.kind() == JoinMatrixKind::M ? 0 : 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.ground_size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.dimension()));
  put_le<std::uint64_t>(out, m.index_hash());
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    auto r = m.row(i);
    out.write(reinterpret_cast<const char*>(r.data()), static_cast<std::streamsize>(r.size()));
  }
}

JoinMatrix read_join_matrix_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic)
    throw std::invalid_argument("not a join matrix dump (bad magic)");
  auto kind_byte = get_le<std::uint8_t>(in);
  if (kind_byte > 1)
    throw std::invalid_argument("join matrix dump has unknown kind");
  JoinMatrix m;
  m.kind_ = kind_byte == 0 ? JoinMatrixKind::M : JoinMatrixKind::E;
  m.n_ = get_le<std::uint32_t>(in);
  auto dimension = get_le<std::uint32_t>(in);
  auto hash = get_le<std::uint64_t>(in);
  m.index_ = matrix_index(m.kind_, m.n_, std::max<std::size_t>(m.n_, 1));
  if (m.index_.size() != dimension || m.index_hash() != hash)
    throw std::invalid_argument("join matrix dump index does not match (kind, n)");
  m.entries_.resize(static_cast<std::size_t>(dimension) * dimension);
  in.read(reinterpret_cast<char*>(m.entries_.data()), static_cast<std::streamsize>(m.entries_.size()));
  if (!in)
    throw std::invalid_argument("join matrix dump truncated");
  return m;
}

} // namespace bcclab
