#include <doctest.h>

#include <random>
#include <sstream>

#include "bcclab/errors.hpp"
#include "bcclab/join_matrix.hpp"

using namespace bcclab;

namespace {

// Plain Gaussian elimination over the rationals.
std::size_t rational_rank(std::vector<std::vector<mpq_class>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0)
      ++pivot;
    if (pivot == rows)
      continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0)
        continue;
      mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k)
        a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<mpq_class>> as_rational(const JoinMatrix& m) {
  std::vector<std::vector<mpq_class>> a(m.dimension(), std::vector<mpq_class>(m.dimension()));
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (std::size_t j = 0; j < m.dimension(); ++j)
      a[i][j] = m.at(i, j);
  return a;
}

} // namespace

TEST_CASE("M^n has full rank B_n") {
  const std::vector<std::size_t> dims{1, 2, 5, 15, 52, 203};
  for (std::size_t n = 1; n <= 6; ++n) {
    auto m = build_join_matrix(JoinMatrixKind::M, n);
    CHECK(m.dimension() == dims[n - 1]);
    CHECK(exact_rank(m) == dims[n - 1]);
  }
}

TEST_CASE("E^n has full rank equal to the pairing count") {
  const std::vector<std::size_t> dims{1, 3, 15, 105};
  for (std::size_t n = 2; n <= 8; n += 2) {
    auto r = rank_report(JoinMatrixKind::E, n);
    CHECK(r.dimension == dims[n / 2 - 1]);
    CHECK(r.rank == dims[n / 2 - 1]);
    CHECK(r.pass);
  }
}

#ifdef BCCLAB_LONG_TESTS
TEST_CASE("long: M^7 and E^10") {
  CHECK(rank_report(JoinMatrixKind::M, 7).pass);
  CHECK(rank_report(JoinMatrixKind::E, 10).pass);
}
#endif

TEST_CASE("Bareiss rank agrees with rational elimination") {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto m = build_join_matrix(JoinMatrixKind::M, n);
    CHECK(exact_rank(m) == rational_rank(as_rational(m)));
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    const auto cols = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
    const auto rank_cap = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    // Low-rank products exercise column skipping.
    std::uniform_int_distribution<int> val(-3, 3);
    std::vector<std::vector<mpq_class>> l(rows, std::vector<mpq_class>(rank_cap));
    std::vector<std::vector<mpq_class>> r(rank_cap, std::vector<mpq_class>(cols));
    for (auto& row : l)
      for (auto& x : row)
        x = val(rng);
    for (auto& row : r)
      for (auto& x : row)
        x = val(rng);
    std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols, 0));
    std::vector<mpz_class> flat;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t k = 0; k < rank_cap; ++k)
          a[i][j] += l[i][k] * r[k][j];
        flat.push_back(a[i][j].get_num());
      }
    CHECK(exact_rank(flat, rows, cols) == rational_rank(a));
  }
}

TEST_CASE("entries are join-is-trivial indicators") {
  auto m = build_join_matrix(JoinMatrixKind::M, 4);
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (std::size_t j = 0; j < m.dimension(); ++j)
      CHECK(m.at(i, j) == (join(m.index()[i], m.index()[j]).is_trivial() ? 1 : 0));
  // Row of the one-block partition is all ones; the finest partition meets only it.
  CHECK(m.at(0, 0) == 1);
  const auto last = m.dimension() - 1;
  std::size_t ones = 0;
  for (auto x : m.row(last))
    ones += x;
  CHECK(ones == 1);
}

TEST_CASE("principal submatrix rank") {
  auto m = build_join_matrix(JoinMatrixKind::M, 4);
  std::vector<std::size_t> all(m.dimension());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;
  CHECK(verify_principal_submatrix_rank(m, all));
  CHECK(verify_principal_submatrix_rank(m, std::vector<std::size_t>{}));
  CHECK_THROWS_AS(verify_principal_submatrix_rank(m, std::vector<std::size_t>{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(verify_principal_submatrix_rank(m, std::vector<std::size_t>{99}), std::invalid_argument);
}

TEST_CASE("limits") {
  CHECK_THROWS_AS(build_join_matrix(JoinMatrixKind::M, 8), ResourceLimitError);
  CHECK_THROWS_AS(build_join_matrix(JoinMatrixKind::E, 12), ResourceLimitError);
  CHECK_THROWS_AS(build_join_matrix(JoinMatrixKind::E, 5), std::invalid_argument);
}

TEST_CASE("binary and text dumps") {
  auto m = build_join_matrix(JoinMatrixKind::E, 6);
  std::stringstream bin;
  write_join_matrix_binary(bin, m);
  auto back = read_join_matrix_binary(bin);
  CHECK(back.kind() == m.kind());
  CHECK(back.dimension() == m.dimension());
  CHECK(back.index_hash() == m.index_hash());
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (std::size_t j = 0; j < m.dimension(); ++j)
      CHECK(back.at(i, j) == m.at(i, j));

  std::string bytes = bin.str();
  bytes[0] = 'X';
  std::stringstream bad(bytes);
  CHECK_THROWS(read_join_matrix_binary(bad));

  std::ostringstream text;
  write_join_matrix_text(text, build_join_matrix(JoinMatrixKind::M, 2));
  CHECK(text.str().rfind("# join-matrix kind=M n=2 dimension=2", 0) == 0);
}
