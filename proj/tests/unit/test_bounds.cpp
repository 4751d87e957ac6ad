#include <doctest.h>

#include <cmath>

#include "bcclab/bounds.hpp"
#include "bcclab/partition.hpp"

using namespace bcclab;

TEST_CASE("pigeonhole bound") {
  CHECK(pigeonhole_error_bound(9, 0) == 1);
  CHECK(pigeonhole_error_bound(100, 0) == 1);
  CHECK(pigeonhole_error_bound(81, 1) == mpq_class(1, 117));
  mpq_class unreduced(3, 351);
  unreduced.canonicalize();
  CHECK(pigeonhole_error_bound(81, 1) == unreduced);
  CHECK(pigeonhole_error_bound(2000, 1) == mpq_class(73, 5985));
  CHECK(pigeonhole_error_bound(2000, 2) == mpq_class(4, 24605));
  CHECK(pigeonhole_error_bound(81, 2) == 0);
  CHECK_THROWS_AS(pigeonhole_error_bound(8, 0), std::invalid_argument);
  for (std::size_t n = 9; n < 400; n += 7)
    for (std::size_t t = 0; t < 5; ++t)
      CHECK(pigeonhole_error_bound(n, t + 1) <= pigeonhole_error_bound(n, t));
  auto rep = pigeonhole_report(81, 1);
  REQUIRE(rep.exact);
  CHECK(*rep.exact == mpq_class(1, 117));
  CHECK(rep.value == doctest::Approx(1.0 / 117));
}

TEST_CASE("entropy bound") {
  CHECK(entropy_comm_bound(3, 0.0) == doctest::Approx(2.321928094887362).epsilon(1e-12));
  CHECK(entropy_comm_bound(6, mpq_class(1, 3)) == doctest::Approx(5.110223944790118).epsilon(1e-12));
  CHECK(entropy_comm_bound(64, 0.0) == doctest::Approx(216.70885945661234).epsilon(1e-12));
  for (std::size_t n : {5u, 20u, 300u})
    CHECK(entropy_comm_bound(n, mpq_class(1, 2)) == doctest::Approx(entropy_comm_bound(n, 0.0) / 2).epsilon(1e-12));
  CHECK_THROWS_AS(entropy_comm_bound(5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(entropy_comm_bound(5, -0.1), std::invalid_argument);
  CHECK(entropy_report(6, mpq_class(1, 3)).value == doctest::Approx(5.110223944790118));
}

TEST_CASE("log2 of big integers") {
  CHECK(log2_exact(mpz_class(1)) == 0.0);
  CHECK(log2_exact(mpz_class(1024)) == doctest::Approx(10.0));
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 3, 5000);
  CHECK(log2_exact(big) == doctest::Approx(5000 * std::log2(3.0)).epsilon(1e-12));
  CHECK(log2_exact(bell(64)) == doctest::Approx(216.70885945661234).epsilon(1e-12));
}

TEST_CASE("round bound") {
  for (std::size_t n : {1u, 8u, 64u}) {
    CHECK(round_bound_from_comm(bits_per_round(n), n) == 1);
    CHECK(round_bound_from_comm(bits_per_round(n) * 3.5, n) == 4);
  }
  CHECK(round_bound_from_comm(entropy_comm_bound(64, 0.0), 64) == 1);
  CHECK_THROWS_AS(round_bound_from_comm(0.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(round_bound_from_comm(1.0, 0), std::invalid_argument);
  CHECK(hard_distribution_mass(60) == mpq_class(1, 120));
}
