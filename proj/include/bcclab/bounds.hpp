#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace bcclab {

/// One evaluated bound. `exact` is present when the value is rational in the inputs.
struct BoundReport {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::optional<mpq_class> exact;
  double value{0};
  std::string formula;
};

/// s = ceil(floor(n/3) / 3^(2t)); C(s,2) / C(floor(n/3),2), or 0 when s < 2.
/// Throws std::invalid_argument for n < 9.
mpq_class pigeonhole_error_bound(std::size_t n, std::size_t t);
BoundReport pigeonhole_report(std::size_t n, std::size_t t);

/// log2 of a positive integer to double precision.
double log2_exact(const mpz_class& x);

/// (1 - eps) log2 B_n bits. Throws std::invalid_argument unless 0 <= eps < 1.
double entropy_comm_bound(std::size_t n, const mpq_class& eps);
double entropy_comm_bound(std::size_t n, double eps);
BoundReport entropy_report(std::size_t n, const mpq_class& eps);

/// Bits carried per simulated round: 4n trits, log2(3) bits each.
double bits_per_round(std::size_t n);
/// ceil(comm_bits / (4 n log2 3)). Throws std::invalid_argument unless both are positive.
std::size_t round_bound_from_comm(double comm_bits, std::size_t n);
BoundReport round_report(double comm_bits, std::size_t n);

/// Probability of one instance under the hard distribution: 1 / (2 |family|).
mpq_class hard_distribution_mass(std::size_t family_size);

} // namespace bcclab
