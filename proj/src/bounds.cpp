#include "bcclab/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bcclab/partition.hpp"

namespace bcclab {

namespace {

mpz_class choose2(const mpz_class& s) { return s * (s - 1) / 2; }

std::string str(const mpq_class& q) { return q.get_str(); }

} // namespace

mpq_class pigeonhole_error_bound(std::size_t n, std::size_t t) {
  if (n < 9)
    throw std::invalid_argument("the pigeonhole bound needs n >= 9");
  const mpz_class m = static_cast<unsigned long>(n / 3);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 3, 2 * t);
  mpz_class s;
  mpz_cdiv_q(s.get_mpz_t(), m.get_mpz_t(), power.get_mpz_t());
  if (s < 2)
    return 0;
  mpq_class q(choose2(s), choose2(m));
  q.canonicalize();
  return q;
}

BoundReport pigeonhole_report(std::size_t n, std::size_t t) {
  BoundReport r;
  r.name = "pigeonhole_error_bound";
  r.parameters = {{"n", std::to_string(n)}, {"t", std::to_string(t)}};
  r.exact = pigeonhole_error_bound(n, t);
  r.value = r.exact->get_d();
  r.formula = "C(s,2)/C(floor(n/3),2), s = ceil(floor(n/3)/3^(2t))";
  return r;
}

double log2_exact(const mpz_class& x) {
  if (x <= 0)
    throw std::invalid_argument("log2 needs a positive integer");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

double entropy_comm_bound(std::size_t n, const mpq_class& eps) {
  if (eps < 0 || eps >= 1)
    throw std::invalid_argument("eps must lie in [0, 1)");
  if (n == 0)
    throw std::invalid_argument("n must be positive");
  const mpq_class keep = 1 - eps;
  return keep.get_d() * log2_exact(bell(n));
}

double entropy_comm_bound(std::size_t n, double eps) {
  if (!(eps >= 0 && eps < 1))
    throw std::invalid_argument("eps must lie in [0, 1)");
  return entropy_comm_bound(n, mpq_class(eps));
}

BoundReport entropy_report(std::size_t n, const mpq_class& eps) {
  BoundReport r;
  r.name = "entropy_comm_bound";
  r.parameters = {{"n", std::to_string(n)}, {"eps", str(eps)}};
  r.value = entropy_comm_bound(n, eps);
  r.formula = "(1-eps) log2 B_n bits";
  return r;
}

double bits_per_round(std::size_t n) { return 4.0 * static_cast<double>(n) * std::log2(3.0); }

std::size_t round_bound_from_comm(double comm_bits, std::size_t n) {
  if (!(comm_bits > 0) || n == 0)
    throw std::invalid_argument("communication and n must be positive");
  return static_cast<std::size_t>(std::ceil(comm_bits / bits_per_round(n)));
}

BoundReport round_report(double comm_bits, std::size_t n) {
  BoundReport r;
  r.name = "round_bound_from_comm";
  std::ostringstream c;
  c.precision(17);
  c << comm_bits;
  r.parameters = {{"comm_bits", c.str()}, {"n", std::to_string(n)}, {"bits_per_trit", "log2(3)"}};
  r.exact = mpq_class(static_cast<unsigned long>(round_bound_from_comm(comm_bits, n)));
  r.value = r.exact->get_d();
  r.formula = "ceil(comm_bits / (4 n log2 3))";
  return r;
}

mpq_class hard_distribution_mass(std::size_t family_size) {
  if (family_size == 0)
    throw std::invalid_argument("empty family");
  return mpq_class(1, 2 * static_cast<unsigned long>(family_size));
}

} // namespace bcclab
