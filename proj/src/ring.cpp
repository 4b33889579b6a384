#include "tmodel/ring.hpp"

#include <stdexcept>

namespace tmodel {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Ring Ring::prime_field(unsigned long p) {
  if (!is_prime(p)) throw std::invalid_argument("F_p requires prime p, got " + std::to_string(p));
  return Ring(p);
}

mpz_class Ring::inverse(const mpz_class& x) const {
  mpz_class r;
  mpz_class m(p_);
  if (p_ == 0 || mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("element not invertible in " + name());
  return r;
}

std::string Ring::name() const { return p_ == 0 ? "Z" : "F" + std::to_string(p_); }

}  // namespace tmodel
