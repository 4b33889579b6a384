#pragma once

#include <gmpxx.h>

#include <string>

namespace tmodel {

/// Coefficient ring: the integers or a prime field F_p.
class Ring {
 public:
  Ring() = default;

  static Ring integers() { return Ring{}; }
  /// Throws std::invalid_argument unless p is prime.
  static Ring prime_field(unsigned long p);

  bool is_field() const { return p_ != 0; }
  unsigned long characteristic() const { return p_; }

  void reduce(mpz_class& x) const {
    if (p_ != 0) mpz_fdiv_r_ui(x.get_mpz_t(), x.get_mpz_t(), p_);
  }
  mpz_class reduced(mpz_class x) const {
    reduce(x);
    return x;
  }
  /// Multiplicative inverse in F_p; x must be nonzero mod p.
  mpz_class inverse(const mpz_class& x) const;

  /// "Z" or "F<p>".
  std::string name() const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  explicit Ring(unsigned long p) : p_(p) {}
  unsigned long p_ = 0;
};

bool is_prime(unsigned long n);

}  // namespace tmodel
