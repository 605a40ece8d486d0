#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qirr {

using Integer = mpz_class;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.  Zero is represented as 0/1.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(int value) : q_(value) {}
  Rational(long value) : q_(value) {}
  Rational(long long value) : q_(static_cast<long>(value)) {}
  Rational(const Integer& value) : q_(value) {}
  Rational(const Integer& num, const Integer& den);
  Rational(long long num, long long den);

  Integer numerator() const { return q_.get_num(); }
  Integer denominator() const { return q_.get_den(); }
  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }

  /// "n" when the denominator is 1, otherwise "n/d".
  std::string str() const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);
  Rational operator-() const;

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }

  const mpq_class& raw() const { return q_; }

 private:
  mpq_class q_;
};

/// Ascending list of every prime in the closed interval [lo, hi].
struct PrimeRange {
  long long lo = 0;
  long long hi = 0;
  std::vector<long long> primes;
};

/// Segmented sieve over [lo, hi]; requires 2 <= lo <= hi.
PrimeRange primes_in_range(long long lo, long long hi);

/// All primes <= n, ascending.
std::vector<long long> primes_up_to(long long n);

/// Deterministic for every n < 2^63 (strong-pseudoprime test with a fixed
/// witness set); n >= 0.
bool is_prime(long long n);

/// p-adic valuation of a nonzero integer.
long valuation(const Integer& n, long long p);

/// p-adic valuation of a rational; std::nullopt marks v_p(0) = +infinity.
std::optional<long> valuation(const Rational& q, long long p);

/// Inverse of a modulo a prime p, in [1, p-1].  Throws if p | a.
long long mod_inverse(long long a, long long p);

// Modular helpers shared by the Bernoulli/L-value tables.  All of them
// assume an odd prime modulus p < 2^31 so that plain 64-bit products
// never overflow.
inline std::uint64_t mulmod_small(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a * b % p;
}
std::uint64_t mulmod_wide(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_wide(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// inv[i] = i^{-1} mod p for 1 <= i < p (inv[0] unused).
std::vector<std::uint32_t> inverse_table(std::uint32_t p);

}  // namespace qirr
