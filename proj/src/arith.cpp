#include "qirr/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qirr {

Rational::Rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw std::domain_error("Rational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(long long num, long long den)
    : Rational(Integer(static_cast<long>(num)), Integer(static_cast<long>(den))) {}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  q_ /= o.q_;
  return *this;
}

Rational Rational::operator-() const {
  Rational r;
  r.q_ = -q_;
  return r;
}

std::string Rational::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

static long long isqrt_ll(long long n) {
  if (n < 0) return -1;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<long long> primes_up_to(long long n) {
  std::vector<long long> out;
  if (n < 2) return out;
  std::vector<char> comp(static_cast<size_t>(n) + 1, 0);
  for (long long i = 2; i * i <= n; ++i)
    if (!comp[i])
      for (long long j = i * i; j <= n; j += i) comp[j] = 1;
  for (long long i = 2; i <= n; ++i)
    if (!comp[i]) out.push_back(i);
  return out;
}

PrimeRange primes_in_range(long long lo, long long hi) {
  if (lo < 2) throw std::domain_error("primes_in_range: lo must be >= 2");
  if (lo > hi) throw std::domain_error("primes_in_range: lo must be <= hi");
  PrimeRange out;
  out.lo = lo;
  out.hi = hi;
  const std::vector<long long> base = primes_up_to(isqrt_ll(hi));
  constexpr long long kSegment = 1 << 20;
  std::vector<char> comp;
  for (long long start = lo; start <= hi; start += kSegment) {
    const long long end = std::min(hi, start + kSegment - 1);
    comp.assign(static_cast<size_t>(end - start + 1), 0);
    for (long long q : base) {
      // q itself stays unmarked: crossing off starts at q*q
      long long first = std::max(q * q, (start + q - 1) / q * q);
      for (long long j = first; j <= end; j += q) comp[j - start] = 1;
    }
    for (long long v = start; v <= end; ++v)
      if (!comp[v - start]) out.primes.push_back(v);
  }
  return out;
}

std::uint64_t mulmod_wide(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_wide(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_wide(r, base, m);
    base = mulmod_wide(base, base, m);
    exp >>= 1;
  }
  return r;
}

bool is_prime(long long n) {
  if (n < 0) throw std::domain_error("is_prime: n must be >= 0");
  if (n < 2) return false;
  for (long long q : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL, 17LL, 19LL, 23LL, 29LL, 31LL, 37LL}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  const std::uint64_t u = static_cast<std::uint64_t>(n);
  std::uint64_t d = u - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_wide(a, d, u);
    if (x == 1 || x == u - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_wide(x, x, u);
      if (x == u - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

long valuation(const Integer& n, long long p) {
  if (sgn(n) == 0) throw std::domain_error("valuation: zero integer");
  if (p < 2) throw std::domain_error("valuation: p must be >= 2");
  Integer rem, fac(static_cast<long>(p));
  return static_cast<long>(mpz_remove(rem.get_mpz_t(), n.get_mpz_t(), fac.get_mpz_t()));
}

std::optional<long> valuation(const Rational& q, long long p) {
  if (q.is_zero()) return std::nullopt;
  long v = 0;
  Integer num = q.numerator();
  if (sgn(num) != 0) v += valuation(num, p);
  Integer den = q.denominator();
  if (den != 1) v -= valuation(den, p);
  return v;
}

long long mod_inverse(long long a, long long p) {
  if (p < 2) throw std::domain_error("mod_inverse: p must be >= 2");
  long long r = a % p;
  if (r < 0) r += p;
  if (r == 0) throw std::domain_error("mod_inverse: a divisible by p");
  // extended Euclid on (r, p)
  long long t = 0, new_t = 1, n = p, new_n = r;
  while (new_n != 0) {
    long long q = n / new_n;
    long long tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = n - q * new_n;
    n = new_n;
    new_n = tmp;
  }
  if (n != 1) throw std::domain_error("mod_inverse: a not invertible");
  if (t < 0) t += p;
  return t;
}

std::vector<std::uint32_t> inverse_table(std::uint32_t p) {
  std::vector<std::uint32_t> inv(p);
  if (p < 2) return inv;
  inv[1] = 1;
  for (std::uint32_t i = 2; i < p; ++i)
    inv[i] = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(p - p / i) * inv[p % i] % p);
  return inv;
}

}  // namespace qirr
