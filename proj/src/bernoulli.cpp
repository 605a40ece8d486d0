#include "qirr/bernoulli.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace qirr {

namespace {

// Tangent numbers T_1..T_N via the triangle of integer recurrences; then
// B_{2m} = (-1)^(m-1) * T_m * 2m / (2^(2m) (2^(2m) - 1)).
std::vector<Integer> tangent_numbers(unsigned count) {
  std::vector<Integer> t(count + 1);
  if (count == 0) return t;
  t[1] = 1;
  for (unsigned k = 2; k <= count; ++k) t[k] = t[k - 1] * (k - 1);
  for (unsigned k = 2; k <= count; ++k)
    for (unsigned j = k; j <= count; ++j)
      t[j] = t[j - 1] * (j - k) + t[j] * (j - k + 2);
  return t;
}

class BernoulliCache {
 public:
  const Rational& at(unsigned n) {
    {
      std::shared_lock lock(mutex_);
      if (n < values_.size()) return values_[n];
    }
    grow(n);
    std::shared_lock lock(mutex_);
    return values_[n];
  }

  void ensure(unsigned n) {
    {
      std::shared_lock lock(mutex_);
      if (n < values_.size()) return;
    }
    grow(n);
  }

 private:
  void grow(unsigned n) {
    std::unique_lock lock(mutex_);
    if (n < values_.size()) return;
    unsigned target = std::max<unsigned>(n, 16);
    target = std::max<unsigned>(target, 2 * static_cast<unsigned>(values_.size()));
    const unsigned count = target / 2 + 1;
    std::vector<Integer> t = tangent_numbers(count);
    if (values_.empty()) {
      values_.emplace_back(1);      // B_0
      values_.emplace_back(-1, 2);  // B_1
    }
    while (values_.size() <= target) {
      const unsigned idx = static_cast<unsigned>(values_.size());
      if (idx % 2 == 1) {
        values_.emplace_back(0);
        continue;
      }
      const unsigned m = idx / 2;
      Integer num = t[m] * (2 * m);
      if (m % 2 == 0) num = -num;
      Integer pow2(1);
      mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), 2 * m);
      values_.emplace_back(num, pow2 * (pow2 - 1));
    }
  }

  // deque: growth never invalidates references handed out to readers
  std::deque<Rational> values_;
  std::shared_mutex mutex_;
};

BernoulliCache& cache() {
  static BernoulliCache c;
  return c;
}

}  // namespace

const Rational& bernoulli_exact(unsigned n) { return cache().at(n); }

void bernoulli_ensure(unsigned n) { cache().ensure(n); }

Rational bernoulli_poly_at(unsigned n, long long a, long long q) {
  if (q < 1) throw std::domain_error("bernoulli_poly_at: q must be >= 1");
  if (a < 0 || a > q) throw std::domain_error("bernoulli_poly_at: need 0 <= a <= q");
  bernoulli_ensure(n);
  const Rational x(a, q);
  // powers x^0..x^n, then sum C(n,k) B_k x^(n-k)
  std::vector<Rational> xpow(n + 1);
  xpow[0] = Rational(1);
  for (unsigned j = 1; j <= n; ++j) xpow[j] = xpow[j - 1] * x;
  Rational acc;
  Integer binom;
  for (unsigned k = 0; k <= n; ++k) {
    if (k >= 3 && k % 2 == 1) continue;
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    acc += Rational(binom) * bernoulli_exact(k) * xpow[n - k];
  }
  return acc;
}

BernoulliModTable bernoulli_mod_table(long long p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::domain_error("bernoulli_mod_table: p must be an odd prime");
  if (p >= (1LL << 31))
    throw std::domain_error("bernoulli_mod_table: p too large for a residue table");
  BernoulliModTable table;
  table.p = p;
  table.even_residues.assign(static_cast<size_t>((p - 3) / 2 + 1), 0);
  table.even_residues[0] = 1;
  if (p == 3) return table;

  const std::uint64_t P = static_cast<std::uint64_t>(p);
  const std::vector<std::uint32_t> inv = inverse_table(static_cast<std::uint32_t>(p));
  const std::uint64_t b1 = P - inv[2];  // -1/2 mod p

  // B_n = -(1/(n+1)) sum_{k<n} C(n+1,k) B_k, odd-index terms beyond k=1 vanish
  for (std::uint64_t n = 2; n + 3 <= P; n += 2) {
    std::uint64_t sum = (1 + (n + 1) * b1) % P;
    std::uint64_t c = (n + 1) % P * n % P * inv[2] % P;  // C(n+1,2)
    for (std::uint64_t k = 2; k + 2 <= n; k += 2) {
      sum = (sum + c * table.even_residues[k / 2]) % P;
      c = c * (n + 1 - k) % P * (n - k) % P * inv[k + 1] % P * inv[k + 2] % P;
    }
    table.even_residues[n / 2] =
        static_cast<std::uint32_t>((P - sum) % P * inv[n + 1] % P);
  }
  return table;
}

}  // namespace qirr
