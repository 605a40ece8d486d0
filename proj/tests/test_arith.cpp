#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qirr/arith.hpp"

using namespace qirr;

namespace {

// independent oracle: trial division
bool trial_division_prime(long long n) {
  if (n < 2) return false;
  for (long long q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("primes_in_range small intervals") {
  const PrimeRange r = primes_in_range(10, 30);
  CHECK(r.primes == std::vector<long long>{11, 13, 17, 19, 23, 29});
  CHECK(primes_in_range(24, 28).primes.empty());
  CHECK(primes_in_range(2, 2).primes == std::vector<long long>{2});
  CHECK_THROWS_AS(primes_in_range(1, 10), std::domain_error);
  CHECK_THROWS_AS(primes_in_range(30, 10), std::domain_error);
}

TEST_CASE("primes_in_range agrees with trial division up to 1e5") {
  const PrimeRange r = primes_in_range(2, 100000);
  std::vector<long long> oracle;
  for (long long n = 2; n <= 100000; ++n)
    if (trial_division_prime(n)) oracle.push_back(n);
  CHECK(r.primes == oracle);
}

TEST_CASE("primes_in_range over [1e6, 2e6]") {
  const PrimeRange r = primes_in_range(1000000, 2000000);
  size_t oracle = 0;
  for (long long n = 1000000; n <= 2000000; ++n)
    if (trial_division_prime(n)) ++oracle;
  CHECK(r.primes.size() == oracle);
  CHECK(r.primes.size() == 70435);
}

TEST_CASE("is_prime") {
  CHECK(is_prime(2));
  CHECK(is_prime(1017299));
  CHECK_FALSE(is_prime(1000000));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));                    // Carmichael
  CHECK(is_prime(2305843009213693951));          // 2^61 - 1
  CHECK_FALSE(is_prime(2305843009213693953));
  for (long long n = 0; n <= 2000; ++n) CHECK(is_prime(n) == trial_division_prime(n));
}

TEST_CASE("valuation") {
  CHECK(valuation(Rational(18, 5), 3) == 2);
  CHECK(valuation(Rational(18, 5), 5) == -1);
  CHECK(valuation(Rational(1), 7) == 0);
  CHECK_FALSE(valuation(Rational(0), 7).has_value());
}

TEST_CASE("valuation is multiplicative") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<long long> num(-500, 500);
  std::uniform_int_distribution<long long> den(1, 500);
  const long long primes[] = {2, 3, 5, 7, 11, 13};
  std::uniform_int_distribution<int> pick(0, 5);
  int done = 0;
  while (done < 1000) {
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    if (a.is_zero() || b.is_zero()) continue;
    const long long p = primes[pick(rng)];
    CHECK(*valuation(a * b, p) == *valuation(a, p) + *valuation(b, p));
    ++done;
  }
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(5, 7) == 3);
  CHECK(mod_inverse(1, 101) == 1);
  CHECK(mod_inverse(6, 7) == 6);
  CHECK(mod_inverse(-1, 7) == 6);
  CHECK_THROWS_AS(mod_inverse(14, 7), std::domain_error);
  for (long long a = 1; a < 101; ++a) CHECK(a * mod_inverse(a, 101) % 101 == 1);
}

TEST_CASE("rational invariants and exactness") {
  const Rational q(-6, 4);
  CHECK(q.numerator() == -3);
  CHECK(q.denominator() == 2);
  CHECK(Rational(0, 5).denominator() == 1);
  CHECK(Rational(2, -4).numerator() == -1);
  CHECK(Rational(2, -4).denominator() == 2);
  CHECK_THROWS_AS(Rational(Integer(1), Integer(0)), std::domain_error);
  CHECK(Rational(1, 3).str() == "1/3");
  CHECK(Rational(-4, 2).str() == "-2");

  std::mt19937 rng(777);
  std::uniform_int_distribution<long long> num(-90, 90);
  std::uniform_int_distribution<long long> den(1, 90);
  for (int i = 0; i < 500; ++i) {
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    const Rational lhs = a * (b + c), rhs = a * b + a * c;
    CHECK(lhs == rhs);
    CHECK(lhs.numerator() == rhs.numerator());
    CHECK(lhs.denominator() == rhs.denominator());
  }
}

TEST_CASE("inverse_table and modular helpers") {
  const auto inv = inverse_table(4999);
  for (std::uint32_t i = 1; i < 4999; ++i)
    CHECK(static_cast<std::uint64_t>(i) * inv[i] % 4999 == 1);

  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t m = (rng() % ((1ULL << 62) - 3)) + 2;
    const std::uint64_t a = rng() % m, b = rng() % m;
    const auto slow = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
    CHECK(mulmod_wide(a, b, m) == slow);
  }
  CHECK(powmod_wide(3, 100, 101) == 1);  // Fermat
}
