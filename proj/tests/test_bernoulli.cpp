#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qirr/bernoulli.hpp"

using namespace qirr;

namespace {

// independent oracle: the defining recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0
std::vector<Rational> recurrence_bernoulli(unsigned nmax) {
  std::vector<Rational> b(nmax + 1);
  b[0] = Rational(1);
  Integer binom;
  for (unsigned n = 1; n <= nmax; ++n) {
    Rational sum;
    for (unsigned k = 0; k < n; ++k) {
      mpz_bin_uiui(binom.get_mpz_t(), n + 1, k);
      sum += Rational(binom) * b[k];
    }
    b[n] = -(sum / Rational(static_cast<long>(n) + 1));
  }
  return b;
}

}  // namespace

TEST_CASE("bernoulli_exact known values") {
  CHECK(bernoulli_exact(0) == Rational(1));
  CHECK(bernoulli_exact(1) == Rational(-1, 2));
  CHECK(bernoulli_exact(2) == Rational(1, 6));
  CHECK(bernoulli_exact(12) == Rational(-691, 2730));
  CHECK(bernoulli_exact(3) == Rational(0));
  CHECK(bernoulli_exact(17) == Rational(0));
}

TEST_CASE("bernoulli_exact matches the recurrence oracle up to 60") {
  const auto oracle = recurrence_bernoulli(60);
  for (unsigned n = 0; n <= 60; ++n) CHECK(bernoulli_exact(n) == oracle[n]);
}

TEST_CASE("von Staudt-Clausen denominators") {
  for (unsigned m = 1; 2 * m <= 60; ++m) {
    Integer expected = 1;
    for (long long q = 2; q <= static_cast<long long>(2 * m) + 1; ++q)
      if (is_prime(q) && (2 * m) % (q - 1) == 0) expected *= static_cast<long>(q);
    CHECK(bernoulli_exact(2 * m).denominator() == expected);
  }
}

TEST_CASE("the classical irregular pair (37, 32)") {
  const Integer num = bernoulli_exact(32).numerator();
  CHECK(valuation(num, 37) >= 1);
}

TEST_CASE("bernoulli_poly_at") {
  CHECK(bernoulli_poly_at(2, 0, 1) == Rational(1, 6));
  CHECK(bernoulli_poly_at(2, 1, 5) == Rational(1, 150));
  CHECK(bernoulli_poly_at(4, 1, 8) == Rational(-1313, 61440));
  CHECK(bernoulli_poly_at(0, 1, 2) == Rational(1));
  CHECK_THROWS_AS(bernoulli_poly_at(2, 3, 2), std::domain_error);
  CHECK_THROWS_AS(bernoulli_poly_at(2, 0, 0), std::domain_error);
}

TEST_CASE("reflection B_n(1-x) = (-1)^n B_n(x)") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<long long> qd(1, 40);
  for (unsigned n = 0; n <= 12; ++n) {
    for (int i = 0; i < 50; ++i) {
      const long long q = qd(rng);
      std::uniform_int_distribution<long long> ad(0, q);
      const long long a = ad(rng);
      const Rational lhs = bernoulli_poly_at(n, q - a, q);
      const Rational rhs = bernoulli_poly_at(n, a, q);
      CHECK(lhs == (n % 2 == 0 ? rhs : -rhs));
    }
  }
}

TEST_CASE("bernoulli_mod_table") {
  const BernoulliModTable t7 = bernoulli_mod_table(7);
  CHECK(t7.at_even(0) == 1);
  CHECK(t7.at_even(2) == 6);
  CHECK(t7.at_even(4) == 3);
  CHECK(bernoulli_mod_table(3).even_residues == std::vector<std::uint32_t>{1});
  CHECK_THROWS_AS(bernoulli_mod_table(2), std::domain_error);
  CHECK_THROWS_AS(bernoulli_mod_table(9), std::domain_error);
  CHECK_THROWS_AS(bernoulli_mod_table(10), std::domain_error);
}

TEST_CASE("mod table matches exact values reduced mod p") {
  for (long long p : {5LL, 7LL, 11LL, 13LL, 101LL}) {
    const BernoulliModTable t = bernoulli_mod_table(p);
    for (unsigned n = 0; n + 3 <= static_cast<unsigned>(p); n += 2) {
      const Rational& b = bernoulli_exact(n);
      const Integer num = b.numerator(), den = b.denominator();
      const std::uint64_t r = mpz_fdiv_ui(num.get_mpz_t(), p);
      const std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), p);
      const std::uint64_t expected =
          r * static_cast<std::uint64_t>(mod_inverse(static_cast<long long>(d), p)) %
          static_cast<std::uint64_t>(p);
      CHECK(t.at_even(n) == expected);
    }
  }
}
