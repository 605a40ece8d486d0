#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "qirr/arith.hpp"
#include "qirr/bernoulli.hpp"
#include "qirr/characters.hpp"

namespace qirr {

/// zeta(1-2m) = -B_{2m} / (2m), exact.
Rational zeta_neg(unsigned m);

/// L(1-2m, chi_D) together with its inputs.  The value is
/// -B_{2m,chi}/(2m), with B_{n,chi} = D^{n-1} sum_{a=1}^{D} chi(a) B_n(a/D).
struct LValueRecord {
  long long D = 0;
  unsigned n = 0;  // the weight, n = 2m
  Rational value;
};

LValueRecord l_chi(long long D, unsigned m);

/// zeta_D(1-2m) = zeta(1-2m) * L(1-2m, chi_D), exact.
struct ZetaDValue {
  long long D = 0;
  unsigned m = 0;
  Rational value;
};

ZetaDValue zeta_d(long long D, unsigned m);

/// |numerator| of q in lowest terms.
Integer numerator_of(const Rational& q);

/// Residue of L(1-2m, chi_D) mod p.  Requires p odd prime, p not dividing D
/// and 2m <= p-3 (both guarantee p-integrality); refuses otherwise so the
/// caller falls back to the exact path.  O(D*m) modular operations plus the
/// cost of the Bernoulli residue table.
std::uint64_t l_chi_mod(long long D, unsigned m, long long p);
std::uint64_t l_chi_mod(long long D, unsigned m, const BernoulliModTable& table);

/// Residues of L(1-2m, chi_D) mod p for every interior weight at once:
/// index m-1 holds 2m, for 2m = 2, 4, ..., p-3.  Same preconditions as
/// l_chi_mod; empty for p = 3.
std::vector<std::uint32_t> l_chi_mod_row(long long D, const BernoulliModTable& table);

class DiscPowerSums;

/// Same, reusing an already-built character table.
std::vector<std::uint32_t> l_chi_mod_row(const DiscPowerSums& ps,
                                         const BernoulliModTable& table);

/// Residues of zeta(1-2m) mod p for 2m = 2, ..., p-3 (index m-1).
std::vector<std::uint32_t> zeta_mod_row(const BernoulliModTable& table);

/// zeta(1-2m) mod p; requires (p-1) not dividing 2m.
std::uint64_t zeta_neg_mod(unsigned m, long long p);

/// Shared per-weight state for sweeps that fix m and vary D: exact
/// Bernoulli numbers and the binomial row for the weight, plus per-prime
/// residue rows built on demand.
class WeightTable {
 public:
  explicit WeightTable(unsigned m);

  unsigned m() const { return m_; }
  unsigned weight() const { return 2 * m_; }
  const Rational& zeta_value() const { return zeta_; }

  Rational l_chi(long long D) const;
  Rational zeta_d(long long D) const;

  /// B_k mod p for k = 0..2m (odd k >= 3 are zero, index 1 holds -1/2).
  const std::vector<std::uint32_t>& mod_row(long long p) const;

 private:
  unsigned m_;
  Rational zeta_;
  std::vector<Rational> coef_;  // C(2m,k) * B_k for k = 0, 1 and even k
  mutable std::mutex mod_mutex_;
  mutable std::map<long long, std::vector<std::uint32_t>> mod_rows_;
};

/// Per-discriminant exact power sums S_j = sum_{a=1}^{D-1} chi_D(a) a^j,
/// grown once to a target weight and then read-only.
class DiscPowerSums {
 public:
  explicit DiscPowerSums(long long D);

  long long disc() const { return d_; }
  int chi(long long a) const { return chi_[static_cast<size_t>(a % d_)]; }
  unsigned max_j() const { return static_cast<unsigned>(sums_.size()) - 1; }

  void grow(unsigned jmax);
  const Integer& S(unsigned j) const { return sums_[j]; }

 private:
  long long d_;
  std::vector<signed char> chi_;
  std::vector<Integer> sums_;
};

/// Exact L(1-n, chi_D) for many (D, n) pairs with n bounded: Bernoulli
/// numbers are pre-scaled by a common denominator so each evaluation is a
/// single integer dot product plus one normalization.
class ExactLValueTable {
 public:
  explicit ExactLValueTable(unsigned max_weight);

  unsigned max_weight() const { return max_weight_; }

  /// L(1-n, chi_D) with D = ps.disc(); n even, 2 <= n <= max_weight.
  Rational l_value(const DiscPowerSums& ps, unsigned n) const;

 private:
  unsigned max_weight_;
  Integer common_den_;            // product of all primes <= max_weight+1
  std::vector<Integer> scaled_;   // index k/2 -> B_k * common_den_
  Integer scaled_b1_;             // B_1 * common_den_
};

}  // namespace qirr
