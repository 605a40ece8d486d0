#pragma once

#include <vector>

#include "qirr/arith.hpp"

namespace qirr {

/// Kronecker symbol (a|n), defined for all integers.
int kronecker(long long a, long long n);

/// True iff D > 1 is the discriminant of a real quadratic field:
/// D = 1 mod 4 squarefree, or D = 4k with k squarefree and k = 2, 3 mod 4.
bool is_fundamental(long long D);

/// Ascending fundamental discriminants in the closed interval [lo, hi];
/// requires 2 <= lo <= hi.
std::vector<long long> fundamental_range(long long lo, long long hi);

/// A validated positive fundamental discriminant.
class FundamentalDiscriminant {
 public:
  explicit FundamentalDiscriminant(long long d);
  long long value() const { return d_; }

 private:
  long long d_;
};

/// The real quadratic character chi_D(n) = (D|n), period D, even, and
/// completely multiplicative.
class QuadChar {
 public:
  explicit QuadChar(long long D) : d_(D) {}
  long long conductor() const { return d_.value(); }
  int operator()(long long n) const { return kronecker(d_.value(), n); }

 private:
  FundamentalDiscriminant d_;
};

}  // namespace qirr
