#pragma once

#include <cstdint>
#include <vector>

#include "qirr/arith.hpp"

namespace qirr {

/// Exact Bernoulli number B_n under the B_1 = -1/2 convention.  Values are
/// cached for the lifetime of the process; repeated lookups are O(1).
/// Thread-safe: readers may run concurrently, growth is serialized.
const Rational& bernoulli_exact(unsigned n);

/// Pre-grow the cache so that bernoulli_exact(k) for k <= n never has to
/// build entries (useful before fanning work out to threads).
void bernoulli_ensure(unsigned n);

/// Bernoulli polynomial B_n(a/q), exact; requires q >= 1 and 0 <= a <= q.
Rational bernoulli_poly_at(unsigned n, long long a, long long q);

/// Residues of B_0, B_2, ..., B_{p-3} modulo an odd prime p.  Every listed
/// index n has (p-1) not dividing n, so B_n is p-integral and the residue
/// is well-defined.
struct BernoulliModTable {
  long long p = 0;
  std::vector<std::uint32_t> even_residues;  // index n/2 -> B_n mod p

  std::uint32_t at_even(unsigned n) const { return even_residues[n / 2]; }
  unsigned max_even() const {
    return static_cast<unsigned>(2 * (even_residues.size() - 1));
  }
};

BernoulliModTable bernoulli_mod_table(long long p);

}  // namespace qirr
