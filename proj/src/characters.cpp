#include "qirr/characters.hpp"

#include <cmath>
#include <stdexcept>

namespace qirr {

int kronecker(long long a, long long b) {
  // (a|0) and the shared-factor-of-2 case
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (b & 1) == 0) return 0;

  static const int mod8_sign[8] = {0, 1, 0, -1, 0, -1, 0, 1};  // (2|x) for odd x

  int k = 1;
  int v = 0;
  while ((b & 1) == 0) {
    b >>= 1;
    ++v;
  }
  if (v & 1) k = mod8_sign[a & 7];
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  // now b odd and positive; a may be negative on the first pass only
  while (true) {
    if (a == 0) return (b > 1) ? 0 : k;
    v = 0;
    while ((a & 1) == 0) {
      a >>= 1;
      ++v;
    }
    if (v & 1) k *= mod8_sign[b & 7];
    // quadratic reciprocity flip when both are 3 mod 4
    if (a & b & 2) k = -k;
    const long long r = a < 0 ? -a : a;
    a = b % r;
    b = r;
  }
}

namespace {

bool is_squarefree(long long n) {
  if (n % 4 == 0) return false;
  for (long long q = 3; q * q <= n; q += 2)
    if (n % (q * q) == 0) return false;
  return true;
}

// squarefree flags for the closed interval [lo, hi]
std::vector<char> squarefree_flags(long long lo, long long hi) {
  std::vector<char> flag(static_cast<size_t>(hi - lo + 1), 1);
  for (long long q = 2; q * q <= hi; ++q) {
    const long long qq = q * q;
    for (long long j = (lo + qq - 1) / qq * qq; j <= hi; j += qq) flag[j - lo] = 0;
  }
  return flag;
}

}  // namespace

bool is_fundamental(long long D) {
  if (D <= 1) return false;
  if (D % 4 == 1) return is_squarefree(D);
  if (D % 4 == 0) {
    const long long k = D / 4;
    if (k % 4 == 2 || k % 4 == 3) return is_squarefree(k);
  }
  return false;
}

std::vector<long long> fundamental_range(long long lo, long long hi) {
  if (lo < 2) throw std::domain_error("fundamental_range: lo must be >= 2");
  if (lo > hi) throw std::domain_error("fundamental_range: lo must be <= hi");
  std::vector<long long> out;
  const std::vector<char> sf = squarefree_flags(lo, hi);
  const long long qlo = (lo + 3) / 4, qhi = hi / 4;
  const std::vector<char> sfq =
      qlo <= qhi ? squarefree_flags(qlo, qhi) : std::vector<char>{};
  for (long long d = lo; d <= hi; ++d) {
    if (d % 4 == 1) {
      if (sf[d - lo]) out.push_back(d);
    } else if (d % 4 == 0) {
      const long long k = d / 4;
      if ((k % 4 == 2 || k % 4 == 3) && sfq[k - qlo]) out.push_back(d);
    }
  }
  return out;
}

FundamentalDiscriminant::FundamentalDiscriminant(long long d) : d_(d) {
  if (!is_fundamental(d))
    throw std::domain_error("not a positive fundamental discriminant: " + std::to_string(d));
}

}  // namespace qirr
