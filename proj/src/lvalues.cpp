#include "qirr/lvalues.hpp"

#include <stdexcept>

namespace qirr {

namespace {

// S_j = sum_{a=1}^{D-1} chi_D(a) a^j for j = 0..jmax (S_0 = 0 for D > 1)
std::vector<Integer> exact_power_sums(long long D, unsigned jmax) {
  std::vector<Integer> s(jmax + 1);
  Integer pw;
  for (long long a = 1; a < D; ++a) {
    const int c = kronecker(D, a);
    if (c == 0) continue;
    pw = static_cast<long>(a);
    for (unsigned j = 1; j <= jmax; ++j) {
      if (c > 0)
        s[j] += pw;
      else
        s[j] -= pw;
      if (j < jmax) pw *= static_cast<long>(a);
    }
  }
  return s;
}

// B_{n,chi} from power sums:
//   B_{n,chi} = S_n / D + n B_1 S_{n-1} + sum_{even k=2}^{n-2} C(n,k) B_k D^(k-1) S_{n-k}
Rational gen_bernoulli_from_sums(long long D, unsigned n, const std::vector<Integer>& s) {
  bernoulli_ensure(n);
  Rational acc(s[n], Integer(static_cast<long>(D)));
  acc += Rational(Integer(static_cast<long>(n)) * s[n - 1], Integer(-2));
  Integer binom = 1, dpow = 1;
  const Integer dsq = Integer(static_cast<long>(D)) * static_cast<long>(D);
  for (unsigned k = 2; k + 2 <= n; k += 2) {
    if (k == 2) {
      binom = Integer(static_cast<long>(n)) * (n - 1) / 2;
      dpow = static_cast<long>(D);
    } else {
      binom *= static_cast<unsigned long>(n - k + 2) * (n - k + 1);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                      static_cast<unsigned long>(k - 1) * k);
      dpow *= dsq;
    }
    acc += bernoulli_exact(k) * Rational(binom * dpow * s[n - k]);
  }
  return acc;
}

}  // namespace

Rational zeta_neg(unsigned m) {
  if (m < 1) throw std::domain_error("zeta_neg: m must be >= 1");
  return -(bernoulli_exact(2 * m) / Rational(static_cast<long>(2 * m)));
}

LValueRecord l_chi(long long D, unsigned m) {
  FundamentalDiscriminant fd(D);
  if (m < 1) throw std::domain_error("l_chi: m must be >= 1");
  const unsigned n = 2 * m;
  const std::vector<Integer> s = exact_power_sums(D, n);
  const Rational bn = gen_bernoulli_from_sums(D, n, s);
  return LValueRecord{D, n, -(bn / Rational(static_cast<long>(n)))};
}

ZetaDValue zeta_d(long long D, unsigned m) {
  const LValueRecord rec = l_chi(D, m);
  return ZetaDValue{D, m, zeta_neg(m) * rec.value};
}

Integer numerator_of(const Rational& q) {
  Integer n = q.numerator();
  return abs(n);
}

std::uint64_t l_chi_mod(long long D, unsigned m, long long p) {
  if (p < 3 || !is_prime(p)) throw std::domain_error("l_chi_mod: p must be an odd prime");
  if (D % p == 0)
    throw std::domain_error("l_chi_mod: p divides D, non-integral risk; use exact path");
  if (2 * m + 3 > static_cast<unsigned long long>(p))
    throw std::domain_error("l_chi_mod: last-slot weight; use exact path");
  return l_chi_mod(D, m, bernoulli_mod_table(p));
}

std::uint64_t l_chi_mod(long long D, unsigned m, const BernoulliModTable& table) {
  FundamentalDiscriminant fd(D);
  const long long p = table.p;
  if (m < 1) throw std::domain_error("l_chi_mod: m must be >= 1");
  if (D % p == 0)
    throw std::domain_error("l_chi_mod: p divides D, non-integral risk; use exact path");
  const unsigned n = 2 * m;
  if (n + 3 > static_cast<unsigned long long>(p))
    throw std::domain_error("l_chi_mod: last-slot weight; use exact path");

  const std::uint64_t P = static_cast<std::uint64_t>(p);
  // S_j mod p, j = 1..n
  std::vector<std::uint64_t> s(n + 1, 0);
  for (long long a = 1; a < D; ++a) {
    const int c = kronecker(D, a);
    if (c == 0) continue;
    std::uint64_t pw = static_cast<std::uint64_t>(a % p);
    const std::uint64_t base = pw;
    for (unsigned j = 1; j <= n; ++j) {
      s[j] = (s[j] + (c > 0 ? pw : P - pw)) % P;
      pw = pw * base % P;
    }
  }
  const std::uint64_t inv2 = static_cast<std::uint64_t>(mod_inverse(2, p));
  std::uint64_t sum = static_cast<std::uint64_t>(mod_inverse(D % p, p)) * s[n] % P;
  sum = (sum + static_cast<std::uint64_t>(n % P) * (P - inv2) % P * s[n - 1]) % P;
  std::uint64_t c = static_cast<std::uint64_t>(n) * (n - 1) % P * inv2 % P;
  std::uint64_t dpow = static_cast<std::uint64_t>(D % p);
  for (unsigned k = 2; k + 2 <= n; k += 2) {
    sum = (sum + c * table.at_even(k) % P * dpow % P * s[n - k]) % P;
    c = c * ((n - k) % P) % P * ((n - k - 1) % P) % P *
        static_cast<std::uint64_t>(mod_inverse(k + 1, p)) % P *
        static_cast<std::uint64_t>(mod_inverse(k + 2, p)) % P;
    dpow = dpow * (static_cast<std::uint64_t>(D % p) * (D % p) % P) % P;
  }
  // L(1-n, chi) = -B_{n,chi} / n
  return (P - sum) % P * static_cast<std::uint64_t>(mod_inverse(n, p)) % P;
}

namespace {

std::vector<std::uint32_t> l_chi_mod_row_impl(long long D,
                                              const std::vector<std::int64_t>& mass,
                                              const BernoulliModTable& table) {
  const long long p = table.p;
  const std::uint64_t P = static_cast<std::uint64_t>(p);
  const unsigned jmax = static_cast<unsigned>(p - 3);
  std::vector<std::uint64_t> base, val;
  for (long long c = 1; c < p; ++c) {
    const std::int64_t t = mass[c] % p;
    if (t == 0) continue;
    base.push_back(static_cast<std::uint64_t>(c));
    val.push_back(static_cast<std::uint64_t>(t < 0 ? t + p : t));
  }
  std::vector<std::uint32_t> s(jmax + 1, 0);
  for (unsigned j = 1; j <= jmax; ++j) {
    std::uint64_t acc = 0;
    for (size_t i = 0; i < base.size(); ++i) {
      val[i] = val[i] * base[i] % P;
      acc += val[i];
    }
    s[j] = static_cast<std::uint32_t>(acc % P);
  }

  const std::vector<std::uint32_t> inv = inverse_table(static_cast<std::uint32_t>(p));
  const std::uint64_t dmod = static_cast<std::uint64_t>(D % p);
  // w_k = B_k D^(k-1) for even k, folded with w_0 = 1/D
  std::vector<std::uint32_t> w(jmax / 2 + 1);
  w[0] = inv[dmod];
  std::uint64_t dpow = dmod;
  for (unsigned k = 2; k <= jmax; k += 2) {
    w[k / 2] = static_cast<std::uint32_t>(table.at_even(k) * dpow % P);
    dpow = dpow * dmod % P * dmod % P;
  }
  const std::uint64_t b1 = P - inv[2];

  std::vector<std::uint32_t> out(jmax / 2);
  for (std::uint64_t n = 2; n <= jmax; n += 2) {
    std::uint64_t sum = static_cast<std::uint64_t>(w[0]) * s[n] % P;
    sum = (sum + n * b1 % P * s[n - 1]) % P;
    std::uint64_t c = n * (n - 1) % P * inv[2] % P;
    for (std::uint64_t k = 2; k + 2 <= n; k += 2) {
      sum = (sum + c * w[k / 2] % P * s[n - k]) % P;
      c = c * (n - k) % P * (n - k - 1) % P * inv[k + 1] % P * inv[k + 2] % P;
    }
    out[n / 2 - 1] = static_cast<std::uint32_t>((P - sum) % P * inv[n] % P);
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> l_chi_mod_row(long long D, const BernoulliModTable& table) {
  const long long p = table.p;
  if (D % p == 0)
    throw std::domain_error("l_chi_mod_row: p divides D, non-integral risk; use exact path");
  if (p == 3) return {};
  std::vector<std::int64_t> mass(static_cast<size_t>(p), 0);
  for (long long a = 1; a < D; ++a) {
    const int c = kronecker(D, a);
    if (c) mass[a % p] += c;
  }
  return l_chi_mod_row_impl(D, mass, table);
}

std::vector<std::uint32_t> l_chi_mod_row(const DiscPowerSums& ps,
                                         const BernoulliModTable& table) {
  const long long D = ps.disc();
  const long long p = table.p;
  if (D % p == 0)
    throw std::domain_error("l_chi_mod_row: p divides D, non-integral risk; use exact path");
  if (p == 3) return {};
  std::vector<std::int64_t> mass(static_cast<size_t>(p), 0);
  for (long long a = 1; a < D; ++a) {
    const int c = ps.chi(a);
    if (c) mass[a % p] += c;
  }
  return l_chi_mod_row_impl(D, mass, table);
}

std::vector<std::uint32_t> zeta_mod_row(const BernoulliModTable& table) {
  const long long p = table.p;
  if (p == 3) return {};
  const std::uint64_t P = static_cast<std::uint64_t>(p);
  const std::vector<std::uint32_t> inv = inverse_table(static_cast<std::uint32_t>(p));
  std::vector<std::uint32_t> out(static_cast<size_t>((p - 3) / 2));
  for (std::uint64_t n = 2; n + 3 <= P; n += 2)
    out[n / 2 - 1] = static_cast<std::uint32_t>(
        (P - table.at_even(static_cast<unsigned>(n))) % P * inv[n] % P);
  return out;
}

std::uint64_t zeta_neg_mod(unsigned m, long long p) {
  if (p < 3 || !is_prime(p)) throw std::domain_error("zeta_neg_mod: p must be an odd prime");
  const unsigned n = 2 * m;
  if (n % static_cast<unsigned long long>(p - 1) == 0)
    throw std::domain_error("zeta_neg_mod: (p-1) divides 2m, value is not p-integral");
  const Rational z = zeta_neg(m);
  const Integer num = z.numerator(), den = z.denominator();
  const std::uint64_t P = static_cast<std::uint64_t>(p);
  std::uint64_t r = mpz_fdiv_ui(num.get_mpz_t(), P);
  const std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), P);
  r = r * static_cast<std::uint64_t>(mod_inverse(static_cast<long long>(d), p)) % P;
  return r;
}

WeightTable::WeightTable(unsigned m) : m_(m) {
  if (m < 1) throw std::domain_error("WeightTable: m must be >= 1");
  const unsigned n = 2 * m;
  bernoulli_ensure(n);
  zeta_ = zeta_neg(m);
  coef_.assign(n + 1, Rational());
  Integer binom;
  for (unsigned k = 0; k <= n; ++k) {
    if (k >= 3 && k % 2 == 1) continue;
    mpz_bin_uiui(binom.get_mpz_t(), n, k);
    coef_[k] = Rational(binom) * bernoulli_exact(k);
  }
}

Rational WeightTable::l_chi(long long D) const {
  FundamentalDiscriminant fd(D);
  const unsigned n = 2 * m_;
  const std::vector<Integer> s = exact_power_sums(D, n);
  Rational acc = coef_[0] * Rational(s[n], Integer(static_cast<long>(D)));
  acc += coef_[1] * Rational(s[n - 1]);
  Integer dpow = 1;
  for (unsigned k = 2; k + 2 <= n; k += 2) {
    dpow = (k == 2) ? Integer(static_cast<long>(D))
                    : dpow * static_cast<long>(D) * static_cast<long>(D);
    acc += coef_[k] * Rational(dpow * s[n - k]);
  }
  return -(acc / Rational(static_cast<long>(n)));
}

Rational WeightTable::zeta_d(long long D) const { return zeta_ * l_chi(D); }

const std::vector<std::uint32_t>& WeightTable::mod_row(long long p) const {
  if (p < 3 || !is_prime(p)) throw std::domain_error("WeightTable: p must be an odd prime");
  if (2 * m_ + 3 > static_cast<unsigned long long>(p))
    throw std::domain_error("WeightTable: weight too close to p, residues not defined");
  std::lock_guard lock(mod_mutex_);
  auto it = mod_rows_.find(p);
  if (it != mod_rows_.end()) return it->second;
  const std::uint64_t P = static_cast<std::uint64_t>(p);
  std::vector<std::uint32_t> row(2 * m_ + 1, 0);
  for (unsigned k = 0; k <= 2 * m_; ++k) {
    if (k >= 3 && k % 2 == 1) continue;
    const Rational& b = bernoulli_exact(k);
    const Integer num = b.numerator(), den = b.denominator();
    std::uint64_t r = mpz_fdiv_ui(num.get_mpz_t(), P);
    const std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), P);
    row[k] = static_cast<std::uint32_t>(
        r * static_cast<std::uint64_t>(mod_inverse(static_cast<long long>(d), p)) % P);
  }
  return mod_rows_.emplace(p, std::move(row)).first->second;
}

DiscPowerSums::DiscPowerSums(long long D) : d_(D) {
  FundamentalDiscriminant fd(D);
  chi_.resize(static_cast<size_t>(D));
  for (long long a = 0; a < D; ++a)
    chi_[static_cast<size_t>(a)] = static_cast<signed char>(kronecker(D, a));
  sums_.resize(1);
}

void DiscPowerSums::grow(unsigned jmax) {
  if (jmax < sums_.size()) return;
  std::vector<Integer> s(jmax + 1);
  Integer pw;
  for (long long a = 1; a < d_; ++a) {
    const int c = chi_[static_cast<size_t>(a)];
    if (c == 0) continue;
    pw = static_cast<long>(a);
    for (unsigned j = 1; j <= jmax; ++j) {
      if (c > 0)
        s[j] += pw;
      else
        s[j] -= pw;
      if (j < jmax) pw *= static_cast<long>(a);
    }
  }
  sums_ = std::move(s);
}

ExactLValueTable::ExactLValueTable(unsigned max_weight) : max_weight_(max_weight) {
  if (max_weight < 2) throw std::domain_error("ExactLValueTable: max_weight must be >= 2");
  bernoulli_ensure(max_weight);
  common_den_ = 1;
  for (long long q : primes_up_to(static_cast<long long>(max_weight) + 1)) common_den_ *= static_cast<long>(q);
  scaled_.resize(max_weight / 2 + 1);
  for (unsigned k = 0; k <= max_weight; k += 2) {
    const Rational& b = bernoulli_exact(k);
    Integer v;
    mpz_divexact(v.get_mpz_t(), common_den_.get_mpz_t(), b.denominator().get_mpz_t());
    scaled_[k / 2] = v * b.numerator();
  }
  mpz_divexact_ui(scaled_b1_.get_mpz_t(), common_den_.get_mpz_t(), 2);
  scaled_b1_ = -scaled_b1_;
}

Rational ExactLValueTable::l_value(const DiscPowerSums& ps, unsigned n) const {
  if (n < 2 || n % 2 != 0 || n > max_weight_)
    throw std::domain_error("ExactLValueTable: weight out of range");
  if (ps.max_j() < n) throw std::logic_error("ExactLValueTable: power sums not grown");
  const long long D = ps.disc();
  const Integer dz(static_cast<long>(D));
  // B_{n,chi} * Q * D = sum_k C(n,k) (B_k Q) D^k S_{n-k}
  Integer acc = common_den_ * ps.S(n);
  acc += scaled_b1_ * static_cast<unsigned long>(n) * dz * ps.S(n - 1);
  Integer binom, dpow;
  for (unsigned k = 2; k + 2 <= n; k += 2) {
    if (k == 2) {
      binom = Integer(static_cast<long>(n)) * (n - 1) / 2;
      dpow = dz * dz;
    } else {
      binom *= static_cast<unsigned long>(n - k + 2) * (n - k + 1);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                      static_cast<unsigned long>(k - 1) * k);
      dpow *= dz * dz;
    }
    acc += binom * scaled_[k / 2] * dpow * ps.S(n - k);
  }
  // L(1-n, chi) = -B_{n,chi} / n
  return Rational(-acc, common_den_ * dz * static_cast<unsigned long>(n));
}

}  // namespace qirr
