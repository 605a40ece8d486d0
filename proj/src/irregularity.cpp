#include "qirr/irregularity.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace qirr {

long long delta(long long D, long long p) {
  if (p == 2) throw std::domain_error("delta: p = 2 is excluded");
  if (p < 3 || !is_prime(p)) throw std::domain_error("delta: p must be an odd prime");
  FundamentalDiscriminant fd(D);
  return D == p ? (p - 1) / 2 : p - 1;
}

SlotRange slot_range(long long D, long long p) {
  SlotRange slots;
  slots.D = D;
  slots.p = p;
  slots.delta = delta(D, p);
  for (long long n = 2; n + 2 <= slots.delta; n += 2)
    slots.interior.push_back(static_cast<unsigned>(n));
  slots.terminal = static_cast<unsigned>(slots.delta);
  return slots;
}

namespace {

bool divisible_by(const Rational& value, long long p) {
  const Integer num = value.numerator();
  return mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
}

IndexResult index_single(long long D, long long p, IndexKind kind, EvalPath path) {
  const long long dd = delta(D, p);
  IndexResult res;
  res.D = D;
  res.p = p;

  const bool mod_ok =
      path == EvalPath::automatic && D % p != 0 && p < (1LL << 31) && dd >= 4;
  std::vector<std::uint32_t> lrow, zrow;
  if (mod_ok) {
    const BernoulliModTable table = bernoulli_mod_table(p);
    lrow = l_chi_mod_row(D, table);
    if (kind == IndexKind::d) zrow = zeta_mod_row(table);
  }

  for (long long n = 2; n + 2 <= dd; n += 2) {
    const unsigned m = static_cast<unsigned>(n / 2);
    long v;
    if (mod_ok) {
      const bool zero_residue =
          lrow[m - 1] == 0 || (kind == IndexKind::d && zrow[m - 1] == 0);
      if (!zero_residue) {
        v = 0;  // the slot value is p-integral here, so a unit residue pins v_p
      } else {
        const Rational value =
            kind == IndexKind::chi ? l_chi(D, m).value : zeta_d(D, m).value;
        v = *valuation(value, p);
      }
    } else {
      const Rational value =
          kind == IndexKind::chi ? l_chi(D, m).value : zeta_d(D, m).value;
      v = *valuation(value, p);
    }
    if (v >= 1) ++res.r;
    res.slot_valuations.emplace_back(static_cast<unsigned>(n), v);
  }

  // terminal slot, always exact
  const unsigned tm = static_cast<unsigned>(dd / 2);
  const Rational tval = kind == IndexKind::chi
                            ? l_chi(D, tm).value
                            : Rational(p) * zeta_d(D, tm).value;
  const long v = *valuation(tval, p);
  if (v >= 1) ++res.r;
  res.slot_valuations.emplace_back(static_cast<unsigned>(dd), v);
  return res;
}

struct PrimeTables {
  BernoulliModTable bernoulli;
  std::vector<std::uint32_t> zeta_row;  // filled for d-kind scans
};

// per-worker scratch shared across the cells it processes
struct WorkerState {
  std::map<long long, PrimeTables> prime_tables;
  const PrimeTables& tables(long long p, IndexKind kind) {
    auto it = prime_tables.find(p);
    if (it == prime_tables.end()) {
      PrimeTables t{bernoulli_mod_table(p), {}};
      if (kind == IndexKind::d) t.zeta_row = zeta_mod_row(t.bernoulli);
      it = prime_tables.emplace(p, std::move(t)).first;
    }
    return it->second;
  }
};

int scan_cell(long long D, long long p, IndexKind kind, EvalPath path,
              DiscPowerSums& ps, const ExactLValueTable& exact_table,
              WorkerState& state, std::map<unsigned, Rational>& lmemo) {
  const long long dd = D == p ? (p - 1) / 2 : p - 1;
  int r = 0;

  if (dd >= 4) {
    if (path == EvalPath::automatic && D % p != 0) {
      const PrimeTables& t = state.tables(p, kind);
      const auto lrow = l_chi_mod_row(ps, t.bernoulli);
      for (size_t i = 0; i < lrow.size(); ++i) {
        if (lrow[i] == 0 || (kind == IndexKind::d && t.zeta_row[i] == 0)) ++r;
      }
    } else {
      for (long long n = 2; n + 2 <= dd; n += 2) {
        auto it = lmemo.find(static_cast<unsigned>(n));
        if (it == lmemo.end())
          it = lmemo
                   .emplace(static_cast<unsigned>(n),
                            exact_table.l_value(ps, static_cast<unsigned>(n)))
                   .first;
        if (kind == IndexKind::chi) {
          if (divisible_by(it->second, p)) ++r;
        } else {
          const Rational value = zeta_neg(static_cast<unsigned>(n / 2)) * it->second;
          if (divisible_by(value, p)) ++r;
        }
      }
    }
  }

  const Rational lterm = exact_table.l_value(ps, static_cast<unsigned>(dd));
  if (kind == IndexKind::chi) {
    if (divisible_by(lterm, p)) ++r;
  } else {
    const Rational value =
        Rational(p) * zeta_neg(static_cast<unsigned>(dd / 2)) * lterm;
    if (divisible_by(value, p)) ++r;
  }
  return r;
}

void run_units(int threads, size_t unit_count, const std::function<void(size_t)>& fn) {
  if (threads <= 1 || unit_count <= 1) {
    for (size_t i = 0; i < unit_count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const size_t nthreads = std::min<size_t>(threads, unit_count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= unit_count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

IndexResult chi_index(long long D, long long p, EvalPath path) {
  return index_single(D, p, IndexKind::chi, path);
}

IndexResult d_index(long long D, long long p, EvalPath path) {
  return index_single(D, p, IndexKind::d, path);
}

bool is_d_regular(long long D, long long p) { return d_index(D, p).r == 0; }

std::vector<ScanRow> scan_table(long long d_lo, long long d_end, long long p_max,
                                IndexKind kind, const ScanOptions& options) {
  if (d_lo < 2) throw std::domain_error("scan_table: discriminant range must start at >= 2");
  if (d_end < d_lo) throw std::domain_error("scan_table: empty discriminant range");
  if (p_max < 3) throw std::domain_error("scan_table: p_max must be >= 3");

  const std::vector<long long> discs =
      d_end - 1 >= d_lo ? fundamental_range(d_lo, d_end - 1) : std::vector<long long>{};
  const std::vector<long long> primes =
      p_max - 1 >= 3 ? primes_in_range(3, p_max - 1).primes : std::vector<long long>{};
  if (discs.empty() || primes.empty()) return {};

  const unsigned max_weight = static_cast<unsigned>(primes.back() - 1);
  bernoulli_ensure(max_weight);
  const ExactLValueTable exact_table(std::max(2u, max_weight));

  std::vector<std::vector<ScanRow>> unit_rows;

  if (discs.size() == 1) {
    // one discriminant, parallelize over primes
    const long long D = discs.front();
    unit_rows.assign(primes.size(), {});
    struct Local {
      std::optional<DiscPowerSums> ps;
      WorkerState state;
      std::map<unsigned, Rational> lmemo;
    };
    std::mutex locals_mutex;
    std::map<std::thread::id, Local> locals;
    run_units(options.threads, primes.size(), [&](size_t i) {
      Local* local;
      {
        std::lock_guard lock(locals_mutex);
        local = &locals[std::this_thread::get_id()];
      }
      if (!local->ps) {
        local->ps.emplace(D);
        local->ps->grow(max_weight);
      }
      const long long p = primes[i];
      const int r = scan_cell(D, p, kind, options.path, *local->ps, exact_table,
                              local->state, local->lmemo);
      unit_rows[i] = {ScanRow{D, p, r}};
    });
  } else {
    // parallelize over discriminants; each unit covers every prime
    unit_rows.assign(discs.size(), {});
    run_units(options.threads, discs.size(), [&](size_t i) {
      const long long D = discs[i];
      DiscPowerSums ps(D);
      ps.grow(max_weight);
      WorkerState state;
      std::map<unsigned, Rational> lmemo;
      std::vector<ScanRow> rows;
      rows.reserve(primes.size());
      for (const long long p : primes)
        rows.push_back(
            {D, p, scan_cell(D, p, kind, options.path, ps, exact_table, state, lmemo)});
      unit_rows[i] = std::move(rows);
    });
  }

  std::vector<ScanRow> out;
  for (auto& rows : unit_rows)
    out.insert(out.end(), rows.begin(), rows.end());
  std::sort(out.begin(), out.end(), [](const ScanRow& a, const ScanRow& b) {
    return a.D != b.D ? a.D < b.D : a.p < b.p;
  });
  return out;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "D,p,r\n";
  for (const ScanRow& row : rows)
    out << row.D << ',' << row.p << ',' << row.r << '\n';
}

std::vector<ScanRow> read_scan_csv(std::istream& in) {
  std::vector<ScanRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("scan CSV: missing header");
  if (line != "D,p,r" && line != "D,p,r\r")
    throw std::invalid_argument("scan CSV: unexpected header: " + line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    ScanRow row;
    char c1 = 0, c2 = 0;
    if (!(ss >> row.D >> c1 >> row.p >> c2 >> row.r) || c1 != ',' || c2 != ',')
      throw std::invalid_argument("scan CSV: bad row: " + line);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qirr
