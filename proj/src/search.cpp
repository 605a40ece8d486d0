#include "qirr/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace qirr {

long long SearchParams::p_hi() const {
  return static_cast<long long>(std::floor(c * static_cast<double>(P) + 1e-9));
}

void SearchParams::validate() const {
  if (P < 100) throw std::invalid_argument("search: P must be >= 100");
  if (!(c > 1.0)) throw std::invalid_argument("search: c must be > 1");
  if (M1 < 1) throw std::invalid_argument("search: M1 must be >= 1");
  if (D1 < 2 || D1 > D2) throw std::invalid_argument("search: need 2 <= D1 <= D2");
  if (P <= D2)
    throw std::invalid_argument(
        "search: P must exceed D2 so that p = D cannot arise");
  if (threads < 1) throw std::invalid_argument("search: threads must be >= 1");
  if (m_max && *m_max < M1) throw std::invalid_argument("search: m_max must be >= M1");
}

namespace {

struct SieveBundle {
  std::vector<long long> range_primes;  // primes in [P, cP]
  std::vector<long long> small_primes;  // primes <= cP
};

SieveBundle build_sieves(long long P, long long cP) {
  SieveBundle s;
  s.range_primes = primes_in_range(P, cP).primes;
  s.small_primes = primes_up_to(cP);
  return s;
}

void push_if_in_range(std::vector<long long>& out, long long q, long long P, long long cP) {
  if (q >= P && q <= cP) out.push_back(q);
}

std::vector<long long> dividing_primes(const Integer& N, long long P, long long cP,
                                       const SieveBundle& sieve) {
  std::vector<long long> out;
  Integer bound(static_cast<long>(cP));
  bound *= static_cast<long>(cP);
  if (N < bound) {
    // full factorization settles the window exactly
    if (mpz_sizeinbase(N.get_mpz_t(), 2) <= 63) {
      unsigned long long rem = mpz_get_ui(N.get_mpz_t());
      for (const long long q : sieve.small_primes) {
        const auto uq = static_cast<unsigned long long>(q);
        if (uq * uq > rem) break;
        if (rem % uq == 0) {
          push_if_in_range(out, q, P, cP);
          do rem /= uq;
          while (rem % uq == 0);
        }
      }
      if (rem > 1) push_if_in_range(out, static_cast<long long>(rem), P, cP);
    } else {
      Integer rem = N;
      for (const long long q : sieve.small_primes) {
        Integer qq(static_cast<long>(q));
        if (qq * qq > rem) break;
        if (mpz_divisible_ui_p(rem.get_mpz_t(), static_cast<unsigned long>(q))) {
          push_if_in_range(out, q, P, cP);
          do mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(),
                             static_cast<unsigned long>(q));
          while (mpz_divisible_ui_p(rem.get_mpz_t(), static_cast<unsigned long>(q)));
        }
      }
      if (rem > 1 && mpz_fits_slong_p(rem.get_mpz_t()))
        push_if_in_range(out, rem.get_si(), P, cP);
    }
  } else {
    for (const long long q : sieve.range_primes)
      if (mpz_divisible_ui_p(N.get_mpz_t(), static_cast<unsigned long>(q)))
        out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct CellHit {
  long long D = 0;
  int m = 0;
  long long p = 0;
  int bits = 0;
};

std::optional<CellHit> eval_cell(const WeightTable& table, long long D, int m,
                                 long long P, long long cP, const SieveBundle& sieve) {
  const Rational value = table.zeta_d(D);
  const Integer num = numerator_of(value);
  if (sgn(num) == 0) throw std::logic_error("search: vanishing zeta value");
  std::vector<long long> divs = dividing_primes(num, P, cP, sieve);
  std::erase_if(divs, [&](long long p) { return 2 * m + 1 > p; });
  if (divs.empty()) return std::nullopt;
  return CellHit{D, m, divs.front(),
                 static_cast<int>(mpz_sizeinbase(num.get_mpz_t(), 2))};
}

void check_hit_soundness(const CellHit& hit, const SearchParams& params) {
  const Rational value = zeta_d(hit.D, static_cast<unsigned>(hit.m)).value;
  const Integer num = numerator_of(value);
  if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(hit.p)))
    throw std::logic_error("search: hit failed exact re-division");
  if (!is_prime(hit.p) || hit.p < params.P || hit.p > params.p_hi())
    throw std::logic_error("search: hit prime outside the window");
  if (2 * hit.m + 1 > hit.p) throw std::logic_error("search: hit violates m <= (p-1)/2");
  if (hit.D % hit.p == 0) throw std::logic_error("search: hit has p | D");
  if (!is_fundamental(hit.D) || hit.D < params.D1 || hit.D > params.D2)
    throw std::logic_error("search: hit discriminant outside the window");
}

// canonical cell walk shared by first_hit and the logging runner; returns
// per-batch checkpoints and stops per the sink's verdict
struct WalkCallbacks {
  // called per hit, cells in canonical order; return true to stop the walk
  std::function<bool(const CellHit&)> on_hit;
  // called when a batch completes, with the next unprocessed cell
  std::function<void(int next_m, long long next_D)> on_checkpoint;
};

enum class WalkEnd { stopped_on_hit, exhausted, cell_budget };

struct WalkResult {
  WalkEnd end = WalkEnd::exhausted;
  int last_m = 0;
  long long last_D = 0;
};

WalkResult walk_cells(const SearchParams& params, int start_m, long long start_D,
                      std::optional<long long> cell_budget, const WalkCallbacks& cb) {
  const long long cP = params.p_hi();
  const SieveBundle sieve = build_sieves(params.P, cP);
  const std::vector<long long> discs = fundamental_range(params.D1, params.D2);
  if (discs.empty())
    throw std::invalid_argument("search: no fundamental discriminants in [D1, D2]");

  WalkResult result;
  result.last_m = start_m;
  result.last_D = start_D;
  long long cells_done = 0;
  const size_t batch = std::max<size_t>(16, static_cast<size_t>(params.threads) * 8);

  for (int m = start_m;; ++m) {
    if (params.m_max && m > *params.m_max) {
      result.end = WalkEnd::exhausted;
      return result;
    }
    if (2LL * m + 1 > cP) {
      // no prime in the window can satisfy m <= (p-1)/2 from here on
      result.end = WalkEnd::exhausted;
      return result;
    }
    const WeightTable table(static_cast<unsigned>(m));
    size_t i = 0;
    if (m == start_m)
      i = std::lower_bound(discs.begin(), discs.end(), start_D) - discs.begin();
    while (i < discs.size()) {
      size_t end = std::min(discs.size(), i + batch);
      if (cell_budget)
        end = std::min(end, i + static_cast<size_t>(std::max<long long>(
                                  1, *cell_budget - cells_done)));
      std::vector<std::optional<CellHit>> results(end - i);
      if (params.threads <= 1) {
        for (size_t k = i; k < end; ++k)
          results[k - i] = eval_cell(table, discs[k], m, params.P, cP, sieve);
      } else {
        std::atomic<size_t> next{i};
        std::mutex error_mutex;
        std::exception_ptr error;
        std::vector<std::thread> pool;
        const size_t nthreads =
            std::min<size_t>(static_cast<size_t>(params.threads), end - i);
        for (size_t t = 0; t < nthreads; ++t)
          pool.emplace_back([&] {
            while (true) {
              const size_t k = next.fetch_add(1);
              if (k >= end) break;
              try {
                results[k - i] = eval_cell(table, discs[k], m, params.P, cP, sieve);
              } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
              }
            }
          });
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
      }
      cells_done += static_cast<long long>(end - i);
      result.last_m = m;
      result.last_D = discs[end - 1];
      for (const auto& r : results) {
        if (r && cb.on_hit(*r)) {
          result.end = WalkEnd::stopped_on_hit;
          return result;
        }
      }
      if (cb.on_checkpoint) {
        if (end < discs.size())
          cb.on_checkpoint(m, discs[end]);
        else
          cb.on_checkpoint(m + 1, params.D1);
      }
      if (cell_budget && cells_done >= *cell_budget) {
        result.end = WalkEnd::cell_budget;
        return result;
      }
      i = end;
    }
  }
}

nlohmann::ordered_json params_json(const SearchParams& params, bool all_hits) {
  nlohmann::ordered_json j;
  j["P"] = params.P;
  j["c"] = params.c;
  j["M1"] = params.M1;
  j["D1"] = params.D1;
  j["D2"] = params.D2;
  if (params.m_max)
    j["m_max"] = *params.m_max;
  else
    j["m_max"] = nullptr;
  j["all"] = all_hits;
  j["run"] = params.run_id;
  return j;
}

std::string hit_json_line(const Hit& hit) {
  nlohmann::ordered_json j;
  j["run"] = hit.run;
  j["D"] = hit.D;
  j["m"] = hit.m;
  j["p"] = hit.p;
  j["numerator_bits"] = hit.numerator_bits;
  j["seq"] = hit.seq;
  return j.dump();
}

long long count_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) return 0;
  long long n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

std::vector<long long> primes_dividing_in_range(const Integer& N, long long P, long long cP) {
  if (sgn(N) == 0)
    throw std::domain_error("primes_dividing_in_range: a zero value cannot be searched");
  if (sgn(N) < 0) throw std::domain_error("primes_dividing_in_range: N must be >= 0");
  if (P < 2 || P > cP) throw std::domain_error("primes_dividing_in_range: need 2 <= P <= cP");
  return dividing_primes(N, P, cP, build_sieves(P, cP));
}

FirstHitOutcome first_hit(const SearchParams& params) {
  params.validate();
  FirstHitOutcome outcome;
  std::optional<CellHit> found;
  WalkCallbacks cb;
  cb.on_hit = [&](const CellHit& hit) {
    found = hit;
    return true;
  };
  const WalkResult walk = walk_cells(params, params.M1, params.D1, std::nullopt, cb);
  outcome.last_m = walk.last_m;
  outcome.last_D = walk.last_D;
  if (found) {
    check_hit_soundness(*found, params);
    outcome.hit = Hit{found->D, found->m, found->p, found->bits, params.run_id, 1};
  }
  return outcome;
}

double hit_probability(long long P, double c) {
  if (P < 3) throw std::domain_error("hit_probability: P must be >= 3");
  if (c < 1.0) throw std::domain_error("hit_probability: c must be >= 1");
  return 2.0 * (c - 1.0) / std::log(static_cast<double>(P));
}

PerMSuccess per_m_success(long long P, double c, double D1, double D2) {
  if (P < 3) throw std::domain_error("per_m_success: P must be >= 3");
  if (c < 1.0) throw std::domain_error("per_m_success: c must be >= 1");
  if (D2 < D1) throw std::domain_error("per_m_success: D2 must be >= D1");
  const double width = D2 - D1;
  // written as width / ((pi^2/6) ln P / (c-1)) so that the calibrated
  // width hits 1 exactly
  const double denom =
      (std::numbers::pi * std::numbers::pi / 6.0) * std::log(static_cast<double>(P)) /
      (c - 1.0);
  const double uncapped = width / denom;
  return {uncapped, std::min(1.0, uncapped)};
}

FieldReport field_report(long long D, long long p) {
  FundamentalDiscriminant fd(D);
  if (p < 3 || !is_prime(p)) throw std::domain_error("field_report: p must be an odd prime");
  if (p == D) throw std::domain_error("field_report: p = D is excluded");
  FieldReport report;
  report.D = D;
  report.p = p;
  report.degree = 2 * (p - 1);
  const double lgD = std::log2(static_cast<double>(D));
  const double lgp = std::log2(static_cast<double>(p));
  if (D % p == 0)
    report.log2_disc = (p - 1) * lgD + (p - 3) * lgp;
  else
    report.log2_disc = (p - 1) * lgD + (2 * p - 4) * lgp;
  report.storage_exponent_note =
      "Z-basis and LLL-reduced ideal representations take (p*log D)^O(1) bits; "
      "degree reported as 2(p-1), the relative degree over the quadratic subfield "
      "being p-1.";
  return report;
}

RunResult run_search(const SearchParams& params, const RunnerOptions& options) {
  params.validate();
  if (options.all_hits && !params.m_max)
    throw std::invalid_argument("search: all-hits mode requires m_max");
  if (options.log_path.empty()) throw std::invalid_argument("search: log path required");
  if (options.state_path.empty()) throw std::invalid_argument("search: state path required");

  int start_m = params.M1;
  long long start_D = params.D1;
  if (options.resume) {
    std::ifstream in(options.state_path);
    if (!in)
      throw std::runtime_error("search: cannot open resume state " + options.state_path);
    nlohmann::json state = nlohmann::json::parse(in);
    if (state.at("params") != nlohmann::json(params_json(params, options.all_hits)))
      throw std::invalid_argument("search: resume state was written with different parameters");
    start_m = state.at("next_m").get<int>();
    start_D = state.at("next_D").get<long long>();
  }

  std::ofstream log(options.log_path, std::ios::app);
  if (!log) throw std::runtime_error("search: cannot open hit log " + options.log_path);

  RunResult result;
  long long seq = count_lines(options.log_path);
  std::optional<Hit> first;

  WalkCallbacks cb;
  cb.on_hit = [&](const CellHit& cell) {
    check_hit_soundness(cell, params);
    Hit hit{cell.D, cell.m, cell.p, cell.bits, params.run_id, ++seq};
    log << hit_json_line(hit) << '\n';
    log.flush();
    if (!log) throw std::runtime_error("search: write to hit log failed");
    ++result.hits_logged;
    if (!first) first = hit;
    return !options.all_hits;
  };
  cb.on_checkpoint = [&](int next_m, long long next_D) {
    nlohmann::ordered_json state;
    state["params"] = params_json(params, options.all_hits);
    state["next_m"] = next_m;
    state["next_D"] = next_D;
    std::ofstream out(options.state_path, std::ios::trunc);
    out << state.dump() << '\n';
    if (!out) throw std::runtime_error("search: write to state file failed");
  };

  const WalkResult walk =
      walk_cells(params, start_m, start_D, options.stop_after_cells, cb);
  result.first = first;
  result.last_m = walk.last_m;
  result.last_D = walk.last_D;
  switch (walk.end) {
    case WalkEnd::stopped_on_hit:
      result.status = RunStatus::hit_found;
      std::remove(options.state_path.c_str());
      break;
    case WalkEnd::exhausted:
      result.status = options.all_hits && result.hits_logged > 0 ? RunStatus::completed
                                                                 : RunStatus::exhausted;
      std::remove(options.state_path.c_str());
      break;
    case WalkEnd::cell_budget:
      result.status = RunStatus::interrupted;
      break;
  }
  return result;
}

}  // namespace qirr
