#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qirr/lvalues.hpp"

namespace qirr {

struct SearchParams {
  long long P = 0;
  double c = 0.0;
  int M1 = 1;
  long long D1 = 0;
  long long D2 = 0;
  std::optional<int> m_max;
  int threads = 1;
  std::string run_id = "run";

  /// Inclusive upper end of the prime window [P, cP].
  long long p_hi() const;
  void validate() const;
};

/// A found divisor: p prime in [P, cP] dividing the numerator of
/// zeta_D(1-2m), with m <= (p-1)/2.
struct Hit {
  long long D = 0;
  int m = 0;
  long long p = 0;
  int numerator_bits = 0;
  std::string run;
  long long seq = 0;
};

/// Exactly the primes q in [P, cP] dividing N; requires N > 0.
/// When N < (cP)^2 the number is fully factored by trial division over
/// primes <= sqrt(N); otherwise N is trial-divided by the sieved primes of
/// the window.
std::vector<long long> primes_dividing_in_range(const Integer& N, long long P, long long cP);

struct FirstHitOutcome {
  std::optional<Hit> hit;
  int last_m = 0;
  long long last_D = 0;
};

/// The first-hit search: m ascending from M1 (outer), fundamental
/// D in [D1, D2] ascending (inner); within a cell the smallest dividing
/// prime wins.  Deterministic, also under --threads > 1.
FirstHitOutcome first_hit(const SearchParams& params);

/// Heuristic chance that some prime in [P, cP] divides one value:
/// 2(c-1)/ln P.
double hit_probability(long long P, double c);

struct PerMSuccess {
  double uncapped = 0.0;
  double capped = 0.0;
};

/// Heuristic chance of success for one m over the discriminant window:
/// (3/pi^2) * 2 (D2-D1)(c-1) / ln P, also capped at 1 for reporting.
PerMSuccess per_m_success(long long P, double c, double D1, double D2);

/// Size report for the degree-2(p-1) field built from (D, p).
struct FieldReport {
  long long D = 0;
  long long p = 0;
  long long degree = 0;
  double log2_disc = 0.0;
  std::string storage_exponent_note;
};

FieldReport field_report(long long D, long long p);

/// Runs a search while appending hits to a JSONL log and checkpointing
/// resume state after each completed cell batch.  Used by the CLI; also
/// exercised directly by tests via stop_after_cells.
struct RunnerOptions {
  bool all_hits = false;                       // keep going after the first hit
  std::string log_path;                        // JSONL, appended
  std::string state_path;                      // resume checkpoint
  bool resume = false;                         // continue from state_path
  std::optional<long long> stop_after_cells;   // simulate an interruption
};

enum class RunStatus { hit_found, exhausted, interrupted, completed };

struct RunResult {
  RunStatus status = RunStatus::exhausted;
  std::optional<Hit> first;
  long long hits_logged = 0;
  int last_m = 0;
  long long last_D = 0;
};

RunResult run_search(const SearchParams& params, const RunnerOptions& options);

}  // namespace qirr
