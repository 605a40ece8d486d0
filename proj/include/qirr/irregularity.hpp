#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "qirr/lvalues.hpp"

namespace qirr {

/// Slot-range bound: p-1, or (p-1)/2 when D = p.  Requires p an odd prime
/// and D fundamental.
long long delta(long long D, long long p);

/// The slots tested for one pair (D, p): the interior weights
/// 2 <= 2m <= delta-2 and the terminal weight delta itself.  The interior
/// is empty iff delta <= 2 (e.g. every D != 3 at p = 3).
struct SlotRange {
  long long D = 0;
  long long p = 0;
  long long delta = 0;
  std::vector<unsigned> interior;
  unsigned terminal = 0;
};

SlotRange slot_range(long long D, long long p);

enum class IndexKind { chi, d };

/// Force the all-exact evaluation path (used to cross-check the modular
/// fast path).
enum class EvalPath { automatic, exact_only };

/// Index of irregularity of p for the discriminant D, together with the
/// exact p-adic valuation of each tested slot value.  Interior slots store
/// v_p of L(1-2m, chi_D) (chi kind) or of zeta_D(1-2m) (d kind); the
/// terminal slot stores v_p of L(1-delta, chi_D) resp. p*zeta_D(1-delta).
struct IndexResult {
  long long D = 0;
  long long p = 0;
  int r = 0;
  std::vector<std::pair<unsigned, long>> slot_valuations;  // weight -> v_p
};

/// Index of chi-irregularity: slots are the interior weights
/// 2 <= 2m <= delta-2 testing v_p(L(1-2m, chi_D)) >= 1, plus the terminal
/// weight delta testing v_p(L(1-delta, chi_D)) >= 1.  Interior slots use
/// the modular fast path when its preconditions hold; the terminal slot is
/// always evaluated exactly.
IndexResult chi_index(long long D, long long p, EvalPath path = EvalPath::automatic);

/// Index of D-irregularity: interior slots test v_p(zeta_D(1-2m)) >= 1,
/// the terminal slot tests v_p(p * zeta_D(1-delta)) >= 1.
IndexResult d_index(long long D, long long p, EvalPath path = EvalPath::automatic);

/// True iff d_index(D, p).r == 0.
bool is_d_regular(long long D, long long p);

struct ScanRow {
  long long D = 0;
  long long p = 0;
  int r = 0;
};

struct ScanOptions {
  int threads = 1;
  EvalPath path = EvalPath::automatic;
};

/// One row per (fundamental D in [d_lo, d_end), odd prime p in [3, p_max)),
/// sorted D-major then p.  Both upper bounds are exclusive.
std::vector<ScanRow> scan_table(long long d_lo, long long d_end, long long p_max,
                                IndexKind kind, const ScanOptions& options = {});

/// CSV with header "D,p,r", one integer triple per line.
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);
std::vector<ScanRow> read_scan_csv(std::istream& in);

}  // namespace qirr
