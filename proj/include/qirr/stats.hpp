#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qirr/irregularity.hpp"

namespace qirr {

/// Predicted probability (1/2)^r e^(-1/2) / r! of index r.
double predicted_pmf(unsigned r);

enum class Grouping { pooled, by_discriminant, by_prime };

struct IndexHistogram {
  std::map<int, long long> counts;
  long long total = 0;
  std::string grouping;  // "pooled", "D=5", "p=67", ...

  long long count(int r) const {
    const auto it = counts.find(r);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Pooled counts by index; throws on empty input.
IndexHistogram histogram(const std::vector<ScanRow>& rows);

/// One histogram per group key (the discriminant or the prime), key-ascending.
std::vector<std::pair<long long, IndexHistogram>> histogram_by(
    const std::vector<ScanRow>& rows, Grouping grouping);

struct ChiSquaredReport {
  struct Bin {
    std::string label;  // "0", "1", "2", ">=3"
    long long observed = 0;
    double expected = 0.0;
  };
  double statistic = 0.0;
  int df = 3;
  double significance = 0.0;
  std::array<Bin, 4> bins;
};

/// Goodness of fit against the predicted distribution over the bins
/// r = 0, 1, 2, >=3 (so df = 3).
ChiSquaredReport chi_squared(const IndexHistogram& hist);

/// Upper-tail probability of the chi-squared distribution: Q(df/2, x/2).
double significance(double statistic, int df);

/// Regularized incomplete gamma functions (series / continued fraction).
double regularized_gamma_q(double a, double x);
double regularized_gamma_p(double a, double x);

/// Fraction of rows with index exactly r.
double u_fraction(const IndexHistogram& hist, int r);

/// {"chi2":...,"df":3,"significance":...,"bins":[{"r":"0","obs":...,"exp":...},...]}
std::string report_json(const ChiSquaredReport& report);

/// CSV with header "r,count,predicted_count,predicted_fraction".
void write_histogram_csv(std::ostream& out, const IndexHistogram& hist);

/// Locale-independent float formatting with 6 significant digits.
std::string format_g6(double value);

}  // namespace qirr
