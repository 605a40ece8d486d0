#include "qirr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace qirr {

double predicted_pmf(unsigned r) {
  double value = std::exp(-0.5);
  for (unsigned i = 1; i <= r; ++i) value *= 0.5 / i;
  return value;
}

IndexHistogram histogram(const std::vector<ScanRow>& rows) {
  if (rows.empty()) throw std::domain_error("histogram: empty input");
  IndexHistogram h;
  h.grouping = "pooled";
  for (const ScanRow& row : rows) {
    ++h.counts[row.r];
    ++h.total;
  }
  return h;
}

std::vector<std::pair<long long, IndexHistogram>> histogram_by(
    const std::vector<ScanRow>& rows, Grouping grouping) {
  if (rows.empty()) throw std::domain_error("histogram_by: empty input");
  if (grouping == Grouping::pooled) return {{0, histogram(rows)}};
  std::map<long long, IndexHistogram> groups;
  for (const ScanRow& row : rows) {
    const long long key = grouping == Grouping::by_prime ? row.p : row.D;
    IndexHistogram& h = groups[key];
    ++h.counts[row.r];
    ++h.total;
  }
  std::vector<std::pair<long long, IndexHistogram>> out;
  out.reserve(groups.size());
  for (auto& [key, hist] : groups) {
    hist.grouping =
        (grouping == Grouping::by_prime ? "p=" : "D=") + std::to_string(key);
    out.emplace_back(key, std::move(hist));
  }
  return out;
}

namespace {

// P(a,x) by its power series
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a,x) by a modified-Lentz continued fraction
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("regularized_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("regularized_gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double significance(double statistic, int df) {
  if (statistic < 0.0) throw std::domain_error("significance: statistic must be >= 0");
  if (df < 1) throw std::domain_error("significance: df must be >= 1");
  return regularized_gamma_q(df / 2.0, statistic / 2.0);
}

ChiSquaredReport chi_squared(const IndexHistogram& hist) {
  if (hist.total < 1) throw std::domain_error("chi_squared: empty histogram");
  ChiSquaredReport report;
  const double p0 = predicted_pmf(0), p1 = predicted_pmf(1), p2 = predicted_pmf(2);
  const double probs[4] = {p0, p1, p2, 1.0 - p0 - p1 - p2};
  long long tail = 0;
  for (const auto& [r, count] : hist.counts)
    if (r >= 3) tail += count;
  const long long observed[4] = {hist.count(0), hist.count(1), hist.count(2), tail};
  const char* labels[4] = {"0", "1", "2", ">=3"};
  double stat = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double expected = hist.total * probs[i];
    const double diff = observed[i] - expected;
    stat += diff * diff / expected;
    report.bins[i] = {labels[i], observed[i], expected};
  }
  report.statistic = stat;
  report.df = 3;
  report.significance = significance(stat, 3);
  return report;
}

double u_fraction(const IndexHistogram& hist, int r) {
  if (hist.total < 1) throw std::domain_error("u_fraction: empty histogram");
  return static_cast<double>(hist.count(r)) / static_cast<double>(hist.total);
}

std::string format_g6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

namespace {

// round to 6 significant digits so emitted reports are byte-stable
double rounded6(double value) { return std::stod(format_g6(value)); }

}  // namespace

std::string report_json(const ChiSquaredReport& report) {
  nlohmann::ordered_json j;
  j["chi2"] = rounded6(report.statistic);
  j["df"] = report.df;
  j["significance"] = rounded6(report.significance);
  j["bins"] = nlohmann::ordered_json::array();
  for (const auto& bin : report.bins) {
    nlohmann::ordered_json b;
    b["r"] = bin.label;
    b["obs"] = bin.observed;
    b["exp"] = rounded6(bin.expected);
    j["bins"].push_back(b);
  }
  return j.dump();
}

void write_histogram_csv(std::ostream& out, const IndexHistogram& hist) {
  out << "r,count,predicted_count,predicted_fraction\n";
  const int max_r = hist.counts.empty() ? 0 : hist.counts.rbegin()->first;
  for (int r = 0; r <= max_r; ++r) {
    const double frac = predicted_pmf(static_cast<unsigned>(r));
    out << r << ',' << hist.count(r) << ',' << format_g6(hist.total * frac) << ','
        << format_g6(frac) << '\n';
  }
}

}  // namespace qirr
