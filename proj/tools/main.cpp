#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "qirr/irregularity.hpp"
#include "qirr/search.hpp"
#include "qirr/stats.hpp"

namespace {

using namespace qirr;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

// "scan.csv" -> "scan" + suffix
std::string with_suffix(const std::string& path, const std::string& suffix) {
  const size_t dot = path.find_last_of('.');
  const size_t slash = path.find_last_of('/');
  const std::string stem =
      (dot != std::string::npos && (slash == std::string::npos || dot > slash))
          ? path.substr(0, dot)
          : path;
  return stem + suffix;
}

struct ScanArgs {
  long long disc_min = 0, disc_max = 0, p_max = 0;
  std::string index = "chi";
  std::string out;
  std::string group_by = "none";
  bool summary = false;
  bool exact_only = false;
  int threads = 1;
};

int cmd_scan(const ScanArgs& args) {
  const IndexKind kind = args.index == "d" ? IndexKind::d : IndexKind::chi;
  ScanOptions options;
  options.threads = args.threads;
  options.path = args.exact_only ? EvalPath::exact_only : EvalPath::automatic;
  const auto rows = scan_table(args.disc_min, args.disc_max, args.p_max, kind, options);
  if (args.out.empty()) {
    write_scan_csv(std::cout, rows);
  } else {
    auto out = open_output(args.out);
    write_scan_csv(out, rows);
    if (!out) throw IoError("write failed: " + args.out);
  }
  if (!args.summary) return 0;
  if (args.out.empty())
    throw std::invalid_argument("scan: --summary requires --out to derive file names");
  if (rows.empty()) throw std::invalid_argument("scan: nothing to summarize");

  const std::string hist_path = with_suffix(args.out, ".hist.csv");
  const std::string report_path = with_suffix(args.out, ".report.json");
  if (args.group_by == "none") {
    const IndexHistogram hist = histogram(rows);
    auto hist_out = open_output(hist_path);
    write_histogram_csv(hist_out, hist);
    auto report_out = open_output(report_path);
    report_out << report_json(chi_squared(hist)) << '\n';
  } else {
    const Grouping grouping =
        args.group_by == "prime" ? Grouping::by_prime : Grouping::by_discriminant;
    const auto groups = histogram_by(rows, grouping);
    auto hist_out = open_output(hist_path);
    hist_out << "group,r,count,predicted_count,predicted_fraction\n";
    nlohmann::ordered_json report;
    report["group_by"] = args.group_by;
    report["groups"] = nlohmann::ordered_json::array();
    for (const auto& [key, hist] : groups) {
      const int max_r = hist.counts.empty() ? 0 : hist.counts.rbegin()->first;
      for (int r = 0; r <= max_r; ++r) {
        const double frac = predicted_pmf(static_cast<unsigned>(r));
        hist_out << key << ',' << r << ',' << hist.count(r) << ','
                 << format_g6(hist.total * frac) << ',' << format_g6(frac) << '\n';
      }
      nlohmann::ordered_json g;
      g["key"] = key;
      g["report"] = nlohmann::ordered_json::parse(report_json(chi_squared(hist)));
      report["groups"].push_back(g);
    }
    auto report_out = open_output(report_path);
    report_out << report.dump() << '\n';
  }
  return 0;
}

struct StatsArgs {
  std::string rows_path;
  std::optional<long long> p_min, p_max, disc_min, disc_max;
  std::string group_by = "none";
  std::string json_path, csv_path;
};

int cmd_stats(const StatsArgs& args) {
  std::ifstream in(args.rows_path);
  if (!in) throw IoError("cannot open rows file: " + args.rows_path);
  std::vector<ScanRow> rows = read_scan_csv(in);
  std::erase_if(rows, [&](const ScanRow& row) {
    if (args.p_min && row.p < *args.p_min) return true;
    if (args.p_max && row.p >= *args.p_max) return true;
    if (args.disc_min && row.D < *args.disc_min) return true;
    if (args.disc_max && row.D >= *args.disc_max) return true;
    return false;
  });
  if (rows.empty()) throw std::invalid_argument("stats: no rows after filtering");

  std::string json_text;
  if (args.group_by == "none") {
    const IndexHistogram hist = histogram(rows);
    json_text = report_json(chi_squared(hist));
    if (!args.csv_path.empty()) {
      auto out = open_output(args.csv_path);
      write_histogram_csv(out, hist);
    }
  } else {
    const Grouping grouping =
        args.group_by == "prime" ? Grouping::by_prime : Grouping::by_discriminant;
    nlohmann::ordered_json report;
    report["group_by"] = args.group_by;
    report["groups"] = nlohmann::ordered_json::array();
    for (const auto& [key, hist] : histogram_by(rows, grouping)) {
      nlohmann::ordered_json g;
      g["key"] = key;
      g["report"] = nlohmann::ordered_json::parse(report_json(chi_squared(hist)));
      report["groups"].push_back(g);
    }
    json_text = report.dump();
    if (!args.csv_path.empty())
      throw std::invalid_argument("stats: --csv is only available without --group-by");
  }
  if (args.json_path.empty()) {
    std::cout << json_text << '\n';
  } else {
    auto out = open_output(args.json_path);
    out << json_text << '\n';
  }
  return 0;
}

struct SearchArgs {
  long long pmin = 0;
  double c = 0.0;
  int m_start = 1;
  long long disc_min = 0, disc_max = 0;
  std::optional<int> m_max;
  std::string log_path, state_path, run_id = "run";
  bool all = false, resume = false;
  std::optional<long long> max_cells;
  int threads = 1;
};

int cmd_search(const SearchArgs& args) {
  SearchParams params;
  params.P = args.pmin;
  params.c = args.c;
  params.M1 = args.m_start;
  params.D1 = args.disc_min;
  params.D2 = args.disc_max;
  params.m_max = args.m_max;
  params.threads = args.threads;
  params.run_id = args.run_id;

  RunnerOptions options;
  options.all_hits = args.all;
  options.log_path = args.log_path;
  options.state_path =
      args.state_path.empty() ? with_suffix(args.log_path, ".state.json") : args.state_path;
  options.resume = args.resume;
  options.stop_after_cells = args.max_cells;

  const RunResult result = run_search(params, options);
  switch (result.status) {
    case RunStatus::hit_found:
      std::cout << "hit D=" << result.first->D << " m=" << result.first->m
                << " p=" << result.first->p << '\n';
      return 0;
    case RunStatus::completed:
      std::cout << "completed, hits logged: " << result.hits_logged << '\n';
      return 0;
    case RunStatus::interrupted:
      std::cout << "interrupted at m=" << result.last_m << ", resume with --resume\n";
      return 0;
    case RunStatus::exhausted:
      std::cerr << "no hit up to m_max; last cell tried: m=" << result.last_m
                << " D=" << result.last_D << '\n';
      return 3;
  }
  return 0;
}

int dispatch_errors(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"special values of quadratic L-functions, quadratic irregularity "
               "scans, first-hit searches, and distribution tests"};
  app.require_subcommand(1);

  // disc
  auto* disc = app.add_subcommand("disc", "list fundamental discriminants in [min, max)");
  long long disc_min = 0, disc_max = 0;
  bool disc_count = false;
  disc->add_option("--min", disc_min, "lower bound (inclusive)")->required();
  disc->add_option("--max", disc_max, "upper bound (exclusive)")->required();
  disc->add_flag("--count", disc_count, "print only the count");

  // value
  auto* value = app.add_subcommand("value", "one special value, exact or mod p");
  std::string value_kind;
  unsigned value_m = 0;
  long long value_disc = 0;
  std::optional<long long> value_mod;
  value->add_option("--kind", value_kind, "zeta | lchi | zetad")
      ->required()
      ->check(CLI::IsMember({"zeta", "lchi", "zetad"}));
  value->add_option("--m", value_m, "weight parameter m >= 1 (argument 1-2m)")->required();
  value->add_option("--disc", value_disc, "fundamental discriminant (lchi/zetad)");
  value->add_option("--mod", value_mod, "odd prime for the residue fast path");

  // scan
  auto* scan = app.add_subcommand("scan", "index-of-irregularity table over (D, p)");
  ScanArgs scan_args;
  scan->add_option("--disc-min", scan_args.disc_min, "discriminant lower bound")->required();
  scan->add_option("--disc-max", scan_args.disc_max, "discriminant upper bound (exclusive)")
      ->required();
  scan->add_option("--p-max", scan_args.p_max, "prime upper bound (exclusive)")->required();
  scan->add_option("--index", scan_args.index, "chi | d")
      ->check(CLI::IsMember({"chi", "d"}));
  scan->add_option("--out", scan_args.out, "CSV output path (default stdout)");
  scan->add_flag("--summary", scan_args.summary,
                 "also write <out>.hist.csv and <out>.report.json");
  scan->add_option("--group-by", scan_args.group_by, "none | prime | disc")
      ->check(CLI::IsMember({"none", "prime", "disc"}));
  scan->add_flag("--exact-only", scan_args.exact_only,
                 "bypass the modular fast path (slow; cross-checking)");
  scan->add_option("--threads", scan_args.threads, "worker threads (1 = reference)");

  // search
  auto* search = app.add_subcommand("search", "first-hit search for large divisors");
  SearchArgs search_args;
  search->add_option("--pmin", search_args.pmin, "lower end P of the prime window")
      ->required();
  search->add_option("--c", search_args.c, "window ratio; primes in [P, cP]")->required();
  search->add_option("--m-start", search_args.m_start, "first m (M1)")->required();
  search->add_option("--disc-min", search_args.disc_min, "D1 (inclusive)")->required();
  search->add_option("--disc-max", search_args.disc_max, "D2 (inclusive)")->required();
  search->add_option("--m-max", search_args.m_max, "stop after this m");
  search->add_option("--log", search_args.log_path, "JSONL hit log (appended)")->required();
  search->add_option("--state", search_args.state_path,
                     "resume-state path (default <log>.state.json)");
  search->add_option("--run", search_args.run_id, "run identifier for log lines");
  search->add_flag("--all", search_args.all, "log every hit instead of stopping at the first");
  search->add_flag("--resume", search_args.resume, "continue from the recorded state");
  search->add_option("--max-cells", search_args.max_cells,
                     "stop after this many (m, D) cells (state is kept)");
  search->add_option("--threads", search_args.threads, "worker threads (1 = reference)");

  // stats
  auto* stats = app.add_subcommand("stats", "histogram + chi-squared report from scan rows");
  StatsArgs stats_args;
  stats->add_option("--rows", stats_args.rows_path, "scan CSV input")->required();
  stats->add_option("--p-min", stats_args.p_min, "keep rows with p >= this");
  stats->add_option("--p-max", stats_args.p_max, "keep rows with p < this");
  stats->add_option("--disc-min", stats_args.disc_min, "keep rows with D >= this");
  stats->add_option("--disc-max", stats_args.disc_max, "keep rows with D < this");
  stats->add_option("--group-by", stats_args.group_by, "none | prime | disc")
      ->check(CLI::IsMember({"none", "prime", "disc"}));
  stats->add_option("--json", stats_args.json_path, "report output path (default stdout)");
  stats->add_option("--csv", stats_args.csv_path, "histogram CSV output path");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "heuristic hit probabilities and costs");
  long long est_pmin = 0;
  double est_c = 0.0;
  std::optional<double> est_dmin, est_dmax;
  estimate->add_option("--pmin", est_pmin, "lower end P of the prime window")->required();
  estimate->add_option("--c", est_c, "window ratio")->required();
  estimate->add_option("--disc-min", est_dmin, "D1");
  estimate->add_option("--disc-max", est_dmax, "D2");

  // field
  auto* field = app.add_subcommand("field", "size report for the field built from (D, p)");
  long long field_disc = 0, field_p = 0;
  field->add_option("--disc", field_disc, "fundamental discriminant")->required();
  field->add_option("--p", field_p, "odd prime, p != D")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (disc->parsed()) {
    return dispatch_errors([&] {
      const auto discs = disc_max - 1 >= disc_min
                             ? fundamental_range(disc_min, disc_max - 1)
                             : std::vector<long long>{};
      if (disc_count) {
        std::cout << discs.size() << '\n';
      } else {
        for (const long long d : discs) std::cout << d << '\n';
      }
      return 0;
    });
  }
  if (value->parsed()) {
    return dispatch_errors([&] {
      if (value_kind == "zeta") {
        if (value_mod)
          std::cout << zeta_neg_mod(value_m, *value_mod) << '\n';
        else
          std::cout << zeta_neg(value_m).str() << '\n';
        return 0;
      }
      if (value_disc == 0)
        throw std::invalid_argument("value: --disc is required for lchi/zetad");
      if (value_kind == "lchi") {
        if (value_mod)
          std::cout << l_chi_mod(value_disc, value_m, *value_mod) << '\n';
        else
          std::cout << l_chi(value_disc, value_m).value.str() << '\n';
        return 0;
      }
      if (value_mod) {
        const std::uint64_t z = zeta_neg_mod(value_m, *value_mod);
        const std::uint64_t l = l_chi_mod(value_disc, value_m, *value_mod);
        std::cout << z * l % static_cast<std::uint64_t>(*value_mod) << '\n';
      } else {
        std::cout << zeta_d(value_disc, value_m).value.str() << '\n';
      }
      return 0;
    });
  }
  if (scan->parsed()) return dispatch_errors([&] { return cmd_scan(scan_args); });
  if (search->parsed()) return dispatch_errors([&] { return cmd_search(search_args); });
  if (stats->parsed()) return dispatch_errors([&] { return cmd_stats(stats_args); });
  if (estimate->parsed()) {
    return dispatch_errors([&] {
      nlohmann::ordered_json j;
      j["hit_probability"] = std::stod(format_g6(hit_probability(est_pmin, est_c)));
      if (est_dmin && est_dmax) {
        const PerMSuccess s = per_m_success(est_pmin, est_c, *est_dmin, *est_dmax);
        j["per_m_success"] = std::stod(format_g6(s.capped));
        j["per_m_success_uncapped"] = std::stod(format_g6(s.uncapped));
        if (s.uncapped > 0.0)
          j["expected_m_rounds"] = std::stod(format_g6(1.0 / s.uncapped));
        else
          j["expected_m_rounds"] = nullptr;
        j["note"] = "expected m-rounds ~ 1/per_m_success; checking the window costs "
                    "one divisibility pass over ~P/ln(P) primes per value";
      }
      std::cout << j.dump() << '\n';
      return 0;
    });
  }
  if (field->parsed()) {
    return dispatch_errors([&] {
      const FieldReport report = field_report(field_disc, field_p);
      nlohmann::ordered_json j;
      j["D"] = report.D;
      j["p"] = report.p;
      j["degree"] = report.degree;
      j["log2_disc"] = std::stod(format_g6(report.log2_disc));
      j["note"] = report.storage_exponent_note;
      std::cout << j.dump() << '\n';
      return 0;
    });
  }
  return 2;
}
