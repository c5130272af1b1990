#ifndef MFZ_HARNESS_COMMANDS_HPP
#define MFZ_HARNESS_COMMANDS_HPP

#include <chrono>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mfz/dirichlet.hpp"
#include "mfz/exponent.hpp"
#include "mfz/harness/config.hpp"
#include "mfz/harness/csv.hpp"
#include "mfz/harness/verify.hpp"
#include "mfz/prime_sums.hpp"
#include "mfz/sieve.hpp"
#include "mfz/sieve_cache.hpp"

// One function per CLI subcommand. Each takes a validated config and a
// sieve covering sieve.limit, writes its CSV under output_dir and returns
// what it wrote.

namespace mfz::harness {

struct SieveSummary {
  std::uint64_t limit = 0;
  std::uint64_t prime_count = 0;
  double seconds = 0.0;
  bool from_cache = false;
};

/// Builds the sieve, or loads it from sieve.cache_dir when a cache file for
/// this limit exists (and writes one after building).
inline FactorSieve obtain_sieve(const ExperimentConfig& cfg, unsigned threads, SieveSummary* summary = nullptr) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  std::optional<FactorSieve> sieve;
  bool from_cache = false;
  std::filesystem::path cache;
  if (!cfg.cache_dir.empty()) {
    cache = sieve_cache_path(cfg.cache_dir, cfg.sieve_limit);
    sieve = load_sieve(cache);
    from_cache = sieve.has_value();
  }
  if (!sieve) {
    sieve = build_sieve(cfg.sieve_limit, threads);
    if (!cache.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(cfg.cache_dir, ec);
      if (ec) throw IoError("cannot create cache directory", cfg.cache_dir);
      save_sieve(cache, *sieve);
    }
  }
  if (summary) {
    summary->limit = sieve->limit();
    summary->prime_count = prime_count(sieve->limit(), *sieve);
    summary->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    summary->from_cache = from_cache;
  }
  return std::move(*sieve);
}

inline SieveSummary cmd_sieve(const ExperimentConfig& cfg, unsigned threads, std::ostream& out) {
  SieveSummary summary;
  obtain_sieve(cfg, threads, &summary);
  out << "limit " << summary.limit << "\n"
      << "primes " << summary.prime_count << "\n"
      << (summary.from_cache ? "loaded in " : "built in ") << summary.seconds << " s\n";
  return summary;
}

inline std::filesystem::path output_path(const ExperimentConfig& cfg, const std::string& name) {
  return std::filesystem::path(cfg.output_dir) / name;
}

inline std::filesystem::path cmd_partial_sums(const ExperimentConfig& cfg, DerivedFunctionKind kind,
                                              const FactorSieve& sieve, unsigned threads) {
  validate(cfg);
  const auto series = checkpoint_partial_sums(cfg.spec, kind, cfg.x_max(), cfg.schedule(), sieve, threads);
  const auto path = output_path(cfg, "partial_sums_" + std::string(to_string(kind)) + ".csv");
  write_text_file(path, checkpoints_csv("sum", series.checkpoints));
  return path;
}

inline std::filesystem::path cmd_prime_sum(const ExperimentConfig& cfg, const FactorSieve& sieve) {
  validate(cfg);
  const auto trace = prime_sum_S(cfg.spec, cfg.x_max(), cfg.schedule(), sieve);
  const auto path = output_path(cfg, "prime_sum.csv");
  write_text_file(path, checkpoints_csv("value", trace.checkpoints));
  return path;
}

inline const std::vector<std::string>& series_names() {
  static const std::vector<std::string> names{"zeta", "F", "H", "G", "G_sum", "Fmu2", "U", "F_euler"};
  return names;
}

struct SeriesRow {
  ComplexArgument s;
  std::optional<SeriesEval> eval;
  std::string error;
};

inline SeriesEval evaluate_series(const std::string& which, const ExperimentConfig& cfg, ComplexArgument s,
                                  const FactorSieve& sieve, unsigned threads) {
  using K = DerivedFunctionKind;
  if (which == "zeta") return zeta(s, cfg.zeta_tol);
  if (which == "F") return dirichlet_sum(K::F_plain, cfg.spec, s, cfg.truncation_N, sieve, threads);
  if (which == "H") return dirichlet_sum(K::H_conv, cfg.spec, s, cfg.truncation_N, sieve, threads);
  if (which == "G_sum") return dirichlet_sum(K::G_conv, cfg.spec, s, cfg.truncation_N, sieve, threads);
  if (which == "Fmu2") return dirichlet_sum(K::F_mu2, cfg.spec, s, cfg.truncation_N, sieve, threads);
  if (which == "G") return euler_product_G(cfg.spec, s, cfg.euler_P, sieve);
  if (which == "U") return euler_product_U(cfg.spec, s, cfg.euler_P, sieve);
  if (which == "F_euler") return dirichlet_F_via_euler(cfg.spec, s, cfg.euler_P, sieve, cfg.zeta_tol);
  throw std::invalid_argument("unknown series '" + which + "'");
}

inline std::string series_csv(const std::vector<SeriesRow>& rows) {
  std::string out = "sigma,t,re,im,terms,tail_bound,method,status\n";
  for (const auto& r : rows) {
    out += format_real(r.s.sigma) + "," + format_real(r.s.t) + ",";
    if (r.eval) {
      const auto& e = *r.eval;
      out += format_real(e.value.real()) + "," + format_real(e.value.imag()) + "," + std::to_string(e.truncation_N) +
             "," + (e.tail_bound ? format_real(*e.tail_bound) : std::string("heuristic")) + "," +
             std::string(to_string(e.method)) + ",ok\n";
    } else {
      out += "nan,nan,0,nan,," + csv_field(r.error) + "\n";
    }
  }
  return out;
}

/// Evaluates one series over the grid. Per-point failures (pole, domain,
/// convergence) are recorded in the row and the run continues.
inline std::vector<SeriesRow> cmd_series(const ExperimentConfig& cfg, const std::string& which,
                                         const FactorSieve& sieve, unsigned threads, std::ostream& out) {
  validate(cfg);
  if (cfg.s_grid.empty()) throw std::invalid_argument("series: series.s_grid is empty");
  if (std::find(series_names().begin(), series_names().end(), which) == series_names().end()) {
    throw std::invalid_argument("unknown series '" + which + "'");
  }
  std::vector<SeriesRow> rows;
  for (const auto& s : cfg.s_grid) {
    SeriesRow row{s, std::nullopt, {}};
    try {
      row.eval = evaluate_series(which, cfg, s, sieve, threads);
    } catch (const std::exception& e) {
      row.error = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  const std::string csv = series_csv(rows);
  write_text_file(output_path(cfg, "series_" + which + ".csv"), csv);
  out << csv;
  return rows;
}

inline VerificationReport cmd_verify(const ExperimentConfig& cfg, const FactorSieve& sieve, unsigned threads,
                                     std::ostream& out) {
  VerifyOptions opts;
  opts.threads = threads;
  auto report = run_verification(cfg, sieve, opts);
  const std::string csv = report_csv(report);
  write_text_file(output_path(cfg, "report.csv"), csv);
  for (const auto& l : report.lines) {
    out << to_string(l.status) << "  " << l.check_name << "  measured=" << format_real(l.measured)
        << "  budget=" << format_real(l.budget) << "\n";
  }
  out << "config_hash " << report.config_hash << "\n";
  return report;
}

inline std::string exponent_csv(const std::vector<std::pair<PartialSumSeries, ExponentFit>>& rows) {
  std::string out = "spec_id,kind,alpha_hat,stderr,x_lo,x_hi,points_used\n";
  for (const auto& [series, fit] : rows) {
    out += csv_field(series.spec_id) + "," + std::string(to_string(series.kind)) + "," + format_real(fit.alpha_hat) +
           "," + format_real(fit.std_error) + "," + std::to_string(fit.window.lo) + "," +
           std::to_string(fit.window.hi) + "," + std::to_string(fit.points_used) + "\n";
  }
  return out;
}

inline ExponentFit cmd_exponent(const ExperimentConfig& cfg, DerivedFunctionKind kind, const FactorSieve& sieve,
                                unsigned threads) {
  validate(cfg);
  auto series = checkpoint_partial_sums(cfg.spec, kind, cfg.x_max(), cfg.schedule(), sieve, threads);
  const auto fit = fit_exponent(series, default_fit_window(series), cfg.epsilon_slack);
  write_text_file(output_path(cfg, "exponent.csv"), exponent_csv({{std::move(series), fit}}));
  return fit;
}

}  // namespace mfz::harness

#endif  // MFZ_HARNESS_COMMANDS_HPP
