#ifndef MFZ_HARNESS_VERIFY_HPP
#define MFZ_HARNESS_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mfz/dirichlet.hpp"
#include "mfz/exponent.hpp"
#include "mfz/harness/config.hpp"
#include "mfz/harness/csv.hpp"
#include "mfz/multiplicative.hpp"
#include "mfz/prime_sums.hpp"

namespace mfz::harness {

struct ReportLine {
  std::string check_name;
  Verdict status = Verdict::inconclusive;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double budget = std::numeric_limits<double>::quiet_NaN();  // budget or threshold
};

struct VerificationReport {
  std::vector<ReportLine> lines;
  std::string config_hash;

  bool any_failed() const {
    return std::any_of(lines.begin(), lines.end(), [](const ReportLine& l) { return l.status == Verdict::fail; });
  }
  int exit_code() const { return any_failed() ? 1 : 0; }
};

inline std::string report_csv(const VerificationReport& report) {
  std::string out = "check_name,status,measured,budget\n";
  for (const auto& l : report.lines) {
    out += csv_field(l.check_name) + "," + std::string(to_string(l.status)) + "," + format_real(l.measured) + "," +
           format_real(l.budget) + "\n";
  }
  return out;
}

// Replaces a(n) just before it enters a Dirichlet sum; used to inject faults.
using CoefficientHook = std::function<double(DerivedFunctionKind, std::uint64_t, double)>;

struct VerifyOptions {
  unsigned threads = 1;
  CoefficientHook coefficient_hook;
};

inline std::string point_label(ComplexArgument s) {
  return "s=" + format_real(s.sigma) + (s.t < 0 ? "" : "+") + format_real(s.t) + "i";
}

// Scan bound for the prime-power nonnegativity check.
inline constexpr std::uint64_t nonnegativity_scan_limit = 1'000'000;
// Scan bound for the explicit divisor-sum comparison.
inline constexpr std::uint64_t divisor_oracle_limit = 10'000;

namespace detail {

// Minimum of kind over all prime powers p^m <= bound.
inline double min_over_prime_powers(const PrimeFunctionSpec& spec, DerivedFunctionKind kind, std::uint64_t bound,
                                    const FactorSieve& sieve) {
  double lowest = std::numeric_limits<double>::infinity();
  for_each_prime(bound, sieve, [&](std::uint64_t p) {
    const double fp = spec.at_prime(p);
    std::uint32_t m = 1;
    for (std::uint64_t q = p; q <= bound; ++m) {
      lowest = std::min(lowest, prime_power_value(kind, fp, m));
      if (q > bound / p) break;
      q *= p;
    }
  });
  return lowest;
}

// max over n <= bound of |closed form - explicit divisor sum|.
inline double divisor_sum_gap(const PrimeFunctionSpec& spec, DerivedFunctionKind conv, std::uint64_t bound,
                              const FactorSieve& sieve) {
  const auto inner = conv == DerivedFunctionKind::H_conv ? DerivedFunctionKind::F_plain : DerivedFunctionKind::F_mu2;
  std::vector<double> a(bound + 1, 0.0);
  for (std::uint64_t n = 1; n <= bound; ++n) a[n] = eval_kind(spec, inner, n, sieve);
  std::vector<double> conv_sum(bound + 1, 0.0);
  for (std::uint64_t d = 1; d <= bound; ++d) {
    for (std::uint64_t n = d; n <= bound; n += d) conv_sum[n] += a[d];
  }
  double gap = 0.0;
  for (std::uint64_t n = 1; n <= bound; ++n) gap = std::max(gap, std::fabs(eval_kind(spec, conv, n, sieve) - conv_sum[n]));
  return gap;
}

inline ReportLine verdict_line(std::string name, Verdict v, double measured, double budget) {
  return {std::move(name), v, measured, budget};
}

}  // namespace detail

/// Runs every registered check of the proof chain against one config.
/// Lines appear in a fixed order: nonnegativity and convolution checks,
/// four identities per grid point, then the prime-side and growth checks.
inline VerificationReport run_verification(const ExperimentConfig& cfg, const FactorSieve& sieve,
                                           const VerifyOptions& opts = {}) {
  validate(cfg);
  if (cfg.s_grid.empty()) throw std::invalid_argument("verify: series.s_grid is empty");
  if (sieve.limit() < cfg.sieve_limit) throw std::invalid_argument("verify: sieve smaller than sieve.limit");

  VerificationReport report;
  report.config_hash = config_hash(cfg);
  auto& lines = report.lines;
  const auto& spec = cfg.spec;
  using K = DerivedFunctionKind;

  // Prime-power nonnegativity of h and g.
  const std::uint64_t scan = std::min(cfg.sieve_limit, nonnegativity_scan_limit);
  constexpr double slack = -1e-12;
  for (const auto& [name, kind] : {std::pair{"h_nonnegative", K::H_conv}, std::pair{"g_nonnegative", K::G_conv}}) {
    const double lowest = detail::min_over_prime_powers(spec, kind, scan, sieve);
    lines.push_back({name, lowest >= slack ? Verdict::pass : Verdict::fail, lowest, slack});
  }

  // Closed forms against explicit divisor sums.
  const std::uint64_t oracle = std::min(cfg.sieve_limit, divisor_oracle_limit);
  for (const auto& [name, kind] :
       {std::pair{"h_divisor_sum_oracle", K::H_conv}, std::pair{"g_divisor_sum_oracle", K::G_conv}}) {
    const double gap = detail::divisor_sum_gap(spec, kind, oracle, sieve);
    lines.push_back({name, gap <= 1e-12 ? Verdict::pass : Verdict::fail, gap, 1e-12});
  }

  // Identity residuals over the grid.
  const SpecCoefficients base{spec, sieve};
  auto coefficients = [&](K kind, std::uint64_t n) {
    const double v = base(kind, n);
    return opts.coefficient_hook ? opts.coefficient_hook(kind, n, v) : v;
  };
  for (const auto& s : cfg.s_grid) {
    for (const auto id : all_identities) {
      std::string name = std::string(to_string(id)) + "@" + point_label(s);
      IdentityOptions io;
      io.zeta_tol = cfg.zeta_tol;
      io.heuristic_tolerance = cfg.tolerances.at(id);
      io.threads = opts.threads;
      try {
        const auto r = identity_residual_with(coefficients, id, spec, s, cfg.truncation_N, cfg.euler_P, sieve, io);
        lines.push_back({std::move(name), r.passed() ? Verdict::pass : Verdict::fail, r.residual, r.budget});
      } catch (const std::exception&) {
        lines.push_back({std::move(name), Verdict::inconclusive});
      }
    }
  }

  // S(x) trace.
  const auto schedule = cfg.schedule();
  const std::uint64_t x_max = cfg.x_max();
  const auto S = prime_sum_S(spec, x_max, schedule, sieve);
  double min_step = 0.0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < S.checkpoints.size(); ++i) {
    max_abs = std::max(max_abs, std::fabs(S.checkpoints[i].value));
    if (i > 0) min_step = std::min(min_step, S.checkpoints[i].value - S.checkpoints[i - 1].value);
  }
  lines.push_back({"prime_sum_S_nondecreasing", min_step >= 0.0 ? Verdict::pass : Verdict::fail, min_step, 0.0});

  // Growth of sum f(n) (the hypothesis exponent) and of S(x) (the conclusion).
  const auto partial = checkpoint_partial_sums(spec, K::F_plain, x_max, schedule, sieve, opts.threads);
  std::optional<ExponentFit> f_fit;
  try {
    f_fit = fit_exponent(partial, default_fit_window(partial), cfg.epsilon_slack);
  } catch (const InsufficientDataError&) {
  }

  {
    ReportLine line{"prime_sum_S_exponent"};
    if (f_fit) line.budget = f_fit->alpha_hat + cfg.epsilon_slack;
    if (max_abs == 0.0) {
      line.status = Verdict::pass;
      line.measured = 0.0;
    } else if (f_fit) {
      PartialSumSeries s_series{S.checkpoints, K::F_plain, spec.id(), false};
      try {
        const auto s_fit = fit_exponent(s_series, default_fit_window(s_series));
        line.measured = s_fit.alpha_hat;
        // The bound is conditional on the hypotheses, so exceeding it is not a failure.
        line.status = s_fit.alpha_hat <= line.budget ? Verdict::pass : Verdict::inconclusive;
      } catch (const InsufficientDataError&) {
      }
    }
    lines.push_back(line);
  }

  {
    const TailDiagnosticOptions topts;
    const auto d = weighted_tail_diagnostic(spec, 1.0, x_max, sieve, topts, PrimeWeight::inv_p_sigma);
    const double last = d.trace.checkpoints.empty() ? 0.0 : d.trace.checkpoints.back().value;
    lines.push_back({"pretentious_distance_to_liouville", d.verdict, last, topts.decay});

    const auto w = weighted_tail_diagnostic(spec, cfg.tail_sigma, x_max, sieve, topts);
    const double wl = w.trace.checkpoints.empty() ? 0.0 : w.trace.checkpoints.back().value;
    lines.push_back({"weighted_prime_tail@sigma=" + format_real(cfg.tail_sigma), w.verdict, wl, topts.decay});
  }

  {
    const KroneckerOptions kopts;
    const auto raw = sieve.raw();
    const auto k = kronecker_check(
        [&](std::uint64_t n) {
          if (n < 2 || raw[n] != 0) return 0.0;
          const double one_plus_f = 1.0 + spec.at_prime(n);
          return one_plus_f == 0.0 ? 0.0 : one_plus_f * std::log(static_cast<double>(n));
        },
        cfg.kronecker_sigma, x_max, kopts);
    const double last = k.trace.empty() ? 0.0 : k.trace.back().value;
    lines.push_back({"kronecker_prime_sum@sigma=" + format_real(cfg.kronecker_sigma), k.verdict, last, kopts.decay});
  }

  {
    ReportLine line{"exponent_F_plain"};
    line.budget = cfg.max_alpha;
    if (f_fit) {
      line.measured = f_fit->alpha_hat;
      line.status = f_fit->alpha_hat <= cfg.max_alpha ? Verdict::pass : Verdict::fail;
    }
    lines.push_back(line);
  }

  {
    // |F(1+h)| should shrink as h decreases when F(1) = 0.
    ReportLine line{"F_at_one_trend"};
    auto hs = cfg.h_grid;
    std::sort(hs.begin(), hs.end(), std::greater<>());
    try {
      double prev = std::numeric_limits<double>::infinity();
      bool shrinking = !hs.empty();
      for (const double h : hs) {
        const auto F = dirichlet_F_via_euler(spec, {1.0 + h, 0.0}, cfg.euler_P, sieve, cfg.zeta_tol);
        const double mag = std::abs(F.value);
        if (!(mag < prev)) shrinking = false;
        prev = mag;
        line.measured = mag;
        line.budget = *F.tail_bound;
      }
      line.status = shrinking ? Verdict::pass : Verdict::inconclusive;
    } catch (const std::exception&) {
      line.status = Verdict::inconclusive;
    }
    lines.push_back(line);
  }

  return report;
}

}  // namespace mfz::harness

#endif  // MFZ_HARNESS_VERIFY_HPP
