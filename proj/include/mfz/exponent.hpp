#ifndef MFZ_EXPONENT_HPP
#define MFZ_EXPONENT_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfz/checkpoints.hpp"
#include "mfz/errors.hpp"
#include "mfz/multiplicative.hpp"
#include "mfz/summation.hpp"

namespace mfz {

struct PartialSumSeries {
  std::vector<Checkpoint> checkpoints;  // (x, sum_{n<=x} a(n)), ascending x
  DerivedFunctionKind kind = DerivedFunctionKind::F_plain;
  std::string spec_id;
  bool exact = false;  // summed on the integer path
};

/// Partial sums sum_{n<=x} a(n) at each scheduled x. Integer-valued specs
/// are accumulated in int64 (exact); others with compensated summation.
inline PartialSumSeries checkpoint_partial_sums(const PrimeFunctionSpec& spec, DerivedFunctionKind kind,
                                                std::uint64_t x_max, std::span<const std::uint64_t> schedule,
                                                const FactorSieve& sieve, unsigned threads = 1) {
  if (x_max > sieve.limit()) throw std::invalid_argument("checkpoint_partial_sums: x_max exceeds sieve limit");
  check_schedule(schedule, x_max);
  PartialSumSeries out;
  out.kind = kind;
  out.spec_id = spec.id();
  out.exact = spec.integer_valued();
  out.checkpoints.reserve(schedule.size());
  if (schedule.empty()) return out;

  std::int64_t exact_sum = 0;
  NeumaierSum real_sum;
  std::size_t next = 0;
  for_each_coefficient_block(spec, kind, 1, schedule.back(), sieve, threads,
                             [&](std::uint64_t lo, std::span<const double> values) {
                               for (std::size_t i = 0; i < values.size(); ++i) {
                                 if (out.exact) {
                                   exact_sum += static_cast<std::int64_t>(values[i]);
                                 } else {
                                   real_sum.add(values[i]);
                                 }
                                 const std::uint64_t n = lo + i;
                                 if (next < schedule.size() && schedule[next] == n) {
                                   const double v = out.exact ? static_cast<double>(exact_sum) : real_sum.value();
                                   out.checkpoints.push_back({n, v});
                                   ++next;
                                 }
                               }
                             });
  return out;
}

/// Running maximum of |sum| over checkpoints.
inline std::vector<double> monotone_envelope(std::span<const Checkpoint> checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double running = 0.0;
  for (const auto& c : checkpoints) {
    running = std::max(running, std::fabs(c.value));
    out.push_back(running);
  }
  return out;
}

struct FitWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

struct ExponentFit {
  double alpha_hat = 0.0;  // fitted growth exponent, the empirical 1 - delta
  double std_error = 0.0;
  FitWindow window;
  int points_used = 0;
  double epsilon_slack = 0.0;
};

inline constexpr int min_fit_points = 8;

// Drops the first decade: [10 x_first, x_last].
inline FitWindow default_fit_window(const PartialSumSeries& series) {
  if (series.checkpoints.empty()) throw InsufficientDataError("default_fit_window: empty series");
  return {series.checkpoints.front().x * 10, series.checkpoints.back().x};
}

/// Least-squares slope of log M(x) against log x over checkpoints in the
/// window, where M is the monotone envelope (taken over all checkpoints up
/// to x). Points with M(x) = 0 are skipped.
inline ExponentFit fit_exponent(const PartialSumSeries& series, FitWindow window, double epsilon_slack = 0.0) {
  if (!(window.lo < window.hi)) throw std::invalid_argument("fit_exponent: window must satisfy lo < hi");
  const auto envelope = monotone_envelope(series.checkpoints);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < envelope.size(); ++i) {
    const auto x = series.checkpoints[i].x;
    if (x < window.lo || x > window.hi || envelope[i] == 0.0) continue;
    xs.push_back(std::log(static_cast<double>(x)));
    ys.push_back(std::log(envelope[i]));
  }
  if (xs.size() < static_cast<std::size_t>(min_fit_points)) {
    throw InsufficientDataError("fit_exponent: only " + std::to_string(xs.size()) + " usable checkpoints in [" +
                                std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                                "]; need at least 8 (widen the window or densify the schedule)");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ssr += r * r;
  }
  ExponentFit fit;
  fit.alpha_hat = slope;
  fit.std_error = std::sqrt(ssr / (n - 2.0) / sxx);
  fit.window = window;
  fit.points_used = static_cast<int>(xs.size());
  fit.epsilon_slack = epsilon_slack;
  return fit;
}

struct KroneckerOptions {
  int window = 8;       // trailing dyadic checkpoints inspected
  double decay = 0.75;  // required drop of the envelope across the window
};

struct KroneckerResult {
  std::vector<Checkpoint> trace;  // (x, sum_{n<=x} a(n) / x^sigma) on dyadic x
  Verdict verdict = Verdict::inconclusive;
};

/// Checks that sum_{n<=x} a(n) looks like o(x^sigma) on dyadic checkpoints.
/// With E_j the sup of |trace| over checkpoints j..last:
///   pass          E over the second half of the window <= decay * E over the whole window,
///                 or the window is identically zero;
///   fail          the last value is the window maximum and exceeds the first;
///   inconclusive  otherwise.
template <class Coefficient>
  requires std::invocable<Coefficient&, std::uint64_t>
KroneckerResult kronecker_check(Coefficient&& a, double sigma, std::uint64_t x_max, const KroneckerOptions& opts = {}) {
  if (!(sigma > 0.0)) throw std::invalid_argument("kronecker_check: sigma must be > 0");
  if (x_max < 1) throw std::invalid_argument("kronecker_check: x_max must be >= 1");
  KroneckerResult out;
  const auto schedule = dyadic_schedule(x_max);
  NeumaierSum acc;
  std::uint64_t n = 1;
  for (const auto x : schedule) {
    for (; n <= x; ++n) acc.add(a(n));
    out.trace.push_back({x, acc.value() / std::pow(static_cast<double>(x), sigma)});
  }

  const auto k = static_cast<std::size_t>(opts.window);
  if (out.trace.size() < k + 1) return out;
  const std::size_t first = out.trace.size() - k - 1;
  const std::size_t mid = first + (k + 1) / 2;
  double whole = 0.0;
  double late = 0.0;
  for (std::size_t i = first; i < out.trace.size(); ++i) {
    const double v = std::fabs(out.trace[i].value);
    whole = std::max(whole, v);
    if (i >= mid) late = std::max(late, v);
  }
  const double last = std::fabs(out.trace.back().value);
  if (whole == 0.0 || late <= opts.decay * whole) {
    out.verdict = Verdict::pass;
  } else if (last == whole && last > std::fabs(out.trace[first].value)) {
    out.verdict = Verdict::fail;
  }
  return out;
}

// Coefficients given as a 1-based table (slot 0 ignored), e.g. from coefficient_stream.
inline KroneckerResult kronecker_check(std::span<const double> table, double sigma, std::uint64_t x_max,
                                       const KroneckerOptions& opts = {}) {
  if (x_max + 1 > table.size()) throw std::invalid_argument("kronecker_check: x_max exceeds coefficient table");
  return kronecker_check([&](std::uint64_t n) { return table[n]; }, sigma, x_max, opts);
}

}  // namespace mfz

#endif  // MFZ_EXPONENT_HPP
