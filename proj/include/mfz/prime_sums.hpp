#ifndef MFZ_PRIME_SUMS_HPP
#define MFZ_PRIME_SUMS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfz/checkpoints.hpp"
#include "mfz/prime_function.hpp"
#include "mfz/sieve.hpp"
#include "mfz/summation.hpp"

namespace mfz {

enum class PrimeWeight {
  log_p,             // (1 + f(p)) log p
  inv_p_sigma,       // (1 + f(p)) / p^sigma
  log_over_p_sigma,  // (1 + f(p)) log p / p^sigma
};

struct PrimeSumTrace {
  std::vector<Checkpoint> checkpoints;
  PrimeWeight weight = PrimeWeight::log_p;
  double sigma = 0.0;  // unused for log_p
};

namespace detail {

inline double prime_weight(PrimeWeight w, double sigma, std::uint64_t p) {
  const double pd = static_cast<double>(p);
  switch (w) {
    case PrimeWeight::log_p:
      return std::log(pd);
    case PrimeWeight::inv_p_sigma:
      return std::pow(pd, -sigma);
    case PrimeWeight::log_over_p_sigma:
      return std::log(pd) * std::pow(pd, -sigma);
  }
  return 0.0;
}

// Running sums of term(p) over primes, recorded at each scheduled x.
template <class Term>
std::vector<Checkpoint> checkpointed_prime_sum(std::span<const std::uint64_t> schedule, const FactorSieve& sieve,
                                               Term&& term) {
  std::vector<Checkpoint> out;
  out.reserve(schedule.size());
  NeumaierSum acc;
  std::uint64_t n = 2;
  const auto raw = sieve.raw();
  for (const std::uint64_t x : schedule) {
    for (; n <= x; ++n) {
      if (raw[n] == 0) acc.add(term(n));
    }
    out.push_back({x, acc.value()});
  }
  return out;
}

}  // namespace detail

/// Weighted sums of (1 + f(p)) over p <= x at each checkpoint in `schedule`
/// (ascending, all <= x_max).
inline PrimeSumTrace weighted_prime_sum(const PrimeFunctionSpec& spec, PrimeWeight weight, double sigma,
                                        std::uint64_t x_max, std::span<const std::uint64_t> schedule,
                                        const FactorSieve& sieve) {
  if (x_max > sieve.limit()) throw std::invalid_argument("prime sum range exceeds sieve limit");
  check_schedule(schedule, x_max);
  PrimeSumTrace trace;
  trace.weight = weight;
  trace.sigma = sigma;
  trace.checkpoints = detail::checkpointed_prime_sum(schedule, sieve, [&](std::uint64_t p) {
    const double one_plus_f = 1.0 + spec.at_prime(p);
    return one_plus_f == 0.0 ? 0.0 : one_plus_f * detail::prime_weight(weight, sigma, p);
  });
  return trace;
}

/// S(x) = sum_{p<=x} (1 + f(p)) log p at each checkpoint.
inline PrimeSumTrace prime_sum_S(const PrimeFunctionSpec& spec, std::uint64_t x_max,
                                 std::span<const std::uint64_t> schedule, const FactorSieve& sieve) {
  return weighted_prime_sum(spec, PrimeWeight::log_p, 0.0, x_max, schedule, sieve);
}

/// D^2(f, g; x) = sum_{p<=x} (1 - f(p) g(p)) / p for real-valued f, g.
inline double pretentious_distance_sq(const PrimeFunctionSpec& f, const PrimeFunctionSpec& g, std::uint64_t x,
                                      const FactorSieve& sieve) {
  if (x > sieve.limit()) throw std::invalid_argument("pretentious_distance_sq: x exceeds sieve limit");
  NeumaierSum acc;
  for_each_prime(x, sieve, [&](std::uint64_t p) {
    const double gap = 1.0 - f.at_prime(p) * g.at_prime(p);
    if (gap != 0.0) acc.add(gap / static_cast<double>(p));
  });
  return acc.value();
}

inline std::vector<Checkpoint> pretentious_distance_trace(const PrimeFunctionSpec& f, const PrimeFunctionSpec& g,
                                                          std::uint64_t x_max,
                                                          std::span<const std::uint64_t> schedule,
                                                          const FactorSieve& sieve) {
  if (x_max > sieve.limit()) throw std::invalid_argument("pretentious_distance_trace: x exceeds sieve limit");
  check_schedule(schedule, x_max);
  return detail::checkpointed_prime_sum(schedule, sieve, [&](std::uint64_t p) {
    const double gap = 1.0 - f.at_prime(p) * g.at_prime(p);
    return gap == 0.0 ? 0.0 : gap / static_cast<double>(p);
  });
}

struct TailDiagnosticOptions {
  int window = 8;              // number of trailing dyadic increments inspected
  double decay = 0.75;         // convergent: each increment <= decay * previous
  double stall = 0.95;         // divergent: each increment >= stall * previous
};

struct TailDiagnostic {
  PrimeSumTrace trace;               // dyadic checkpoints 1, 2, 4, ...
  std::vector<double> increments;    // trace[k+1] - trace[k]
  Verdict verdict = Verdict::inconclusive;
};

// Cauchy-increment verdict on dyadic increments. A zero increment counts as decayed.
inline Verdict increment_verdict(std::span<const double> increments, const TailDiagnosticOptions& opts) {
  const auto k = static_cast<std::size_t>(opts.window);
  if (increments.size() < k + 1) return Verdict::inconclusive;
  const auto tail = increments.subspan(increments.size() - k - 1);
  bool decaying = true;
  bool stalled = true;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    const double prev = tail[i - 1];
    const double cur = tail[i];
    if (!(cur == 0.0 || cur <= opts.decay * prev)) decaying = false;
    if (!(prev > 0.0 && cur >= opts.stall * prev)) stalled = false;
  }
  if (decaying) return Verdict::pass;
  if (stalled) return Verdict::fail;
  return Verdict::inconclusive;
}

/// Partial sums of sum_p (1 + f(p)) w(p) on dyadic checkpoints plus a
/// convergence verdict: pass = apparently convergent, fail = increments not
/// decaying. Diagnostic only.
inline TailDiagnostic weighted_tail_diagnostic(const PrimeFunctionSpec& spec, double sigma, std::uint64_t x_max,
                                               const FactorSieve& sieve, const TailDiagnosticOptions& opts = {},
                                               PrimeWeight weight = PrimeWeight::log_over_p_sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("weighted_tail_diagnostic: sigma must be > 0");
  if (weight == PrimeWeight::log_p) throw std::invalid_argument("weighted_tail_diagnostic: weight must depend on sigma");
  const auto schedule = dyadic_schedule(x_max);
  TailDiagnostic out;
  out.trace = weighted_prime_sum(spec, weight, sigma, x_max, schedule, sieve);
  const auto& cp = out.trace.checkpoints;
  for (std::size_t i = 1; i < cp.size(); ++i) out.increments.push_back(cp[i].value - cp[i - 1].value);
  out.verdict = increment_verdict(out.increments, opts);
  return out;
}

}  // namespace mfz

#endif  // MFZ_PRIME_SUMS_HPP
