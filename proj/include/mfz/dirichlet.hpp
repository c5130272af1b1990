#ifndef MFZ_DIRICHLET_HPP
#define MFZ_DIRICHLET_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mfz/errors.hpp"
#include "mfz/multiplicative.hpp"
#include "mfz/parallel.hpp"
#include "mfz/prime_function.hpp"
#include "mfz/sieve.hpp"
#include "mfz/summation.hpp"
#include "mfz/zeta.hpp"

namespace mfz {

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();

// n^-s
inline std::complex<double> inverse_power(double n, ComplexArgument s) {
  const double log_n = std::log(n);
  const double magnitude = std::exp(-s.sigma * log_n);
  if (s.t == 0.0) return {magnitude, 0.0};
  const double angle = s.t * log_n;
  return {magnitude * std::cos(angle), -magnitude * std::sin(angle)};
}

// Principal log(1 + z), accurate for small |z|.
inline std::complex<double> log1p(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

// sum_{n > N} n^-sigma <= N^(1-sigma) / (sigma - 1) for N >= 1, sigma > 1.
inline double unit_tail(std::uint64_t N, double sigma) {
  return std::pow(static_cast<double>(N), 1.0 - sigma) / (sigma - 1.0);
}

// sum_{n > N} d(n) n^-sigma for sigma > 1. With D(x) = sum_{n<=x} d(n) <= x (log x + 1),
// partial summation gives at most sigma N^(1-sigma) [(log N + 1)/(sigma-1) + 1/(sigma-1)^2].
inline double divisor_tail(std::uint64_t N, double sigma) {
  const double logN = std::log(static_cast<double>(N));
  const double gap = sigma - 1.0;
  return sigma * std::pow(static_cast<double>(N), -gap) * ((logN + 1.0) / gap + 1.0 / (gap * gap));
}

}  // namespace detail

/// How |a(n)| is bounded for tail estimates: |f(n)|, |f mu^2(n)| <= 1 and
/// 0 <= h(n), g(n) <= d(n).
enum class CoefficientBound { unit, divisor };

inline CoefficientBound coefficient_bound(DerivedFunctionKind kind) {
  return (kind == DerivedFunctionKind::F_plain || kind == DerivedFunctionKind::F_mu2) ? CoefficientBound::unit
                                                                                      : CoefficientBound::divisor;
}

// Coefficient provider reading straight from a spec; identity checks accept
// any callable with this shape, which is how fault injection is done.
struct SpecCoefficients {
  const PrimeFunctionSpec& spec;
  const FactorSieve& sieve;
  double operator()(DerivedFunctionKind kind, std::uint64_t n) const {
    return eval_kind_unchecked(spec, kind, n, sieve);
  }
};

inline constexpr std::uint64_t dirichlet_chunk_size = std::uint64_t{1} << 16;

/// sum_{n<=N} a(n) n^-s with a = coefficients(kind, n), compensated and
/// reduced over fixed chunks in order. Rigorous tail bound for sigma > 1.
template <class Coefficients>
SeriesEval dirichlet_sum_with(const Coefficients& coefficients, DerivedFunctionKind kind, ComplexArgument s,
                              std::uint64_t N, unsigned threads = 1) {
  if (N < 1) throw std::invalid_argument("dirichlet_sum: N must be >= 1");
  if (!std::isfinite(s.sigma) || !std::isfinite(s.t)) throw DomainError("dirichlet_sum: non-finite argument");

  const std::uint64_t chunks = (N - 1) / dirichlet_chunk_size + 1;
  std::vector<ComplexNeumaierSum> partial(chunks);
  std::vector<NeumaierSum> magnitude(chunks);
  parallel_for_chunks(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = 1 + c * dirichlet_chunk_size;
    const std::uint64_t hi = std::min(N, lo + dirichlet_chunk_size - 1);
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const double a = coefficients(kind, n);
      if (a == 0.0) continue;
      const std::complex<double> w = detail::inverse_power(static_cast<double>(n), s);
      partial[c].add(a * w);
      magnitude[c].add(std::fabs(a) * std::abs(w));
    }
  });
  ComplexNeumaierSum total;
  NeumaierSum total_magnitude;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    total.merge(partial[c]);
    total_magnitude.merge(magnitude[c]);
  }

  SeriesEval out{total.value(), N, std::nullopt, SeriesMethod::direct_sum};
  if (s.sigma > 1.0) {
    const double tail = coefficient_bound(kind) == CoefficientBound::unit ? detail::unit_tail(N, s.sigma)
                                                                          : detail::divisor_tail(N, s.sigma);
    out.tail_bound = tail + 8.0 * detail::eps * total_magnitude.value();
  }
  return out;
}

inline SeriesEval dirichlet_sum(DerivedFunctionKind kind, const PrimeFunctionSpec& spec, ComplexArgument s,
                                std::uint64_t N, const FactorSieve& sieve, unsigned threads = 1) {
  if (N > sieve.limit()) throw std::invalid_argument("dirichlet_sum: N exceeds sieve limit");
  return dirichlet_sum_with(SpecCoefficients{spec, sieve}, kind, s, N, threads);
}

namespace detail {

// Sums log(factor(p)) over primes p <= P and exponentiates.
template <class LogFactor>
std::complex<double> euler_log_sum(std::uint64_t P, const FactorSieve& sieve, LogFactor&& log_factor,
                                   double& abs_log_sum) {
  ComplexNeumaierSum logs;
  NeumaierSum abs_logs;
  if (P >= 2) {
    for_each_prime(P, sieve, [&](std::uint64_t p) {
      const std::complex<double> l = log_factor(p);
      logs.add(l);
      abs_logs.add(std::abs(l));
    });
  }
  abs_log_sum = abs_logs.value();
  return std::exp(logs.value());
}

// |P_full - P_trunc| <= |P_trunc| (e^L - 1) when the omitted log-factors sum to at most L.
inline double product_tail(std::complex<double> value, double log_tail) {
  if (!std::isfinite(log_tail)) return std::numeric_limits<double>::infinity();
  return std::abs(value) * std::expm1(log_tail);
}

}  // namespace detail

/// prod_{p<=P} (p^s + f(p)) / (p^s - 1), accumulated as sum of log(1 + (1+f(p))/(p^s - 1)).
inline SeriesEval euler_product_G(const PrimeFunctionSpec& spec, ComplexArgument s, std::uint64_t P,
                                  const FactorSieve& sieve) {
  if (P > sieve.limit()) throw std::invalid_argument("euler_product_G: P exceeds sieve limit");
  if (!(s.sigma > 0.0)) throw DomainError("euler_product_G: requires Re(s) > 0");
  double abs_logs = 0.0;
  const auto value = detail::euler_log_sum(P, sieve, [&](std::uint64_t p) {
    const std::complex<double> ps = 1.0 / detail::inverse_power(static_cast<double>(p), s);
    const double numerator = 1.0 + spec.at_prime(p);
    if (numerator == 0.0) return std::complex<double>{0.0, 0.0};
    const std::complex<double> z = numerator / (ps - 1.0);
    if (std::abs(1.0 + z) < 1e-300) {
      throw DegenerateFactorError("euler_product_G: vanishing Euler factor at p=" + std::to_string(p));
    }
    return detail::log1p(z);
  }, abs_logs);

  SeriesEval out{value, P, std::nullopt, SeriesMethod::euler_product};
  if (s.sigma > 1.0) {
    // For p > P: |z| <= sup/(p^sigma - 1). Once p^sigma >= max(2, 1 + 2 sup),
    // |log(1+z)| <= 2|z| <= 4 sup p^-sigma, and sum_{p>P} p^-sigma <= P^(1-sigma)/(sigma-1).
    const double sup = spec.sup_one_plus_f_beyond(P);
    double log_tail = 0.0;
    if (sup > 0.0) {
      const double first = std::pow(static_cast<double>(P) + 1.0, s.sigma);
      log_tail = (P >= 1 && first >= std::max(2.0, 1.0 + 2.0 * sup))
                     ? 4.0 * sup * detail::unit_tail(P, s.sigma)
                     : std::numeric_limits<double>::infinity();
    }
    out.tail_bound = detail::product_tail(value, log_tail) + 8.0 * detail::eps * std::abs(value) * (abs_logs + 1.0);
  }
  return out;
}

/// prod_{p<=P} (1 - f(p)^2 p^-2s); converges absolutely for Re s > 1/2.
inline SeriesEval euler_product_U(const PrimeFunctionSpec& spec, ComplexArgument s, std::uint64_t P,
                                  const FactorSieve& sieve) {
  if (P > sieve.limit()) throw std::invalid_argument("euler_product_U: P exceeds sieve limit");
  if (!(s.sigma > 0.5)) throw DomainError("euler_product_U: requires Re(s) > 1/2");
  const ComplexArgument two_s{2.0 * s.sigma, 2.0 * s.t};
  double abs_logs = 0.0;
  const auto value = detail::euler_log_sum(P, sieve, [&](std::uint64_t p) {
    const double fp = spec.at_prime(p);
    if (fp == 0.0) return std::complex<double>{0.0, 0.0};
    return detail::log1p(-(fp * fp) * detail::inverse_power(static_cast<double>(p), two_s));
  }, abs_logs);

  // For p > P with p^(2 sigma) >= 2: |log(1 - w)| <= 2|w| <= 2 sup^2 p^(-2 sigma).
  const double sup = spec.sup_abs_f_beyond(P);
  double log_tail = 0.0;
  if (sup > 0.0) {
    const double first = std::pow(static_cast<double>(P) + 1.0, 2.0 * s.sigma);
    log_tail = (P >= 1 && first >= 2.0) ? 2.0 * sup * sup * detail::unit_tail(P, 2.0 * s.sigma)
                                        : std::numeric_limits<double>::infinity();
  }
  SeriesEval out{value, P, std::nullopt, SeriesMethod::euler_product};
  out.tail_bound = detail::product_tail(value, log_tail) + 8.0 * detail::eps * std::abs(value) * (abs_logs + 1.0);
  return out;
}

// Bound on |A B - Ahat Bhat| given |A - Ahat| <= ta and |B - Bhat| <= tb.
inline double product_error(std::complex<double> a, double ta, std::complex<double> b, double tb) {
  return std::abs(a) * tb + std::abs(b) * ta + ta * tb;
}

/// F(s) assembled from Euler products: G = zeta F mu^2 and F mu^2 = F U give
/// F = G / (zeta U) for Re s > 1. Unlike the direct sum this stays accurate
/// near s = 1 whenever G's product is (nearly) finite.
inline SeriesEval dirichlet_F_via_euler(const PrimeFunctionSpec& spec, ComplexArgument s, std::uint64_t P,
                                        const FactorSieve& sieve, double zeta_tol = 1e-13) {
  if (!(s.sigma > 1.0)) throw DomainError("dirichlet_F_via_euler: requires Re(s) > 1");
  const SeriesEval g = euler_product_G(spec, s, P, sieve);
  const SeriesEval u = euler_product_U(spec, s, P, sieve);
  const SeriesEval z = zeta(s, zeta_tol);
  const std::complex<double> denom = z.value * u.value;
  const double denom_err = product_error(z.value, *z.tail_bound, u.value, *u.tail_bound);
  SeriesEval out{g.value / denom, P, std::nullopt, SeriesMethod::euler_product};
  const double gap = std::abs(denom) - denom_err;
  if (gap > 0.0) {
    out.tail_bound = (*g.tail_bound + std::abs(g.value) * denom_err / std::abs(denom)) / gap +
                     8.0 * detail::eps * std::abs(out.value);
  } else {
    out.tail_bound = std::numeric_limits<double>::infinity();
  }
  return out;
}

enum class IdentityKind {
  H_eq_zetaF,                  // H = zeta F
  Fmu2_eq_FU,                  // F mu^2 = F U
  recip_zeta_eq_Fmu2_over_G,   // 1/zeta = F mu^2 / G, checked as F mu^2 zeta = G
  G_product_vs_sum,            // sum of g(n) n^-s = its Euler product
};

inline constexpr std::array<IdentityKind, 4> all_identities{IdentityKind::H_eq_zetaF, IdentityKind::Fmu2_eq_FU,
                                                            IdentityKind::recip_zeta_eq_Fmu2_over_G,
                                                            IdentityKind::G_product_vs_sum};

inline std::string_view to_string(IdentityKind id) {
  switch (id) {
    case IdentityKind::H_eq_zetaF:
      return "H_eq_zetaF";
    case IdentityKind::Fmu2_eq_FU:
      return "Fmu2_eq_FU";
    case IdentityKind::recip_zeta_eq_Fmu2_over_G:
      return "recip_zeta_eq_Fmu2_over_G";
    case IdentityKind::G_product_vs_sum:
      return "G_product_vs_sum";
  }
  return "?";
}

inline IdentityKind parse_identity(std::string_view name) {
  for (const auto id : all_identities) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown identity '" + std::string(name) + "'");
}

struct IdentityResidual {
  IdentityKind identity;
  ComplexArgument point;
  double residual = 0.0;
  double budget = 0.0;     // propagated tail bounds, or the explicit tolerance when heuristic
  bool heuristic = false;  // some constituent had no rigorous bound

  bool passed() const noexcept { return residual <= budget; }
};

struct IdentityOptions {
  double zeta_tol = 1e-13;
  std::optional<double> heuristic_tolerance;  // required when a constituent is heuristic
  unsigned threads = 1;
};

/// |LHS - RHS| for one identity at s, both sides built from truncated
/// constituents (series to N, products to P), with the first-order
/// propagated budget.
template <class Coefficients>
IdentityResidual identity_residual_with(const Coefficients& coefficients, IdentityKind identity,
                                        const PrimeFunctionSpec& spec, ComplexArgument s, std::uint64_t N,
                                        std::uint64_t P, const FactorSieve& sieve, const IdentityOptions& opts = {}) {
  if (N > sieve.limit() || P > sieve.limit()) throw std::invalid_argument("identity_residual: N or P exceeds sieve");
  using K = DerivedFunctionKind;
  auto sum = [&](K kind) { return dirichlet_sum_with(coefficients, kind, s, N, opts.threads); };

  std::complex<double> lhs;
  std::complex<double> rhs;
  std::optional<double> budget;
  auto both = [](const std::optional<double>& a, const std::optional<double>& b) { return a && b; };

  switch (identity) {
    case IdentityKind::H_eq_zetaF: {
      const SeriesEval h = sum(K::H_conv);
      const SeriesEval f = sum(K::F_plain);
      const SeriesEval z = zeta(s, opts.zeta_tol);
      lhs = h.value;
      rhs = z.value * f.value;
      if (both(h.tail_bound, f.tail_bound)) {
        budget = *h.tail_bound + product_error(z.value, *z.tail_bound, f.value, *f.tail_bound);
      }
      break;
    }
    case IdentityKind::Fmu2_eq_FU: {
      const SeriesEval fm = sum(K::F_mu2);
      const SeriesEval f = sum(K::F_plain);
      const SeriesEval u = euler_product_U(spec, s, P, sieve);
      lhs = fm.value;
      rhs = f.value * u.value;
      if (both(fm.tail_bound, f.tail_bound)) {
        budget = *fm.tail_bound + product_error(f.value, *f.tail_bound, u.value, *u.tail_bound);
      }
      break;
    }
    case IdentityKind::recip_zeta_eq_Fmu2_over_G: {
      const SeriesEval fm = sum(K::F_mu2);
      const SeriesEval z = zeta(s, opts.zeta_tol);
      const SeriesEval g = euler_product_G(spec, s, P, sieve);
      lhs = fm.value * z.value;
      rhs = g.value;
      if (both(fm.tail_bound, g.tail_bound)) {
        budget = product_error(fm.value, *fm.tail_bound, z.value, *z.tail_bound) + *g.tail_bound;
      }
      break;
    }
    case IdentityKind::G_product_vs_sum: {
      const SeriesEval gs = sum(K::G_conv);
      const SeriesEval gp = euler_product_G(spec, s, P, sieve);
      lhs = gs.value;
      rhs = gp.value;
      if (both(gs.tail_bound, gp.tail_bound)) budget = *gs.tail_bound + *gp.tail_bound;
      break;
    }
  }

  IdentityResidual out{identity, s, std::abs(lhs - rhs), 0.0, !budget.has_value()};
  if (budget) {
    out.budget = *budget + 4.0 * detail::eps * (std::abs(lhs) + std::abs(rhs));
  } else {
    if (!opts.heuristic_tolerance) {
      throw std::invalid_argument("identity_residual: " + std::string(to_string(identity)) +
                                  " has no rigorous bound at sigma=" + std::to_string(s.sigma) +
                                  "; an explicit tolerance is required");
    }
    out.budget = *opts.heuristic_tolerance;
  }
  return out;
}

inline IdentityResidual identity_residual(IdentityKind identity, const PrimeFunctionSpec& spec, ComplexArgument s,
                                          std::uint64_t N, std::uint64_t P, const FactorSieve& sieve,
                                          const IdentityOptions& opts = {}) {
  return identity_residual_with(SpecCoefficients{spec, sieve}, identity, spec, s, N, P, sieve, opts);
}

}  // namespace mfz

#endif  // MFZ_DIRICHLET_HPP
