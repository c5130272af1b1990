#ifndef MFZ_MULTIPLICATIVE_HPP
#define MFZ_MULTIPLICATIVE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mfz/parallel.hpp"
#include "mfz/prime_function.hpp"
#include "mfz/sieve.hpp"

namespace mfz {

enum class DerivedFunctionKind {
  F_plain,  // f
  H_conv,   // h = 1 * f
  G_conv,   // g = 1 * (f mu^2)
  F_mu2,    // f mu^2
};

inline std::string_view to_string(DerivedFunctionKind kind) {
  switch (kind) {
    case DerivedFunctionKind::F_plain:
      return "F";
    case DerivedFunctionKind::H_conv:
      return "H";
    case DerivedFunctionKind::G_conv:
      return "G";
    case DerivedFunctionKind::F_mu2:
      return "Fmu2";
  }
  return "?";
}

inline DerivedFunctionKind parse_kind(std::string_view name) {
  if (name == "F" || name == "F_plain" || name == "f") return DerivedFunctionKind::F_plain;
  if (name == "H" || name == "H_conv" || name == "h") return DerivedFunctionKind::H_conv;
  if (name == "G" || name == "G_conv" || name == "g") return DerivedFunctionKind::G_conv;
  if (name == "Fmu2" || name == "F_mu2" || name == "fmu2") return DerivedFunctionKind::F_mu2;
  throw std::invalid_argument("unknown function kind '" + std::string(name) + "'");
}

// Below this distance from 1 the geometric closed form for h(p^m) loses
// accuracy and the terms are summed directly.
inline constexpr double geometric_switch = 1e-8;

/// Value of the selected function at p^m (m >= 1) given fp = f(p).
inline double prime_power_value(DerivedFunctionKind kind, double fp, std::uint32_t m) noexcept {
  switch (kind) {
    case DerivedFunctionKind::F_plain: {
      double v = 1.0;
      for (std::uint32_t j = 0; j < m; ++j) v *= fp;
      return v;
    }
    case DerivedFunctionKind::H_conv: {
      if (std::fabs(1.0 - fp) < geometric_switch) {
        double v = 1.0;  // Horner: 1 + fp(1 + fp(...))
        for (std::uint32_t j = 0; j < m; ++j) v = 1.0 + fp * v;
        return v;
      }
      double power = 1.0;
      for (std::uint32_t j = 0; j <= m; ++j) power *= fp;
      return (1.0 - power) / (1.0 - fp);
    }
    case DerivedFunctionKind::G_conv:
      return 1.0 + fp;
    case DerivedFunctionKind::F_mu2:
      return m == 1 ? fp : 0.0;
  }
  return 0.0;
}

/// Evaluates the selected multiplicative function at n from the prime-power
/// closed forms. The product is folded from the largest prime down, so the
/// result is bit-identical however n is reached.
inline double eval_kind_unchecked(const PrimeFunctionSpec& spec, DerivedFunctionKind kind, std::uint64_t n,
                                  const FactorSieve& sieve) noexcept {
  std::array<PrimePower, Factorization::max_distinct> pairs{};
  std::size_t count = 0;
  while (n > 1) {
    const std::uint64_t p = sieve.smallest_factor_unchecked(n);
    std::uint32_t a = 0;
    do {
      n /= p;
      ++a;
    } while (n % p == 0);
    pairs[count++] = {p, a};
  }
  double acc = 1.0;
  for (std::size_t i = count; i-- > 0;) {
    const double v = prime_power_value(kind, spec.at_prime(pairs[i].prime), pairs[i].exponent);
    if (v == 0.0) return 0.0;
    acc = v * acc;
  }
  return acc;
}

inline double eval_kind(const PrimeFunctionSpec& spec, DerivedFunctionKind kind, std::uint64_t n,
                        const FactorSieve& sieve) {
  sieve.check_range(n);
  return eval_kind_unchecked(spec, kind, n, sieve);
}

inline double eval_f(const PrimeFunctionSpec& spec, std::uint64_t n, const FactorSieve& sieve) {
  return eval_kind(spec, DerivedFunctionKind::F_plain, n, sieve);
}
inline double eval_h(const PrimeFunctionSpec& spec, std::uint64_t n, const FactorSieve& sieve) {
  return eval_kind(spec, DerivedFunctionKind::H_conv, n, sieve);
}
inline double eval_g(const PrimeFunctionSpec& spec, std::uint64_t n, const FactorSieve& sieve) {
  return eval_kind(spec, DerivedFunctionKind::G_conv, n, sieve);
}
inline double eval_f_mu2(const PrimeFunctionSpec& spec, std::uint64_t n, const FactorSieve& sieve) {
  return eval_kind(spec, DerivedFunctionKind::F_mu2, n, sieve);
}

inline constexpr std::uint64_t coefficient_block_size = std::uint64_t{1} << 16;

/// Produces a(first..last) in fixed-size blocks and hands each block to
/// sink(first_n, values) in ascending order. Blocks are filled in parallel
/// groups; the values never depend on the thread count.
template <class Sink>
void for_each_coefficient_block(const PrimeFunctionSpec& spec, DerivedFunctionKind kind, std::uint64_t first,
                                std::uint64_t last, const FactorSieve& sieve, unsigned threads, Sink&& sink) {
  if (first < 1 || last > sieve.limit()) {
    throw std::invalid_argument("coefficient range [" + std::to_string(first) + ", " + std::to_string(last) +
                                "] outside sieve");
  }
  if (last < first) return;
  const std::uint64_t total_blocks = (last - first) / coefficient_block_size + 1;
  const std::uint64_t group = std::max<std::uint64_t>(1, resolve_threads(threads)) * 4;
  std::vector<std::vector<double>> buffers;
  for (std::uint64_t g0 = 0; g0 < total_blocks; g0 += group) {
    const std::uint64_t g1 = std::min(total_blocks, g0 + group);
    buffers.resize(g1 - g0);
    parallel_for_chunks(g1 - g0, threads, [&](std::size_t i) {
      const std::uint64_t lo = first + (g0 + i) * coefficient_block_size;
      const std::uint64_t hi = std::min(last, lo + coefficient_block_size - 1);
      auto& buf = buffers[i];
      buf.resize(hi - lo + 1);
      for (std::uint64_t n = lo; n <= hi; ++n) buf[n - lo] = eval_kind_unchecked(spec, kind, n, sieve);
    });
    for (std::uint64_t i = 0; i < g1 - g0; ++i) {
      sink(first + (g0 + i) * coefficient_block_size, std::span<const double>(buffers[i]));
    }
  }
}

/// a(n) for n = 1..limit. The returned vector is indexed by n directly;
/// slot 0 is unused and holds 0.
inline std::vector<double> coefficient_stream(const PrimeFunctionSpec& spec, DerivedFunctionKind kind,
                                              std::uint64_t limit, const FactorSieve& sieve,
                                              unsigned threads = 1) {
  if (limit > sieve.limit()) throw std::invalid_argument("coefficient_stream: limit exceeds sieve");
  std::vector<double> out(limit + 1, 0.0);
  for_each_coefficient_block(spec, kind, 1, limit, sieve, threads,
                             [&](std::uint64_t lo, std::span<const double> values) {
                               std::copy(values.begin(), values.end(), out.begin() + static_cast<std::ptrdiff_t>(lo));
                             });
  return out;
}

}  // namespace mfz

#endif  // MFZ_MULTIPLICATIVE_HPP
