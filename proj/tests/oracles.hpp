#ifndef MFZ_TESTS_ORACLES_HPP
#define MFZ_TESTS_ORACLES_HPP

// Reference computations for the tests. Nothing here calls the library's
// sieve or closed forms: factorizations come from trial division and
// convolutions from explicit divisor enumeration.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "mfz/prime_function.hpp"

namespace oracle {

inline std::vector<std::pair<std::uint64_t, std::uint32_t>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    std::uint32_t a = 0;
    while (n % d == 0) {
      n /= d;
      ++a;
    }
    out.emplace_back(d, a);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool trial_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Plain sieve of Eratosthenes over bytes.
inline std::vector<std::uint64_t> eratosthenes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// f(n) for completely multiplicative f, from trial division.
inline double f_of(const mfz::PrimeFunctionSpec& spec, std::uint64_t n) {
  double v = 1.0;
  for (const auto& [p, a] : trial_factor(n)) v *= std::pow(spec.at_prime(p), static_cast<double>(a));
  return v;
}

inline bool squarefree(std::uint64_t n) {
  for (const auto& pa : trial_factor(n)) {
    if (pa.second > 1) return false;
  }
  return true;
}

// (1 * a)(n) for n <= limit by enumerating divisors.
template <class A>
std::vector<double> divisor_sums(std::uint64_t limit, A&& a) {
  std::vector<double> out(limit + 1, 0.0);
  for (std::uint64_t d = 1; d <= limit; ++d) {
    const double ad = a(d);
    for (std::uint64_t n = d; n <= limit; n += d) out[n] += ad;
  }
  return out;
}

// Random spec over the three base rules with up to four exceptions among small primes.
inline mfz::PrimeFunctionSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 2);
  mfz::PrimeFunctionSpec spec = mfz::PrimeFunctionSpec::liouville();
  switch (pick(rng)) {
    case 0:
      break;
    case 1:
      spec = mfz::PrimeFunctionSpec::constant(unit(rng));
      break;
    default:
      spec = mfz::PrimeFunctionSpec::power_decay(3.0 * (unit(rng) + 1.0) / 2.0, 0.1 + 1.9 * (unit(rng) + 1.0) / 2.0);
      break;
  }
  static const std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_int_distribution<int> which(0, 9);
  for (int i = count(rng); i > 0; --i) {
    double v = unit(rng);
    // Exercise the boundary values now and then.
    if (which(rng) == 0) v = 1.0;
    if (which(rng) == 0) v = -1.0;
    spec.with_exception(small[which(rng)], v);
  }
  return spec;
}

}  // namespace oracle

#endif  // MFZ_TESTS_ORACLES_HPP
