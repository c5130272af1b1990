#ifndef MFZ_SIEVE_HPP
#define MFZ_SIEVE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mfz/errors.hpp"
#include "mfz/parallel.hpp"

namespace mfz {

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Canonical factorization, primes strictly ascending. A 64-bit integer has at
// most 15 distinct prime factors, so storage is inline.
class Factorization {
 public:
  static constexpr std::size_t max_distinct = 15;

  void push_back(PrimePower pp) { pairs_[size_++] = pp; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  const PrimePower& operator[](std::size_t i) const noexcept { return pairs_[i]; }
  const PrimePower* begin() const noexcept { return pairs_.data(); }
  const PrimePower* end() const noexcept { return pairs_.data() + size_; }

  std::vector<PrimePower> to_vector() const { return {begin(), end()}; }

 private:
  std::array<PrimePower, max_distinct> pairs_{};
  std::size_t size_ = 0;
};

/// Smallest-prime-factor table for 1..limit.
///
/// Entries are stored in 16 bits: composites n <= 2^32 - 1 have a smallest
/// prime factor below 2^16, and primes are stored as 0 (meaning "itself").
/// Memory is therefore 2 bytes per integer, so a limit of 10^9 needs 2 GB.
/// spf(1) is the sentinel 1.
class FactorSieve {
 public:
  static constexpr std::uint64_t max_limit = std::numeric_limits<std::uint32_t>::max();

  FactorSieve() = default;

  // Adopts raw storage, e.g. from a cache file. Shape is checked, content is not.
  FactorSieve(std::uint64_t limit, std::vector<std::uint16_t> raw) : limit_(limit), spf_(std::move(raw)) {
    if (spf_.size() != limit_ + 1) throw std::invalid_argument("sieve storage does not match limit");
  }

  std::uint64_t limit() const noexcept { return limit_; }

  // Unchecked; 2 <= n <= limit.
  std::uint64_t smallest_factor_unchecked(std::uint64_t n) const noexcept {
    const std::uint16_t v = spf_[n];
    return v == 0 ? n : v;
  }

  std::uint64_t spf(std::uint64_t n) const {
    check_range(n);
    return n == 1 ? 1 : smallest_factor_unchecked(n);
  }

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) throw std::invalid_argument("is_prime: " + std::to_string(n) + " exceeds sieve limit");
    return n >= 2 && spf_[n] == 0;
  }

  std::span<const std::uint16_t> raw() const noexcept { return spf_; }

  void check_range(std::uint64_t n) const {
    if (n < 1 || n > limit_) {
      throw std::invalid_argument("argument " + std::to_string(n) + " outside [1, " + std::to_string(limit_) +
                                  "]");
    }
  }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint16_t> spf_;
};

namespace detail {

inline std::vector<std::uint32_t> small_primes(std::uint64_t bound) {
  std::vector<char> composite(bound + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = 1;
  }
  return primes;
}

}  // namespace detail

// Entries per segment; 256 KiB of 16-bit cells.
inline constexpr std::uint64_t sieve_segment_size = std::uint64_t{1} << 17;

/// Segmented smallest-prime-factor sieve. Segments are independent and are
/// processed with `threads` workers (0 = auto); every segment is marked by
/// base primes in ascending order, so the first write to a cell is its
/// smallest factor and the table does not depend on scheduling.
inline FactorSieve build_sieve(std::uint64_t limit, unsigned threads = 1) {
  if (limit < 2) throw std::invalid_argument("build_sieve: limit must be >= 2, got " + std::to_string(limit));
  if (limit > FactorSieve::max_limit) {
    throw std::invalid_argument("build_sieve: limit " + std::to_string(limit) + " exceeds supported maximum " +
                                std::to_string(FactorSieve::max_limit));
  }
  std::vector<std::uint16_t> spf;
  try {
    spf.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("build_sieve: cannot allocate factor table", (limit + 1) * sizeof(std::uint16_t));
  }

  const auto base = detail::small_primes(isqrt(limit));
  const std::uint64_t num_segments = (limit + sieve_segment_size) / sieve_segment_size;

  parallel_for_chunks(num_segments, threads, [&](std::size_t seg) {
    const std::uint64_t lo = seg * sieve_segment_size;
    const std::uint64_t hi = std::min(limit + 1, lo + sieve_segment_size);  // exclusive
    for (const std::uint64_t p : base) {
      if (p * p >= hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j < hi; j += p) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint16_t>(p);
      }
    }
  });
  spf[1] = 1;
  return FactorSieve(limit, std::move(spf));
}

inline Factorization factorize(std::uint64_t n, const FactorSieve& sieve) {
  sieve.check_range(n);
  Factorization out;
  while (n > 1) {
    const std::uint64_t p = sieve.smallest_factor_unchecked(n);
    std::uint32_t a = 0;
    do {
      n /= p;
      ++a;
    } while (n % p == 0);
    out.push_back({p, a});
  }
  return out;
}

inline int big_omega(std::uint64_t n, const FactorSieve& sieve) {
  int total = 0;
  for (const auto& pp : factorize(n, sieve)) total += static_cast<int>(pp.exponent);
  return total;
}

inline int liouville(std::uint64_t n, const FactorSieve& sieve) { return (big_omega(n, sieve) % 2 == 0) ? 1 : -1; }

inline bool is_squarefree(std::uint64_t n, const FactorSieve& sieve) {
  for (const auto& pp : factorize(n, sieve)) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

inline int moebius(std::uint64_t n, const FactorSieve& sieve) {
  const auto f = factorize(n, sieve);
  for (const auto& pp : f) {
    if (pp.exponent > 1) return 0;
  }
  return (f.size() % 2 == 0) ? 1 : -1;
}

// Visits primes p <= x in ascending order.
template <class Fn>
void for_each_prime(std::uint64_t x, const FactorSieve& sieve, Fn&& fn) {
  if (x > sieve.limit()) throw std::invalid_argument("prime range " + std::to_string(x) + " exceeds sieve limit");
  for (std::uint64_t n = 2; n <= x; ++n) {
    if (sieve.is_prime(n)) fn(n);
  }
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t x, const FactorSieve& sieve) {
  std::vector<std::uint64_t> out;
  for_each_prime(x, sieve, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

inline std::uint64_t prime_count(std::uint64_t x, const FactorSieve& sieve) {
  std::uint64_t count = 0;
  for_each_prime(x, sieve, [&](std::uint64_t) { ++count; });
  return count;
}

// Deterministic trial division; used to validate isolated primes without a table.
inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace mfz

#endif  // MFZ_SIEVE_HPP
