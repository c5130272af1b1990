#ifndef MFZ_PRIME_FUNCTION_HPP
#define MFZ_PRIME_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>

#include "mfz/sieve.hpp"

namespace mfz {

enum class BaseRule {
  constant_minus_one,  // Liouville
  constant,
  power_decay,  // f(p) = clamp(-1 + c p^-a, -1, 1)
};

/// Values of a completely multiplicative f : N -> [-1, 1] at the primes:
/// a base rule plus finitely many per-prime overrides. Everything derived
/// from f (h = 1*f, g = 1*(f mu^2), f mu^2) is computed from this object.
class PrimeFunctionSpec {
 public:
  static PrimeFunctionSpec liouville() { return PrimeFunctionSpec(BaseRule::constant_minus_one, -1.0, 0.0); }

  static PrimeFunctionSpec constant(double c) {
    if (!(c >= -1.0 && c <= 1.0)) throw std::invalid_argument("constant base value must lie in [-1, 1]");
    return PrimeFunctionSpec(BaseRule::constant, c, 0.0);
  }

  static PrimeFunctionSpec power_decay(double c, double a) {
    if (!std::isfinite(c)) throw std::invalid_argument("power_decay: c must be finite");
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("power_decay: a must be > 0");
    return PrimeFunctionSpec(BaseRule::power_decay, c, a);
  }

  // Overrides f(p). p must be prime and value in [-1, 1].
  PrimeFunctionSpec& with_exception(std::uint64_t p, double value) {
    if (!is_prime_trial(p)) throw std::invalid_argument("exception key " + std::to_string(p) + " is not prime");
    if (!(value >= -1.0 && value <= 1.0)) {
      throw std::invalid_argument("exception value for p=" + std::to_string(p) + " outside [-1, 1]");
    }
    exceptions_[p] = value;
    return *this;
  }

  BaseRule base() const noexcept { return base_; }
  double c() const noexcept { return c_; }
  double a() const noexcept { return a_; }
  const std::map<std::uint64_t, double>& exceptions() const noexcept { return exceptions_; }

  double base_at_prime(std::uint64_t p) const noexcept {
    switch (base_) {
      case BaseRule::constant_minus_one:
        return -1.0;
      case BaseRule::constant:
        return c_;
      case BaseRule::power_decay:
        return std::clamp(-1.0 + c_ * std::pow(static_cast<double>(p), -a_), -1.0, 1.0);
    }
    return 0.0;
  }

  // f(p) for a prime p; primality is the caller's responsibility.
  double at_prime(std::uint64_t p) const noexcept {
    if (!exceptions_.empty()) {
      if (auto it = exceptions_.find(p); it != exceptions_.end()) return it->second;
    }
    return base_at_prime(p);
  }

  // True when every f(p) is in {-1, 0, 1}; then f, h, g and f mu^2 are integer valued.
  bool integer_valued() const noexcept {
    auto unit = [](double v) { return v == -1.0 || v == 0.0 || v == 1.0; };
    if (base_ == BaseRule::power_decay) return false;
    if (base_ == BaseRule::constant && !unit(c_)) return false;
    return std::all_of(exceptions_.begin(), exceptions_.end(), [&](const auto& kv) { return unit(kv.second); });
  }

  // Upper bound on 1 + f(p) over all primes p > bound.
  double sup_one_plus_f_beyond(std::uint64_t bound) const {
    double sup = 0.0;
    switch (base_) {
      case BaseRule::constant_minus_one:
        break;
      case BaseRule::constant:
        sup = 1.0 + c_;
        break;
      case BaseRule::power_decay:
        sup = c_ <= 0.0 ? 0.0 : std::min(2.0, c_ * std::pow(static_cast<double>(bound) + 1.0, -a_));
        break;
    }
    for (auto it = exceptions_.upper_bound(bound); it != exceptions_.end(); ++it) sup = std::max(sup, 1.0 + it->second);
    return sup;
  }

  // Upper bound on |f(p)| over all primes p > bound.
  double sup_abs_f_beyond(std::uint64_t bound) const {
    double sup = base_ == BaseRule::constant ? std::fabs(c_) : 1.0;
    for (auto it = exceptions_.upper_bound(bound); it != exceptions_.end(); ++it) {
      sup = std::max(sup, std::fabs(it->second));
    }
    return sup;
  }

  // Stable human-readable identifier, e.g. "liouville{2:0.5,3:-0.25}".
  std::string id() const {
    std::string out;
    switch (base_) {
      case BaseRule::constant_minus_one:
        out = "liouville";
        break;
      case BaseRule::constant:
        out = "constant(" + format_number(c_) + ")";
        break;
      case BaseRule::power_decay:
        out = "power_decay(" + format_number(c_) + "," + format_number(a_) + ")";
        break;
    }
    if (!exceptions_.empty()) {
      out += "{";
      bool first = true;
      for (const auto& [p, v] : exceptions_) {
        if (!first) out += ",";
        out += std::to_string(p) + ":" + format_number(v);
        first = false;
      }
      out += "}";
    }
    return out;
  }

  friend bool operator==(const PrimeFunctionSpec&, const PrimeFunctionSpec&) = default;

 private:
  PrimeFunctionSpec(BaseRule base, double c, double a) : base_(base), c_(c), a_(a) {}

  static std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  BaseRule base_;
  double c_;
  double a_;
  std::map<std::uint64_t, double> exceptions_;
};

inline double f_at_prime(const PrimeFunctionSpec& spec, std::uint64_t p) {
  if (!is_prime_trial(p)) throw std::invalid_argument("f_at_prime: " + std::to_string(p) + " is not prime");
  return spec.at_prime(p);
}

}  // namespace mfz

#endif  // MFZ_PRIME_FUNCTION_HPP
