#ifndef MFZ_CHECKPOINTS_HPP
#define MFZ_CHECKPOINTS_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfz {

struct Checkpoint {
  std::uint64_t x;
  double value;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Diagnostics at finite range cannot settle asymptotic statements, hence three values.
enum class Verdict { pass, fail, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

// 2^(1/4)
inline constexpr double default_checkpoint_ratio = 1.189207115002721;

/// x_k = ceil(x0 r^k) for k = 0, 1, ... while <= x_max, duplicates dropped,
/// with x_max appended if the grid misses it.
inline std::vector<std::uint64_t> geometric_schedule(std::uint64_t x_max, double ratio = default_checkpoint_ratio,
                                                     std::uint64_t x0 = 1) {
  if (x0 < 1) throw std::invalid_argument("geometric_schedule: x0 must be >= 1");
  if (!(ratio > 1.0)) throw std::invalid_argument("geometric_schedule: ratio must be > 1");
  std::vector<std::uint64_t> out;
  if (x_max < x0) return out;
  for (int k = 0;; ++k) {
    const double x = std::ceil(static_cast<double>(x0) * std::pow(ratio, k));
    if (x > static_cast<double>(x_max)) break;
    const auto xi = static_cast<std::uint64_t>(x);
    if (out.empty() || xi > out.back()) out.push_back(xi);
  }
  if (out.back() != x_max) out.push_back(x_max);
  return out;
}

/// 1, 2, 4, ... <= x_max.
inline std::vector<std::uint64_t> dyadic_schedule(std::uint64_t x_max) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 1; x <= x_max && x != 0; x *= 2) out.push_back(x);
  return out;
}

inline void check_schedule(std::span<const std::uint64_t> schedule, std::uint64_t x_max) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || schedule[i] > x_max) {
      throw std::invalid_argument("checkpoint " + std::to_string(schedule[i]) + " outside [1, " +
                                  std::to_string(x_max) + "]");
    }
    if (i > 0 && schedule[i] <= schedule[i - 1]) throw std::invalid_argument("checkpoint schedule not ascending");
  }
}

}  // namespace mfz

#endif  // MFZ_CHECKPOINTS_HPP
