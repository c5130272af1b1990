#ifndef MFZ_ERRORS_HPP
#define MFZ_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

// Range and precondition violations are reported with std::invalid_argument.
// The types below cover the remaining failure modes.

namespace mfz {

class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested_bytes)
      : std::runtime_error(what + " (requested " + std::to_string(requested_bytes) + " bytes)"),
        requested_bytes_(requested_bytes) {}
  std::uint64_t requested_bytes() const noexcept { return requested_bytes_; }

 private:
  std::uint64_t requested_bytes_;
};

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

class DegenerateFactorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mfz

#endif  // MFZ_ERRORS_HPP
