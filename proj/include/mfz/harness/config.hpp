#ifndef MFZ_HARNESS_CONFIG_HPP
#define MFZ_HARNESS_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mfz/checkpoints.hpp"
#include "mfz/dirichlet.hpp"
#include "mfz/errors.hpp"
#include "mfz/prime_function.hpp"

// Plain-text experiment configuration: one `key = value` per line, `#`
// starts a comment, blank lines ignored. Keys:
//
//   sieve.limit              integer >= 2
//   sieve.cache_dir          directory for cached sieves (empty: no cache)
//   spec.base                liouville | constant | power_decay
//   spec.c, spec.a           base parameters
//   spec.exception.<p>       f(p) override, p prime
//   series.s_grid            "sigma,t; sigma,t; ..."
//   series.truncation_N      terms in Dirichlet sums
//   series.euler_P           prime cutoff in Euler products
//   series.zeta_tol          zeta accuracy target
//   checkpoints.ratio        geometric checkpoint ratio (> 1)
//   checkpoints.x0           first checkpoint
//   checkpoints.x_max        last checkpoint (0: sieve.limit)
//   tolerance.<identity>     tolerance used when an identity has no rigorous bound
//   proof.h_grid             "h1, h2, ..." offsets for the F(1+h) trend
//   proof.tail_sigma         sigma for the weighted prime-series diagnostic
//   proof.kronecker_sigma    sigma for the normalised prime-sum check
//   exponent.epsilon_slack   slack added to the fitted exponent
//   exponent.max_alpha       largest fitted exponent still counted as a power saving
//   output_dir               where CSV files are written

namespace mfz::harness {

struct ExperimentConfig {
  std::uint64_t sieve_limit = 1'000'000;
  std::string cache_dir;
  PrimeFunctionSpec spec = PrimeFunctionSpec::liouville();
  std::vector<ComplexArgument> s_grid{{1.5, 0.0}, {2.0, 0.0}, {2.5, 0.0}, {3.0, 0.0}};
  std::uint64_t truncation_N = 100'000;
  std::uint64_t euler_P = 100'000;
  double zeta_tol = 1e-13;
  double checkpoint_ratio = default_checkpoint_ratio;
  std::uint64_t checkpoint_x0 = 1;
  std::uint64_t checkpoint_x_max = 0;
  std::map<IdentityKind, double> tolerances{{IdentityKind::H_eq_zetaF, 1e-6},
                                            {IdentityKind::Fmu2_eq_FU, 1e-6},
                                            {IdentityKind::recip_zeta_eq_Fmu2_over_G, 1e-6},
                                            {IdentityKind::G_product_vs_sum, 1e-6}};
  std::vector<double> h_grid{0.1, 0.05, 0.02, 0.01};
  double tail_sigma = 0.9;
  double kronecker_sigma = 0.9;
  double epsilon_slack = 0.05;
  double max_alpha = 0.95;
  std::string output_dir = ".";

  std::uint64_t x_max() const { return checkpoint_x_max == 0 ? sieve_limit : checkpoint_x_max; }
  std::vector<std::uint64_t> schedule() const { return geometric_schedule(x_max(), checkpoint_ratio, checkpoint_x0); }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    // Allow scientific shorthand such as 1e6 when it denotes an integer.
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !(d >= 0) || d != std::floor(d) || d > 1.8e19) {
      throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(d)) {
    throw ConfigError("config key '" + key + "': expected a real number, got '" + v + "'");
  }
  return d;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses the key=value format. Missing keys keep their defaults; unknown
/// keys and malformed values raise ConfigError.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string base = "liouville";
  double c = 0.0;
  double a = 1.0;
  bool have_c = false;
  std::map<std::uint64_t, double> exceptions;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": missing '='");
    const std::string key = detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = detail::trim(std::string_view(body).substr(eq + 1));

    if (key == "sieve.limit") {
      cfg.sieve_limit = detail::parse_uint(key, value);
    } else if (key == "sieve.cache_dir") {
      cfg.cache_dir = value;
    } else if (key == "spec.base") {
      base = value;
    } else if (key == "spec.c") {
      c = detail::parse_real(key, value);
      have_c = true;
    } else if (key == "spec.a") {
      a = detail::parse_real(key, value);
    } else if (key.rfind("spec.exception.", 0) == 0) {
      const auto p = detail::parse_uint(key, key.substr(std::string_view("spec.exception.").size()));
      exceptions[p] = detail::parse_real(key, value);
    } else if (key == "series.s_grid") {
      cfg.s_grid.clear();
      if (!value.empty()) {
        for (const auto& item : detail::split(value, ';')) {
          if (item.empty()) continue;
          const auto parts = detail::split(item, ',');
          if (parts.size() != 2) throw ConfigError("series.s_grid: expected 'sigma,t' pairs, got '" + item + "'");
          cfg.s_grid.push_back({detail::parse_real(key, parts[0]), detail::parse_real(key, parts[1])});
        }
      }
    } else if (key == "series.truncation_N") {
      cfg.truncation_N = detail::parse_uint(key, value);
    } else if (key == "series.euler_P") {
      cfg.euler_P = detail::parse_uint(key, value);
    } else if (key == "series.zeta_tol") {
      cfg.zeta_tol = detail::parse_real(key, value);
    } else if (key == "checkpoints.ratio") {
      cfg.checkpoint_ratio = detail::parse_real(key, value);
    } else if (key == "checkpoints.x0") {
      cfg.checkpoint_x0 = detail::parse_uint(key, value);
    } else if (key == "checkpoints.x_max") {
      cfg.checkpoint_x_max = detail::parse_uint(key, value);
    } else if (key.rfind("tolerance.", 0) == 0) {
      IdentityKind id;
      try {
        id = parse_identity(key.substr(std::string_view("tolerance.").size()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
      }
      cfg.tolerances[id] = detail::parse_real(key, value);
    } else if (key == "proof.h_grid") {
      cfg.h_grid.clear();
      for (const auto& item : detail::split(value, ',')) {
        if (!item.empty()) cfg.h_grid.push_back(detail::parse_real(key, item));
      }
    } else if (key == "proof.tail_sigma") {
      cfg.tail_sigma = detail::parse_real(key, value);
    } else if (key == "proof.kronecker_sigma") {
      cfg.kronecker_sigma = detail::parse_real(key, value);
    } else if (key == "exponent.epsilon_slack") {
      cfg.epsilon_slack = detail::parse_real(key, value);
    } else if (key == "exponent.max_alpha") {
      cfg.max_alpha = detail::parse_real(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw ConfigError("unknown config key '" + key + "' on line " + std::to_string(lineno));
    }
  }

  try {
    if (base == "liouville") {
      cfg.spec = PrimeFunctionSpec::liouville();
    } else if (base == "constant") {
      if (!have_c) throw ConfigError("spec.base=constant requires spec.c");
      cfg.spec = PrimeFunctionSpec::constant(c);
    } else if (base == "power_decay") {
      if (!have_c) throw ConfigError("spec.base=power_decay requires spec.c");
      cfg.spec = PrimeFunctionSpec::power_decay(c, a);
    } else {
      throw ConfigError("spec.base: unknown rule '" + base + "'");
    }
    for (const auto& [p, v] : exceptions) cfg.spec.with_exception(p, v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path.string());
  return parse_config(in);
}

/// Checks the cross-field invariants. Grid emptiness is checked by the
/// commands that need a grid.
inline void validate(const ExperimentConfig& cfg) {
  if (cfg.sieve_limit < 2 || cfg.sieve_limit > FactorSieve::max_limit) {
    throw ConfigError("sieve.limit must lie in [2, " + std::to_string(FactorSieve::max_limit) + "]");
  }
  if (cfg.truncation_N < 1 || cfg.truncation_N > cfg.sieve_limit) {
    throw ConfigError("series.truncation_N must lie in [1, sieve.limit]");
  }
  if (cfg.euler_P > cfg.sieve_limit) throw ConfigError("series.euler_P must not exceed sieve.limit");
  if (cfg.x_max() > cfg.sieve_limit) throw ConfigError("checkpoints.x_max must not exceed sieve.limit");
  if (!(cfg.checkpoint_ratio > 1.0)) throw ConfigError("checkpoints.ratio must be > 1");
  if (cfg.checkpoint_x0 < 1) throw ConfigError("checkpoints.x0 must be >= 1");
  if (!(cfg.zeta_tol > 0.0)) throw ConfigError("series.zeta_tol must be positive");
  for (const auto& [id, tol] : cfg.tolerances) {
    if (!(tol > 0.0)) throw ConfigError("tolerance." + std::string(to_string(id)) + " must be positive");
  }
  for (const double h : cfg.h_grid) {
    if (!(h > 0.0)) throw ConfigError("proof.h_grid entries must be positive");
  }
  if (!(cfg.tail_sigma > 0.0) || !(cfg.kronecker_sigma > 0.0)) throw ConfigError("proof sigmas must be positive");
}

/// Canonical form: every field, fixed key order, reals printed round-trip
/// exact. Also a valid config file that parses back to the same config.
inline std::string canonical_string(const ExperimentConfig& cfg) {
  using detail::fmt;
  std::ostringstream out;
  out << "checkpoints.ratio=" << fmt(cfg.checkpoint_ratio) << "\n";
  out << "checkpoints.x0=" << cfg.checkpoint_x0 << "\n";
  out << "checkpoints.x_max=" << cfg.checkpoint_x_max << "\n";
  out << "exponent.epsilon_slack=" << fmt(cfg.epsilon_slack) << "\n";
  out << "exponent.max_alpha=" << fmt(cfg.max_alpha) << "\n";
  out << "output_dir=" << cfg.output_dir << "\n";
  out << "proof.h_grid=";
  for (std::size_t i = 0; i < cfg.h_grid.size(); ++i) out << (i ? "," : "") << fmt(cfg.h_grid[i]);
  out << "\n";
  out << "proof.kronecker_sigma=" << fmt(cfg.kronecker_sigma) << "\n";
  out << "proof.tail_sigma=" << fmt(cfg.tail_sigma) << "\n";
  out << "series.euler_P=" << cfg.euler_P << "\n";
  out << "series.s_grid=";
  for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
    out << (i ? ";" : "") << fmt(cfg.s_grid[i].sigma) << "," << fmt(cfg.s_grid[i].t);
  }
  out << "\n";
  out << "series.truncation_N=" << cfg.truncation_N << "\n";
  out << "series.zeta_tol=" << fmt(cfg.zeta_tol) << "\n";
  out << "sieve.cache_dir=" << cfg.cache_dir << "\n";
  out << "sieve.limit=" << cfg.sieve_limit << "\n";
  const auto& spec = cfg.spec;
  switch (spec.base()) {
    case BaseRule::constant_minus_one:
      out << "spec.base=liouville\n";
      break;
    case BaseRule::constant:
      out << "spec.base=constant\nspec.c=" << fmt(spec.c()) << "\n";
      break;
    case BaseRule::power_decay:
      out << "spec.base=power_decay\nspec.a=" << fmt(spec.a()) << "\nspec.c=" << fmt(spec.c()) << "\n";
      break;
  }
  for (const auto& [p, v] : spec.exceptions()) out << "spec.exception." << p << "=" << fmt(v) << "\n";
  for (const auto& [id, tol] : cfg.tolerances) out << "tolerance." << to_string(id) << "=" << fmt(tol) << "\n";
  return out.str();
}

// 64-bit FNV-1a of the canonical form, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_string(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mfz::harness

#endif  // MFZ_HARNESS_CONFIG_HPP
