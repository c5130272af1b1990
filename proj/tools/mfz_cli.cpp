#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mfz/harness/commands.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace mfz;
  using namespace mfz::harness;

  CLI::App app{"Multiplicative functions, Dirichlet series and prime sums"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  app.add_option("--config", config_path, "Config file (key=value)");
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.add_option("--threads", threads, "Worker threads, 0 = auto; results do not depend on it");

  auto* sieve_cmd = app.add_subcommand("sieve", "Build or load the factor sieve and print a summary");
  std::string kind_name = "F";
  auto* partial_cmd = app.add_subcommand("partial-sums", "Checkpointed partial sums of f, h, g or f mu^2");
  partial_cmd->add_option("--kind", kind_name, "F | H | G | Fmu2");
  auto* prime_cmd = app.add_subcommand("prime-sum", "Trace of S(x) = sum_{p<=x} (1+f(p)) log p");
  std::string which = "zeta";
  auto* series_cmd = app.add_subcommand("series", "Evaluate a series or product over the s grid");
  series_cmd->add_option("--which", which, "zeta | F | H | G | G_sum | Fmu2 | U | F_euler");
  auto* verify_cmd = app.add_subcommand("verify", "Run every check and write report.csv");
  auto* exponent_cmd = app.add_subcommand("exponent", "Fit the growth exponent of partial sums");
  exponent_cmd->add_option("--kind", kind_name, "F | H | G | Fmu2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  ExperimentConfig cfg;
  FactorSieve sieve;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    validate(cfg);
    if ((series_cmd->parsed() || verify_cmd->parsed()) && cfg.s_grid.empty()) {
      throw ConfigError("series.s_grid is empty");
    }
    if (sieve_cmd->parsed()) {
      cmd_sieve(cfg, threads, std::cout);
      return exit_ok;
    }
    sieve = obtain_sieve(cfg, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (partial_cmd->parsed()) {
      std::cout << cmd_partial_sums(cfg, parse_kind(kind_name), sieve, threads).string() << "\n";
    } else if (prime_cmd->parsed()) {
      std::cout << cmd_prime_sum(cfg, sieve).string() << "\n";
    } else if (series_cmd->parsed()) {
      cmd_series(cfg, which, sieve, threads, std::cout);
    } else if (verify_cmd->parsed()) {
      return cmd_verify(cfg, sieve, threads, std::cout).any_failed() ? exit_check_failed : exit_ok;
    } else if (exponent_cmd->parsed()) {
      const auto fit = cmd_exponent(cfg, parse_kind(kind_name), sieve, threads);
      std::cout << "alpha_hat " << format_real(fit.alpha_hat) << " stderr " << format_real(fit.std_error)
                << " window [" << fit.window.lo << ", " << fit.window.hi << "] points " << fit.points_used << "\n";
    }
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_check_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_ok;
}
