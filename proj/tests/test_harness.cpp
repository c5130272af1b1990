#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mfz/harness/commands.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mfz;
using namespace mfz::harness;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mfz_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  ExperimentConfig config(const std::string& text) {
    auto cfg = parse_config_string(text);
    cfg.output_dir = dir_.string();
    return cfg;
  }
  fs::path dir_;
};

TEST(Config, ParsesEveryKey) {
  const auto cfg = parse_config_string(R"(
# comment
sieve.limit = 2e5
sieve.cache_dir = /tmp/c
spec.base = power_decay
spec.c = 1.5
spec.a = 0.5
spec.exception.7 = 0.25   # trailing comment
series.s_grid = 1.5,0; 2,-3
series.truncation_N = 1000
series.euler_P = 5000
series.zeta_tol = 1e-12
checkpoints.ratio = 2
checkpoints.x0 = 3
checkpoints.x_max = 100000
tolerance.H_eq_zetaF = 1e-3
proof.h_grid = 0.2,0.1
proof.tail_sigma = 0.8
proof.kronecker_sigma = 0.7
exponent.epsilon_slack = 0.1
exponent.max_alpha = 0.9
output_dir = out
)");
  EXPECT_EQ(cfg.sieve_limit, 200'000u);
  EXPECT_EQ(cfg.cache_dir, "/tmp/c");
  EXPECT_EQ(cfg.spec, PrimeFunctionSpec::power_decay(1.5, 0.5).with_exception(7, 0.25));
  ASSERT_EQ(cfg.s_grid.size(), 2u);
  EXPECT_EQ(cfg.s_grid[1].t, -3.0);
  EXPECT_EQ(cfg.truncation_N, 1000u);
  EXPECT_EQ(cfg.euler_P, 5000u);
  EXPECT_EQ(cfg.zeta_tol, 1e-12);
  EXPECT_EQ(cfg.checkpoint_ratio, 2.0);
  EXPECT_EQ(cfg.checkpoint_x0, 3u);
  EXPECT_EQ(cfg.x_max(), 100'000u);
  EXPECT_EQ(cfg.tolerances.at(IdentityKind::H_eq_zetaF), 1e-3);
  EXPECT_EQ(cfg.h_grid, (std::vector<double>{0.2, 0.1}));
  EXPECT_EQ(cfg.tail_sigma, 0.8);
  EXPECT_EQ(cfg.kronecker_sigma, 0.7);
  EXPECT_EQ(cfg.epsilon_slack, 0.1);
  EXPECT_EQ(cfg.max_alpha, 0.9);
  EXPECT_EQ(cfg.output_dir, "out");
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, DefaultsAndXMax) {
  const auto cfg = parse_config_string("");
  EXPECT_EQ(cfg.sieve_limit, 1'000'000u);
  EXPECT_EQ(cfg.spec, PrimeFunctionSpec::liouville());
  EXPECT_EQ(cfg.x_max(), cfg.sieve_limit);
  EXPECT_EQ(cfg.schedule().back(), cfg.sieve_limit);
}

TEST(Config, CanonicalFormRoundTrips) {
  const auto cfg = parse_config_string(
      "spec.base=constant\nspec.c=0.3\nspec.exception.2=-1\nseries.s_grid=1.25,0.1;3,7\ntolerance.G_product_vs_sum=0.5\n"
      "checkpoints.ratio=1.5\n");
  const auto again = parse_config_string(canonical_string(cfg));
  EXPECT_EQ(canonical_string(again), canonical_string(cfg));
  EXPECT_EQ(config_hash(again), config_hash(cfg));
  EXPECT_EQ(config_hash(cfg).size(), 16u);
}

TEST(Config, HashSeesEveryChange) {
  const auto base = parse_config_string("");
  const std::string h = config_hash(base);
  for (const char* tweak : {"sieve.limit=999999", "spec.exception.3=0.5", "series.s_grid=2,0", "series.zeta_tol=1e-12",
                            "checkpoints.ratio=1.3", "tolerance.Fmu2_eq_FU=0.1", "exponent.max_alpha=0.9",
                            "proof.h_grid=0.1"}) {
    EXPECT_NE(config_hash(parse_config_string(tweak)), h) << tweak;
  }
  // Whitespace and comments do not matter.
  EXPECT_EQ(config_hash(parse_config_string("  # nothing\n\n")), h);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_string("nonsense.key=1"), ConfigError);
  EXPECT_THROW(parse_config_string("sieve.limit"), ConfigError);
  EXPECT_THROW(parse_config_string("sieve.limit=abc"), ConfigError);
  EXPECT_THROW(parse_config_string("sieve.limit=-5"), ConfigError);
  EXPECT_THROW(parse_config_string("spec.base=constant"), ConfigError);
  EXPECT_THROW(parse_config_string("spec.base=constant\nspec.c=2"), ConfigError);
  EXPECT_THROW(parse_config_string("spec.base=mystery"), ConfigError);
  EXPECT_THROW(parse_config_string("spec.exception.4=0.5"), ConfigError);
  EXPECT_THROW(parse_config_string("series.s_grid=1,2,3"), ConfigError);
  EXPECT_THROW(parse_config_string("tolerance.nothing=1"), ConfigError);
  EXPECT_THROW(validate(parse_config_string("sieve.limit=100\nseries.truncation_N=1000")), ConfigError);
  EXPECT_THROW(validate(parse_config_string("checkpoints.ratio=1")), ConfigError);
  EXPECT_THROW(validate(parse_config_string("sieve.limit=1")), ConfigError);
  EXPECT_THROW(load_config("/definitely/not/here.cfg"), IoError);
  EXPECT_TRUE(parse_config_string("series.s_grid=").s_grid.empty());
}

TEST(Csv, Formatting) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(std::nan("")), "nan");
  EXPECT_EQ(format_real(INFINITY), "inf");
  EXPECT_EQ(format_real(-INFINITY), "-inf");
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  const std::vector<Checkpoint> rows{{1, 1.0}, {2, -0.5}};
  EXPECT_EQ(checkpoints_csv("sum", rows), "x,sum\n1,1\n2,-0.5\n");
}

TEST_F(ScratchDir, PartialSumsCsv) {
  auto cfg = config("sieve.limit=100\nseries.truncation_N=100\nseries.euler_P=100");
  const auto sieve = obtain_sieve(cfg, 1);
  const auto h = lines_of(read_file(cmd_partial_sums(cfg, DerivedFunctionKind::H_conv, sieve, 1)));
  EXPECT_EQ(h.front(), "x,sum");
  EXPECT_EQ(h.back(), "100,10");

  cfg.checkpoint_x_max = 10;
  const auto f = lines_of(read_file(cmd_partial_sums(cfg, DerivedFunctionKind::F_plain, sieve, 1)));
  EXPECT_EQ(f.back(), "10,0");
  EXPECT_TRUE(fs::exists(dir_ / "partial_sums_F.csv"));

  cfg.spec = PrimeFunctionSpec::constant(0.0);
  cfg.checkpoint_x_max = 0;
  const auto one = lines_of(read_file(cmd_partial_sums(cfg, DerivedFunctionKind::F_plain, sieve, 1)));
  for (std::size_t i = 1; i < one.size(); ++i) EXPECT_EQ(one[i].substr(one[i].find(',')), ",1") << one[i];
}

TEST_F(ScratchDir, PrimeSumCsv) {
  auto cfg = config("sieve.limit=1000\nseries.truncation_N=100\nseries.euler_P=100\nspec.exception.2=0.5");
  const auto sieve = obtain_sieve(cfg, 1);
  const auto rows = lines_of(read_file(cmd_prime_sum(cfg, sieve)));
  EXPECT_EQ(rows.front(), "x,value");
  EXPECT_EQ(rows[1], "1,0");
  EXPECT_EQ(rows.back(), "1000," + format_real(1.5 * std::log(2.0)));
}

TEST_F(ScratchDir, SeriesCsv) {
  auto cfg = config("sieve.limit=1e5\nseries.truncation_N=1e5\nseries.euler_P=1e5\nseries.s_grid=2,0;1,0;0.5,0");
  const auto sieve = obtain_sieve(cfg, 1);
  std::ostringstream echo;
  const auto rows = cmd_series(cfg, "zeta", sieve, 1, echo);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].eval->value.real(), 1.6449340668, 1e-10);
  EXPECT_FALSE(rows[1].eval.has_value());  // the pole
  EXPECT_NE(rows[1].error.find("pole"), std::string::npos);
  EXPECT_TRUE(rows[2].eval.has_value());
  const auto text = read_file(dir_ / "series_zeta.csv");
  EXPECT_EQ(text, echo.str());
  EXPECT_EQ(lines_of(text).front(), "sigma,t,re,im,terms,tail_bound,method,status");

  const auto g = cmd_series(cfg, "G", sieve, 1, echo);
  EXPECT_EQ(g[0].eval->value, std::complex<double>(1.0, 0.0));
  const auto f = cmd_series(cfg, "F", sieve, 1, echo);
  EXPECT_NEAR(f[0].eval->value.real(), 0.657974, 1e-5);
  EXPECT_FALSE(f[2].eval->rigorous());
  EXPECT_NE(read_file(dir_ / "series_F.csv").find(",heuristic,"), std::string::npos);

  EXPECT_THROW(cmd_series(cfg, "nope", sieve, 1, echo), std::invalid_argument);
  cfg.s_grid.clear();
  EXPECT_THROW(cmd_series(cfg, "zeta", sieve, 1, echo), std::invalid_argument);
}

TEST_F(ScratchDir, VerifyLiouvillePasses) {
  const auto cfg = config("sieve.limit=2e5\nseries.truncation_N=2e5\nseries.euler_P=2e5\nseries.s_grid=2,0;2.5,0;3,5");
  const auto sieve = obtain_sieve(cfg, 1);
  std::ostringstream out;
  const auto report = cmd_verify(cfg, sieve, 1, out);
  EXPECT_FALSE(report.any_failed());
  EXPECT_EQ(report.exit_code(), 0);
  std::size_t identities = 0;
  for (const auto& l : report.lines) {
    EXPECT_NE(l.status, Verdict::fail) << l.check_name;
    if (l.check_name.find("@s=") != std::string::npos) {
      ++identities;
      EXPECT_EQ(l.status, Verdict::pass) << l.check_name;
    }
  }
  EXPECT_EQ(identities, 3u * 4u);
  const auto csv = lines_of(read_file(dir_ / "report.csv"));
  EXPECT_EQ(csv.front(), "check_name,status,measured,budget");
  EXPECT_EQ(csv.size(), report.lines.size() + 1);
  EXPECT_NE(out.str().find("config_hash " + config_hash(cfg)), std::string::npos);
}

TEST_F(ScratchDir, VerifyDetectsInjectedFault) {
  const auto cfg = config("sieve.limit=1e5\nseries.truncation_N=1e5\nseries.euler_P=1e5\nseries.s_grid=2.5,0");
  const auto sieve = obtain_sieve(cfg, 1);
  VerifyOptions opts;
  opts.coefficient_hook = [](DerivedFunctionKind kind, std::uint64_t n, double v) {
    return kind == DerivedFunctionKind::H_conv && n == 9 ? v + 1e-3 : v;
  };
  const auto report = run_verification(cfg, sieve, opts);
  EXPECT_TRUE(report.any_failed());
  EXPECT_EQ(report.exit_code(), 1);
  bool found = false;
  for (const auto& l : report.lines) {
    if (l.check_name == "H_eq_zetaF@s=2.5+0i") {
      found = true;
      EXPECT_EQ(l.status, Verdict::fail);
      EXPECT_GT(l.measured, l.budget);
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(ScratchDir, VerifyRejectsEmptyGrid) {
  auto cfg = config("sieve.limit=1000\nseries.truncation_N=100\nseries.euler_P=100\nseries.s_grid=");
  const auto sieve = obtain_sieve(cfg, 1);
  EXPECT_THROW(run_verification(cfg, sieve), std::invalid_argument);
}

TEST_F(ScratchDir, VerifyReportIndependentOfThreads) {
  auto cfg = config("sieve.limit=2e5\nseries.truncation_N=2e5\nseries.euler_P=2e5\nseries.s_grid=1.5,0;2,3");
  const auto sieve = obtain_sieve(cfg, 1);
  std::ostringstream sink;
  cmd_verify(cfg, sieve, 1, sink);
  const auto one = read_file(dir_ / "report.csv");
  cmd_verify(cfg, sieve, 8, sink);
  EXPECT_EQ(read_file(dir_ / "report.csv"), one);
}

TEST_F(ScratchDir, ExponentCsv) {
  const auto cfg = config("sieve.limit=1e6\nseries.truncation_N=1000\nseries.euler_P=1000");
  const auto sieve = obtain_sieve(cfg, 1);
  const auto fit = cmd_exponent(cfg, DerivedFunctionKind::F_plain, sieve, 1);
  EXPECT_GT(fit.alpha_hat, 0.3);
  EXPECT_LT(fit.alpha_hat, 0.7);
  const auto rows = lines_of(read_file(dir_ / "exponent.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "spec_id,kind,alpha_hat,stderr,x_lo,x_hi,points_used");
  EXPECT_EQ(rows[1].rfind("liouville,F,", 0), 0u);

  auto tiny = config("sieve.limit=100\nseries.truncation_N=10\nseries.euler_P=10\ncheckpoints.ratio=4");
  EXPECT_THROW(cmd_exponent(tiny, DerivedFunctionKind::F_plain, obtain_sieve(tiny, 1), 1), InsufficientDataError);
}

TEST_F(ScratchDir, SieveCacheIsReused) {
  auto cfg = config("sieve.limit=3e5\nseries.truncation_N=100\nseries.euler_P=100");
  cfg.cache_dir = (dir_ / "cache").string();
  SieveSummary first;
  const auto a = obtain_sieve(cfg, 2, &first);
  EXPECT_FALSE(first.from_cache);
  EXPECT_TRUE(fs::exists(sieve_cache_path(cfg.cache_dir, 300'000)));
  SieveSummary second;
  const auto b = obtain_sieve(cfg, 1, &second);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(second.prime_count, 25'997u);
  ASSERT_EQ(a.raw().size(), b.raw().size());
  EXPECT_TRUE(std::equal(a.raw().begin(), a.raw().end(), b.raw().begin()));

  std::ostringstream out;
  cmd_sieve(cfg, 1, out);
  EXPECT_NE(out.str().find("primes 25997"), std::string::npos);
  EXPECT_NE(out.str().find("loaded in"), std::string::npos);
}

}  // namespace
