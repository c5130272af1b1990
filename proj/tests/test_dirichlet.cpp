#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mfz/dirichlet.hpp"
#include "oracles.hpp"

namespace {

using mfz::ComplexArgument;
using mfz::DerivedFunctionKind;
using mfz::IdentityKind;
using mfz::PrimeFunctionSpec;
constexpr double pi = std::numbers::pi;

const mfz::FactorSieve& million() {
  static const mfz::FactorSieve sieve = mfz::build_sieve(1'000'000);
  return sieve;
}

PrimeFunctionSpec liouville_with(std::initializer_list<std::pair<std::uint64_t, double>> exceptions) {
  auto spec = PrimeFunctionSpec::liouville();
  for (const auto& [p, v] : exceptions) spec.with_exception(p, v);
  return spec;
}

TEST(DirichletSum, LiouvilleClosedForms) {
  const auto& sieve = million();
  const auto lambda = PrimeFunctionSpec::liouville();
  const auto F = mfz::dirichlet_sum(DerivedFunctionKind::F_plain, lambda, {2.0, 0.0}, 1'000'000, sieve);
  ASSERT_TRUE(F.rigorous());
  EXPECT_LE(std::abs(F.value - pi * pi / 15.0), *F.tail_bound);
  EXPECT_NEAR(F.value.real(), 0.657974, 1e-6);

  const auto H = mfz::dirichlet_sum(DerivedFunctionKind::H_conv, lambda, {2.0, 0.0}, 1'000'000, sieve);
  EXPECT_LE(std::abs(H.value - std::pow(pi, 4) / 90.0), *H.tail_bound);
  EXPECT_NEAR(H.value.real(), 1.082323, 1e-6);
}

TEST(DirichletSum, SingleTerm) {
  const auto& sieve = million();
  for (const ComplexArgument s : {ComplexArgument{0.5, 3.0}, {2.0, 0.0}, {1.1, -7.0}}) {
    for (const auto kind : {DerivedFunctionKind::F_plain, DerivedFunctionKind::H_conv, DerivedFunctionKind::G_conv,
                            DerivedFunctionKind::F_mu2}) {
      const auto e = mfz::dirichlet_sum(kind, PrimeFunctionSpec::power_decay(0.7, 0.5), s, 1, sieve);
      EXPECT_EQ(e.value, std::complex<double>(1.0, 0.0));
    }
  }
}

TEST(DirichletSum, HeuristicBelowAbscissa) {
  const auto& sieve = million();
  const auto e = mfz::dirichlet_sum(DerivedFunctionKind::F_plain, PrimeFunctionSpec::liouville(), {0.9, 0.0}, 1000,
                                    sieve);
  EXPECT_FALSE(e.rigorous());
  EXPECT_THROW(mfz::dirichlet_sum(DerivedFunctionKind::F_plain, PrimeFunctionSpec::liouville(), {2.0, 0.0},
                                  sieve.limit() + 1, sieve),
               std::invalid_argument);
  EXPECT_THROW(mfz::dirichlet_sum(DerivedFunctionKind::F_plain, PrimeFunctionSpec::liouville(), {2.0, 0.0}, 0, sieve),
               std::invalid_argument);
}

TEST(DirichletSum, MatchesNaiveSum) {
  const auto& sieve = million();
  const auto spec = PrimeFunctionSpec::power_decay(1.4, 0.7).with_exception(5, 0.3);
  const ComplexArgument s{1.3, 4.0};
  std::complex<double> naive = 0.0;
  for (std::uint64_t n = 1; n <= 5000; ++n) naive += oracle::f_of(spec, n) * std::pow(static_cast<double>(n), -s.value());
  const auto e = mfz::dirichlet_sum(DerivedFunctionKind::F_plain, spec, s, 5000, sieve);
  EXPECT_LE(std::abs(e.value - naive), 1e-12);
}

TEST(DirichletSum, IndependentOfThreadCount) {
  const auto& sieve = million();
  const auto spec = PrimeFunctionSpec::power_decay(1.4, 0.7);
  const auto a = mfz::dirichlet_sum(DerivedFunctionKind::H_conv, spec, {1.5, 2.0}, 300'000, sieve, 1);
  const auto b = mfz::dirichlet_sum(DerivedFunctionKind::H_conv, spec, {1.5, 2.0}, 300'000, sieve, 7);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(*a.tail_bound, *b.tail_bound);
}

// Every rigorous bound must cover the change when the truncation grows tenfold.
TEST(TailBounds, CoverTenfoldExtension) {
  const auto& sieve = million();
  std::vector<PrimeFunctionSpec> specs{PrimeFunctionSpec::liouville(), PrimeFunctionSpec::constant(1.0),
                                       PrimeFunctionSpec::constant(0.3), PrimeFunctionSpec::power_decay(2.0, 0.5),
                                       liouville_with({{2, 0.5}, {3, -0.25}})};
  constexpr std::uint64_t N = 10'000;
  for (const auto& spec : specs) {
    for (const double sigma : {1.2, 1.5, 2.0, 3.0}) {
      for (const double t : {0.0, 1.0, 10.0}) {
        const ComplexArgument s{sigma, t};
        for (const auto kind : {DerivedFunctionKind::F_plain, DerivedFunctionKind::H_conv,
                                DerivedFunctionKind::G_conv, DerivedFunctionKind::F_mu2}) {
          const auto small = mfz::dirichlet_sum(kind, spec, s, N, sieve);
          const auto large = mfz::dirichlet_sum(kind, spec, s, 10 * N, sieve);
          ASSERT_LE(std::abs(small.value - large.value), *small.tail_bound)
              << spec.id() << " " << to_string(kind) << " s=" << sigma << "+" << t << "i";
        }
        const auto g_small = mfz::euler_product_G(spec, s, N, sieve);
        const auto g_large = mfz::euler_product_G(spec, s, 10 * N, sieve);
        ASSERT_LE(std::abs(g_small.value - g_large.value), *g_small.tail_bound) << spec.id() << " G";
        const auto u_small = mfz::euler_product_U(spec, s, N, sieve);
        const auto u_large = mfz::euler_product_U(spec, s, 10 * N, sieve);
        ASSERT_LE(std::abs(u_small.value - u_large.value), *u_small.tail_bound) << spec.id() << " U";
      }
    }
  }
}

TEST(EulerProductG, Examples) {
  const auto& sieve = million();
  for (const ComplexArgument s : {ComplexArgument{1.5, 0.0}, {2.0, 0.0}, {3.0, 5.0}}) {
    const auto g = mfz::euler_product_G(PrimeFunctionSpec::liouville(), s, 100'000, sieve);
    EXPECT_EQ(g.value, std::complex<double>(1.0, 0.0));
    EXPECT_EQ(*g.tail_bound, 8.0 * std::numeric_limits<double>::epsilon());
  }
  const auto g = mfz::euler_product_G(liouville_with({{2, 0.0}}), {2.0, 0.0}, 1'000'000, sieve);
  EXPECT_NEAR(g.value.real(), 4.0 / 3.0, 1e-10);
  EXPECT_EQ(mfz::euler_product_G(PrimeFunctionSpec::constant(0.5), {2.0, 0.0}, 0, sieve).value,
            std::complex<double>(1.0, 0.0));
  EXPECT_THROW(mfz::euler_product_G(PrimeFunctionSpec::liouville(), {2.0, 0.0}, sieve.limit() + 1, sieve),
               std::invalid_argument);
  EXPECT_FALSE(mfz::euler_product_G(PrimeFunctionSpec::constant(0.5), {0.9, 0.0}, 1000, sieve).rigorous());
}

TEST(EulerProductU, Examples) {
  const auto& sieve = million();
  const auto lambda = PrimeFunctionSpec::liouville();
  const auto u1 = mfz::euler_product_U(lambda, {1.0, 0.0}, 1'000'000, sieve);
  EXPECT_LE(std::abs(u1.value - 6.0 / (pi * pi)), *u1.tail_bound);
  EXPECT_NEAR(u1.value.real(), 0.607927, 1e-6);
  const auto u2 = mfz::euler_product_U(lambda, {2.0, 0.0}, 1'000'000, sieve);
  EXPECT_LE(std::abs(u2.value - 90.0 / std::pow(pi, 4)), *u2.tail_bound);
  EXPECT_NEAR(u2.value.real(), 0.923938, 1e-6);
  const auto zero = mfz::euler_product_U(PrimeFunctionSpec::constant(0.0), {0.7, 3.0}, 1000, sieve);
  EXPECT_EQ(zero.value, std::complex<double>(1.0, 0.0));
  EXPECT_THROW(mfz::euler_product_U(lambda, {0.5, 0.0}, 1000, sieve), mfz::DomainError);
}

TEST(EulerProducts, GProductAgreesWithGSum) {
  const auto& sieve = million();
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = oracle::random_spec(rng);
    const auto r = mfz::identity_residual(IdentityKind::G_product_vs_sum, spec, {2.0, 0.0}, 100'000, 100'000, sieve);
    EXPECT_FALSE(r.heuristic);
    EXPECT_TRUE(r.passed()) << spec.id() << " residual " << r.residual << " budget " << r.budget;
  }
}

TEST(IdentityResidual, Examples) {
  const auto& sieve = million();
  const auto lambda = PrimeFunctionSpec::liouville();
  const auto h = mfz::identity_residual(IdentityKind::H_eq_zetaF, lambda, {2.5, 0.0}, 100'000, 100'000, sieve);
  EXPECT_TRUE(h.passed()) << h.residual << " " << h.budget;

  const auto r = mfz::identity_residual(IdentityKind::recip_zeta_eq_Fmu2_over_G, lambda, {2.0, 0.0}, 1'000'000,
                                        1'000'000, sieve);
  const auto fm = mfz::dirichlet_sum(DerivedFunctionKind::F_mu2, lambda, {2.0, 0.0}, 1'000'000, sieve);
  EXPECT_NEAR(r.residual, std::abs(fm.value * (pi * pi / 6.0) - 1.0), 1e-12);
  EXPECT_TRUE(r.passed()) << r.residual << " " << r.budget;

  const auto zero = PrimeFunctionSpec::constant(0.0);
  for (const ComplexArgument s : {ComplexArgument{2.0, 0.0}, {1.3, 9.0}}) {
    const auto z = mfz::identity_residual(IdentityKind::Fmu2_eq_FU, zero, s, 1000, 1000, sieve);
    EXPECT_EQ(z.residual, 0.0);
  }
}

TEST(IdentityResidual, LiouvilleFinalIdentityAcrossHalfPlane) {
  const auto& sieve = million();
  const auto lambda = PrimeFunctionSpec::liouville();
  for (const ComplexArgument s : {ComplexArgument{1.2, 0.0}, {1.5, 3.0}, {2.0, 10.0}, {3.0, 1.0}}) {
    const auto r = mfz::identity_residual(IdentityKind::recip_zeta_eq_Fmu2_over_G, lambda, s, 100'000, 100'000, sieve);
    EXPECT_TRUE(r.passed()) << s.sigma << " " << r.residual << " " << r.budget;
  }
}

TEST(IdentityResidual, HeuristicNeedsTolerance) {
  const auto& sieve = million();
  const auto lambda = PrimeFunctionSpec::liouville();
  EXPECT_THROW(mfz::identity_residual(IdentityKind::H_eq_zetaF, lambda, {0.9, 0.0}, 1000, 1000, sieve),
               std::invalid_argument);
  mfz::IdentityOptions opts;
  opts.heuristic_tolerance = 0.5;
  const auto r = mfz::identity_residual(IdentityKind::H_eq_zetaF, lambda, {0.9, 0.0}, 1000, 1000, sieve, opts);
  EXPECT_TRUE(r.heuristic);
  EXPECT_EQ(r.budget, 0.5);
}

TEST(IdentityResidual, CorruptedCoefficientFails) {
  const auto& sieve = million();
  const auto lambda = PrimeFunctionSpec::liouville();
  const mfz::SpecCoefficients base{lambda, sieve};
  auto corrupted = [&](DerivedFunctionKind kind, std::uint64_t n) {
    const double v = base(kind, n);
    return (kind == DerivedFunctionKind::H_conv && n == 2) ? v + 1e-3 : v;
  };
  const auto r = mfz::identity_residual_with(corrupted, IdentityKind::H_eq_zetaF, lambda, {2.5, 0.0}, 100'000,
                                             100'000, sieve);
  EXPECT_FALSE(r.passed());
}

TEST(FViaEuler, MatchesDirectSumAndVanishesTowardOne) {
  const auto& sieve = million();
  const auto spec = liouville_with({{3, 0.5}});
  const auto direct = mfz::dirichlet_sum(DerivedFunctionKind::F_plain, spec, {2.0, 0.0}, 1'000'000, sieve);
  const auto euler = mfz::dirichlet_F_via_euler(spec, {2.0, 0.0}, 1'000'000, sieve);
  EXPECT_LE(std::abs(direct.value - euler.value), *direct.tail_bound + *euler.tail_bound);

  // For Liouville, F(s) = zeta(2s)/zeta(s) ~ zeta(2) h near s = 1.
  const auto lambda = PrimeFunctionSpec::liouville();
  double prev = 1.0;
  for (const double h : {0.1, 0.05, 0.01, 0.001}) {
    const auto F = mfz::dirichlet_F_via_euler(lambda, {1.0 + h, 0.0}, 1'000'000, sieve);
    const auto ref = mfz::zeta({2.0 + 2.0 * h, 0.0}).value / mfz::zeta({1.0 + h, 0.0}).value;
    EXPECT_LE(std::abs(F.value - ref), *F.tail_bound + 1e-12);
    EXPECT_LT(std::abs(F.value), prev);
    prev = std::abs(F.value);
  }
}

}  // namespace
