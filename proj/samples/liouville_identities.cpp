// Prints the Dirichlet-series identities for Liouville's function at a few
// real points, with each residual next to its error budget.
//
//   liouville_identities [N]

#include <cstdio>
#include <cstdlib>

#include "mfz/mfz.hpp"

int main(int argc, char** argv) {
  const std::uint64_t N = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1'000'000;
  const auto sieve = mfz::build_sieve(N);
  const auto lambda = mfz::PrimeFunctionSpec::liouville();

  for (const double sigma : {1.5, 2.0, 3.0}) {
    const mfz::ComplexArgument s{sigma, 0.0};
    const auto F = mfz::dirichlet_sum(mfz::DerivedFunctionKind::F_plain, lambda, s, N, sieve);
    const auto z2s = mfz::zeta({2.0 * sigma, 0.0});
    const auto zs = mfz::zeta(s);
    std::printf("s = %.1f  F(s) = %.12f  zeta(2s)/zeta(s) = %.12f  tail <= %.2e\n", sigma, F.value.real(),
                (z2s.value / zs.value).real(), *F.tail_bound);
    for (const auto id : mfz::all_identities) {
      const auto r = mfz::identity_residual(id, lambda, s, N, N, sieve);
      std::printf("    %-28s residual %.3e  budget %.3e  %s\n", std::string(to_string(id)).c_str(), r.residual,
                  r.budget, r.passed() ? "ok" : "FAIL");
    }
  }
}
