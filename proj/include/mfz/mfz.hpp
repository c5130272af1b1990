#ifndef MFZ_MFZ_HPP
#define MFZ_MFZ_HPP

#include "mfz/checkpoints.hpp"
#include "mfz/dirichlet.hpp"
#include "mfz/errors.hpp"
#include "mfz/exponent.hpp"
#include "mfz/multiplicative.hpp"
#include "mfz/prime_function.hpp"
#include "mfz/prime_sums.hpp"
#include "mfz/sieve.hpp"
#include "mfz/sieve_cache.hpp"
#include "mfz/summation.hpp"
#include "mfz/zeta.hpp"

#endif  // MFZ_MFZ_HPP
