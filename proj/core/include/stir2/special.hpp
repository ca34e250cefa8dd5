#pragma once

#include "stir2/real.hpp"

namespace stir2 {

struct SolverConfig {
  Real rel_tolerance;
  long max_iterations = 200;

  // default tolerance 10^-(digits-5)
  static SolverConfig for_digits(int digits);
};

/// Principal branch of the Lambert W function, w e^w = x, for x >= -1/e.
/// Halley iteration; initializer log(x) - log log(x) for x > e, series near 0.
Real lambert_w(const Real& x, const SolverConfig& cfg);

/// Cayley tree function on [0, 1/e]: the solution T in [0,1] of T = z e^T.
/// Solved directly by a bracketed Newton on T e^{-T} = z. An argument outside
/// [0, 1/e] signals that an expansion parameter left its validity region.
Real tree_t(const Real& z, const SolverConfig& cfg);

/// Standard normal distribution function at working precision.
Real normal_cdf(const Real& x);

/// ln(k!): exact integer factorial then log for k within table range.
Real log_factorial(long k, int digits = Real::kDefaultDigits);

}  // namespace stir2
