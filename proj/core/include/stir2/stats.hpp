#pragma once

#include <utility>
#include <vector>

#include "stir2/exact.hpp"
#include "stir2/real.hpp"

namespace stir2 {

struct MomentParams {
  long n = 0;
  Real mu;      // n/W(n)
  Real sigma2;  // n/(W(n)(W(n)+1))
  Real omega;   // W(n)
};

MomentParams moment_params(long n, int digits = Real::kDefaultDigits);

/// Leading Bell asymptotics e^{(w-1+1/w)n-1}/sqrt(w+1); `refined` applies the
/// saddle-point correction factor.
Real bell_asympt(long n, bool refined, int digits = Real::kDefaultDigits);

/// (mu_n, sigma_n^2); `refined` returns the four-term expansions instead.
std::pair<Real, Real> mean_var_asympt(long n, bool refined, int digits = Real::kDefaultDigits);

struct LimitReport {
  long n = 0;
  Real sup_cdf_distance;
  // (x, P(X = floor(mu + x sigma)) * sqrt(2 pi) sigma * e^{x^2/2})
  std::vector<std::pair<Real, Real>> llt_ratios;
  Real scaled_rate;  // sup_cdf_distance * sqrt(n)/log(n)
};

/// Exact-distribution CLT/LLT check at a single n (full CDF scan).
LimitReport limit_checks(long n, int digits = Real::kDefaultDigits);
LimitReport limit_checks(const std::vector<Nat>& row_n, int digits = Real::kDefaultDigits);

/// argmax_k of a Stirling row (the distribution's mode; first max on ties)
long distribution_mode(const std::vector<Nat>& row_n);

/// Exact E(X_n) and V(X_n) from Bell numbers: B_{n+1}/B_n - 1 and
/// B_{n+2}/B_n - (B_{n+1}/B_n)^2 - 1. `bells` must extend to index n+2.
std::pair<Rat, Rat> mean_var_from_bells(const std::vector<Nat>& bells, long n);

}  // namespace stir2
