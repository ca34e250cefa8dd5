#pragma once

#include "stir2/real.hpp"
#include "stir2/special.hpp"

namespace stir2 {

/// Derived parameters for the central-range analysis of S(n,k).
struct CentralParams {
  long n = 0, k = 0;
  int digits = Real::kDefaultDigits;
  Real rho;             // n/k
  Real rho_star;        // (n+1)/k
  Real lambda;          // k e^{-n/k}
  Real lambda_b;        // k (1-1/k)^n
  Real lambda_e_prime;  // k e^{-n/k + 1/(2k) - 1/(12k^2)}
  Real Lambda;          // lambda/(k-lambda) = e^{-rho}/(1-e^{-rho})
  Real omega;           // W(n)
};

CentralParams central_params(long n, long k, int digits = Real::kDefaultDigits);

/// Solution of the saddle equation (1-e^{-R})/R = 1/rho_star.
struct SaddleSolution {
  Real R;
  Real V;         // (n+1)(R+1-rho_star)
  Real residual;  // (1-e^{-R})/R - 1/rho_star
};

/// Requires 1 <= k <= n+1; returns R = 0 for k = n+1. Newton on
/// phi(R) = rho_star(1-e^{-R}) - R with bisection fallback on the bracket
/// [max(0, rho_star-1), rho_star].
SaddleSolution solve_saddle(long n, long k, const SolverConfig& cfg,
                            int digits = Real::kDefaultDigits);

// Lagrange-series initializer for R: rho_star - sum_{j<=terms} j^{j-1}/j! rho_star^j e^{-j rho_star}
Real saddle_series_r(long n, long k, long terms, int digits = Real::kDefaultDigits);

enum class LambdaFamily { ee, bb, be, eb, hat };

struct LambdaStar {
  LambdaFamily family = LambdaFamily::ee;
  Real value;
  Real defining_residual;  // |x - rhs(x)| / x for the family's fixed-point form
};

/// lambda(alpha) = k exp(-n/k - alpha/k)
Real lambda_alpha(const CentralParams& p, const Real& alpha);

/// Error-reduced lambda parameters. Closed-form families evaluate through the
/// tree function; 'hat' iterates its fixed point with damping.
LambdaStar solve_lambda_star(const CentralParams& p, LambdaFamily family,
                             const SolverConfig& cfg);

const char* lambda_family_name(LambdaFamily f);

}  // namespace stir2
