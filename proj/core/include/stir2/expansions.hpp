#pragma once

#include <vector>

#include "stir2/params.hpp"
#include "stir2/poly.hpp"
#include "stir2/real.hpp"

namespace stir2 {

enum class Family {
  FD,
  PC,
  BB,
  BE,
  EE,
  EB,
  MENON,
  SADDLE_SMALLK,
  SADDLE_MLOGN,
  SADDLE_RHO,
};

const char* family_name(Family f);

struct ApproxResult {
  Family family = Family::FD;
  int order = 0;
  bool error_reduced = false;
  Real value;
  Real leading_error_estimate;
  bool in_validity_range = false;
};

/// D_{n,k}(j) = sum_l C(j,l) (-1)^{j-l} (e^{l/k}(1-l/k))^n. The alternating
/// sum cancels heavily while its terms are O(1); evaluation runs at an
/// internal precision of digits + 5j and rounds back.
Real d_fd(long n, long k, long j, int digits = Real::kDefaultDigits);

/// sum_{0<=j<s'} C(k,j)(-Lambda)^j D_{n,k}(j) with s' = min(s, k+1)
Real fd_correction_sum(long n, long k, int s, int digits = Real::kDefaultDigits);

/// Finite-difference expansion truncated before term s (s = 1 gives the bare
/// leading factor (1-lambda/k)^k).
ApproxResult fd_expansion(long n, long k, int s, int digits = Real::kDefaultDigits);

/// The untruncated finite-difference identity (all j <= k), evaluated at an
/// internal precision of digits + 5k to absorb the outer cancellation.
Real fd_full_identity(long n, long k, int digits = Real::kDefaultDigits);

/// Qbar_{n,k}(m) = sum_{l<=min(m,k)} S2{m,l} C(k,l) l! (-Lambda)^l
Real qbar(const CentralParams& p, long m);

/// Poisson-Charlier expansion with correction terms 2 <= m < 2 s1.
ApproxResult pc_expansion(long n, long k, int s1, int digits = Real::kDefaultDigits);

/// Partial sums A_M = sum_{m<=M} tau_m(n)/(m! k^m) Q_{n,k}(m) for M = 0..m_max.
std::vector<Real> pc_partial_sums(long n, long k, long m_max, int digits = Real::kDefaultDigits);

/// The Poisson-Charlier identity driven to convergence (adaptive truncation).
Real pc_identity_value(long n, long k, int digits = Real::kDefaultDigits);

/// Formal family expansions. Plain: leading factor of the family times the
/// correction series from family_coeffs/alternating-moment reductions, through
/// t-order `order`. Error-reduced: the family's lambda parameter comes from
/// solve_lambda_star; the correction series starts at its first surviving
/// order (2), so order < 2 yields the bare shifted leading factor.
ApproxResult family_expansion(long n, long k, FamilyKind family, int order, bool error_reduced,
                              int digits = Real::kDefaultDigits, const mpq_class& alpha = 0);

/// Menon's refined two-term expansion e^{-lambda_e'}(1 - ...).
ApproxResult menon_expansion(long n, long k, int digits = Real::kDefaultDigits);

/// Error-reduced Menon: e^{-lambda_hat} with the fixed-point lambda_hat.
ApproxResult menon_reduced(long n, long k, int digits = Real::kDefaultDigits);

enum class SaddleForm { small_k, m_logn, rho_form };

/// Saddle-point corollaries. `m` is the truncation parameter of the
/// exponential-correction sums (ignored by small_k).
ApproxResult saddle_corollary(long n, long k, long m, SaddleForm form,
                              int digits = Real::kDefaultDigits);

/// First-error-term polynomial P(rho, lambda) of each family's error-reduced
/// expansion; the measured error satisfies (S/f - 1)(-24k^2/lambda) -> P.
Real family_first_error_poly(FamilyKind family, const Real& rho, const Real& lam);

/// S_CP^(N): Poisson-Charlier truncation with all correction orders m <= N.
Real pc_truncation(long n, long k, long N, int digits = Real::kDefaultDigits);

/// Exp-Exp truncation graded in powers of 1/k at fixed n (tau-based
/// coefficients), used for the cross-check against pc_truncation.
Real ee_fixed_n_truncation(long n, long k, long N, int digits = Real::kDefaultDigits);

}  // namespace stir2
