#include "stir2/params.hpp"

#include "stir2/errors.hpp"
#include "stir2/exact.hpp"

namespace stir2 {

CentralParams central_params(long n, long k, int digits) {
  if (k < 1 || k > n) throw DomainError("central_params: requires 1 <= k <= n");
  const mpfr_prec_t work = Real::bits_for(digits) + 16;
  CentralParams p;
  p.n = n;
  p.k = k;
  p.digits = digits;
  Real rn = Real::of(n).round_to(work);
  Real rk = Real::of(k).round_to(work);
  p.rho = rn / rk;
  p.rho_star = (rn + 1) / rk;
  p.lambda = rk * exp(-p.rho);
  // (1-1/k)^n = exp(n log((k-1)/k)); k = 1 gives 0 exactly
  if (k == 1) {
    p.lambda_b = Real::of(0L, digits).round_to(work);
  } else {
    p.lambda_b = rk * exp(rn * log(Real::of(mpq_class(k - 1, k), digits).round_to(work)));
  }
  p.lambda_e_prime =
      rk * exp(-p.rho + 1 / (2 * rk) - 1 / (12 * rk * rk));
  p.Lambda = p.lambda / (rk - p.lambda);
  p.omega = lambert_w(rn, SolverConfig::for_digits(digits));
  return p;
}

Real saddle_series_r(long n, long k, long terms, int digits) {
  const mpfr_prec_t work = Real::bits_for(digits) + 16;
  Real rho_star = Real::of(mpq_class(n + 1, k), digits).round_to(work);
  Real acc = Real::of(0L).round_to(work);
  Real e_mrho = exp(-rho_star);
  Real z = rho_star * e_mrho;  // rho_star e^{-rho_star}
  Real zj = Real::of(1L).round_to(work);
  for (long j = 1; j <= terms; ++j) {
    zj *= z;  // (rho_star e^{-rho_star})^j
    Nat num;
    mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(j),
                  static_cast<unsigned long>(j - 1));
    acc += zj * num / factorial(j);
  }
  return rho_star - acc;
}

SaddleSolution solve_saddle(long n, long k, const SolverConfig& cfg, int digits) {
  if (k < 1 || k > n + 1) throw DomainError("solve_saddle: requires 1 <= k <= n+1");
  const mpfr_prec_t work = Real::bits_for(digits) + 32;
  SaddleSolution sol;
  Real rho_star = Real::of(mpq_class(n + 1, k), digits).round_to(work);
  if (k == n + 1) {
    sol.R = Real::of(0L, digits);
    sol.V = Real::of(0L, digits);
    sol.residual = Real::of(0L, digits);
    return sol;
  }
  Real zero = Real::of(0L).round_to(work);
  Real lo = max(zero, rho_star - 1);
  Real hi = rho_star;
  // phi(R) = rho_star (1 - e^{-R}) - R; phi(lo) >= 0, phi(hi) < 0
  auto phi = [&](const Real& r) { return -rho_star * expm1(-r) - r; };
  Real r = saddle_series_r(n, k, 12, digits).round_to(work);
  if (r <= lo || r >= hi) r = (lo + hi) / 2;
  bool converged = false;
  for (long it = 0; it < cfg.max_iterations; ++it) {
    Real f = phi(r);
    if (abs(f) <= cfg.rel_tolerance * rho_star / 16) {
      converged = true;
      break;
    }
    if (f.sign() > 0)
      lo = r;
    else
      hi = r;
    Real fp = rho_star * exp(-r) - 1;
    Real next(work);
    bool bisect = fp.is_zero();
    if (!bisect) {
      next = r - f / fp;
      if (next <= lo || next >= hi) bisect = true;
    }
    if (bisect) next = (lo + hi) / 2;
    if (next == r) {
      converged = true;
      break;
    }
    r = next;
  }
  Real resid = -expm1(-r) / r - 1 / rho_star;
  if (!converged && abs(resid) > cfg.rel_tolerance)
    throw ConvergenceError("solve_saddle: no convergence within max_iterations");
  sol.R = r.round_to(Real::bits_for(digits));
  sol.V = ((n + 1) * (r + 1 - rho_star)).round_to(Real::bits_for(digits));
  sol.residual = resid.round_to(Real::bits_for(digits));
  return sol;
}

Real lambda_alpha(const CentralParams& p, const Real& alpha) {
  const mpfr_prec_t work = Real::bits_for(p.digits) + 16;
  Real rk = Real::of(p.k).round_to(work);
  return rk * exp(-p.rho.round_to(work) - alpha.round_to(work) / rk);
}

const char* lambda_family_name(LambdaFamily f) {
  switch (f) {
    case LambdaFamily::ee: return "ee";
    case LambdaFamily::bb: return "bb";
    case LambdaFamily::be: return "be";
    case LambdaFamily::eb: return "eb";
    case LambdaFamily::hat: return "hat";
  }
  return "?";
}

namespace {

// log(1/(1-1/k)) = log(k/(k-1)) at working precision; requires k >= 2
Real log_k_ratio(long k, mpfr_prec_t work) {
  return log(Real::of(mpq_class(k, k - 1)).round_to(work));
}

}  // namespace

LambdaStar solve_lambda_star(const CentralParams& p, LambdaFamily family,
                             const SolverConfig& cfg) {
  const int digits = p.digits;
  const mpfr_prec_t work = Real::bits_for(digits) + 32;
  const long n = p.n, k = p.k;
  Real rn = Real::of(n).round_to(work);
  Real rk = Real::of(k).round_to(work);
  Real rho = p.rho.round_to(work);
  Real lambda = p.lambda.round_to(work);
  Real lambda_b = p.lambda_b.round_to(work);

  LambdaStar out;
  out.family = family;

  auto finish = [&](const Real& x, const Real& rhs) {
    out.value = x.round_to(Real::bits_for(digits));
    Real denom = max(abs(x), pow10(-digits, digits).round_to(work));
    out.defining_residual = (abs(x - rhs) / denom).round_to(Real::bits_for(digits));
    return out;
  };

  switch (family) {
    case LambdaFamily::ee: {
      // x = k exp(-n/k - rho/(2k) + (rho+1) x/(2k))
      Real z = (rho + 1) / 2 * exp(-rho - rho / (2 * rk));
      Real x = 2 * rk / (rho + 1) * tree_t(z, cfg).round_to(work);
      Real rhs = rk * exp(-rho - rho / (2 * rk) + (rho + 1) * x / (2 * rk));
      return finish(x, rhs);
    }
    case LambdaFamily::bb: {
      // x = k (1-1/k)^(n - x n/(2k))
      if (k == 1) return finish(Real::of(0L).round_to(work), Real::of(0L).round_to(work));
      Real L = log_k_ratio(k, work);
      Real pow_b = lambda_b / rk;  // (1-1/k)^n
      Real z = rn / 2 * pow_b * L;
      Real x = 2 * rk / (rn * L) * tree_t(z, cfg).round_to(work);
      Real rhs = rk * exp(-(rn - x * rn / (2 * rk)) * L);
      return finish(x, rhs);
    }
    case LambdaFamily::be: {
      // x = k exp(-n/k + (x-1) n/(2k^2))
      Real z = rn / (2 * rk) * exp(-rho - rn / (2 * rk * rk));
      Real x = 2 * rk * rk / rn * tree_t(z, cfg).round_to(work);
      Real rhs = rk * exp(-rho + (x - 1) * rn / (2 * rk * rk));
      return finish(x, rhs);
    }
    case LambdaFamily::eb: {
      // x = k (1-1/k)^(n - (rho+1) x/2)
      if (k == 1) return finish(Real::of(0L).round_to(work), Real::of(0L).round_to(work));
      Real L = log_k_ratio(k, work);
      Real pow_b = lambda_b / rk;
      Real z = (rn + rk) / 2 * pow_b * L;
      Real x = 2 * rk / ((rn + rk) * L) * tree_t(z, cfg).round_to(work);
      Real rhs = rk * exp(-(rn - (rho + 1) * x / 2) * L);
      return finish(x, rhs);
    }
    case LambdaFamily::hat: {
      // x = lambda exp(-(rho-(rho+1)x)/(2k)
      //                - (8 rho + 6 rho (rho-2) x - (rho-1)(3 rho+1) x^2)/(24 k^2))
      auto rhs_of = [&](const Real& x) {
        Real t1 = (rho - (rho + 1) * x) / (2 * rk);
        Real t2 = (8 * rho + 6 * rho * (rho - 2) * x - (rho - 1) * (3 * rho + 1) * x * x) /
                  (24 * rk * rk);
        return lambda * exp(-t1 - t2);
      };
      Real x = lambda;
      Real prev_resid = Real::nan(digits);
      for (long it = 0; it < cfg.max_iterations; ++it) {
        Real rhs = rhs_of(x);
        Real resid = abs(rhs - x);
        Real rel_change = resid / max(abs(x), pow10(-digits, digits).round_to(work));
        if (rel_change <= cfg.rel_tolerance) return finish(rhs, rhs_of(rhs));
        Real next(work);
        if (!prev_resid.is_nan() && resid > prev_resid)
          next = (x + rhs) / 2;  // damping
        else
          next = rhs;
        prev_resid = resid;
        x = next;
      }
      throw ConvergenceError("solve_lambda_star(hat): fixed point did not converge");
    }
  }
  throw DomainError("solve_lambda_star: unknown family");
}

}  // namespace stir2
