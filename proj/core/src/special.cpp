#include "stir2/special.hpp"

#include "stir2/errors.hpp"
#include "stir2/exact.hpp"

namespace stir2 {

SolverConfig SolverConfig::for_digits(int digits) {
  if (digits < Real::kMinDigits) throw DomainError("working precision must be >= 15 digits");
  SolverConfig cfg;
  cfg.rel_tolerance = pow10(-(digits - 5), digits);
  cfg.max_iterations = 200;
  return cfg;
}

namespace {

// |a - b| <= tol * max(|b|, 1)
bool close_rel(const Real& a, const Real& b, const Real& tol) {
  return abs(a - b) <= tol * max(abs(b), Real::of(1L));
}

// e*z at working precision
Real e_times(const Real& z, mpfr_prec_t work) {
  Real one = Real::of(1L).round_to(work);
  return exp(one) * z;
}

}  // namespace

Real lambert_w(const Real& x, const SolverConfig& cfg) {
  const mpfr_prec_t work = x.prec() + 24;
  Real xx = x.round_to(work);
  Real one = Real::of(1L).round_to(work);
  Real minus_inv_e = -exp(Real::of(-1L).round_to(work));
  if (xx < minus_inv_e) {
    // tolerate representation noise exactly at the branch point
    if (abs(xx - minus_inv_e) <= cfg.rel_tolerance * abs(minus_inv_e))
      return Real::of(-1L).round_to(x.prec());
    throw DomainError("lambert_w: argument below -1/e");
  }
  if (xx.is_zero()) return Real::of(0L).round_to(x.prec());

  Real w(work);
  Real e_const = exp(one);
  if (xx > e_const) {
    Real lx = log(xx);
    w = lx - log(lx);
  } else if (xx >= Real::of(0.5, 64).round_to(work)) {
    w = log(one + xx);
  } else if (xx >= -exp(Real::of(-1L).round_to(work)) / 2) {
    // W(x) = x - x^2 + (3/2)x^3 + ... near 0; adequate start for Halley
    w = xx * (one - xx + Real::of(3L) / 2 * xx * xx);
  } else {
    // near the branch point: W = -1 + sqrt(2(1+ex)) - ...
    Real p = sqrt(2 * (one + e_const * xx));
    w = -one + p - p * p / 3;
  }

  for (long it = 0; it < cfg.max_iterations; ++it) {
    Real ew = exp(w);
    Real f = w * ew - xx;
    Real wp1 = w + 1;
    // Halley step
    Real denom = ew * wp1 - (w + 2) * f / (2 * wp1);
    Real step = f / denom;
    Real w_next = w - step;
    if (w_next < -1) w_next = (w - 1) / 2;  // keep on the principal branch
    bool done = close_rel(w_next, w, cfg.rel_tolerance / 16);
    w = w_next;
    if (done) {
      Real resid = abs(w * exp(w) - xx);
      if (resid <= cfg.rel_tolerance * max(abs(xx), one)) return w.round_to(x.prec());
    }
  }
  throw ConvergenceError("lambert_w: no convergence within max_iterations");
}

Real tree_t(const Real& z, const SolverConfig& cfg) {
  const mpfr_prec_t work = z.prec() + 24;
  Real zz = z.round_to(work);
  Real one = Real::of(1L).round_to(work);
  Real inv_e = exp(-one);
  if (zz < 0) throw DomainError("tree_t: argument below 0");
  if (zz > inv_e) {
    if (zz - inv_e <= cfg.rel_tolerance * inv_e) return one.round_to(z.prec());
    throw DomainError("tree_t: argument above 1/e (outside the expansion's validity range)");
  }
  if (zz.is_zero()) return Real::of(0L).round_to(z.prec());

  // f(T) = T e^{-T} - z is increasing on [0,1]
  Real lo = Real::of(0L).round_to(work), hi = one;
  Real t(work);
  if (zz < Real::of(0.25, 64).round_to(work)) {
    t = zz * (one + zz + Real::of(3L) / 2 * zz * zz);
  } else {
    Real d = 2 * (one - e_times(zz, work));
    t = one - sqrt(max(d, Real::of(0L).round_to(work)));
  }
  if (t < lo || t > hi) t = (lo + hi) / 2;

  Real f_scale = max(zz, one / 1000000L);
  for (long it = 0; it < cfg.max_iterations * 8; ++it) {
    Real emt = exp(-t);
    Real f = t * emt - zz;
    if (abs(f) <= cfg.rel_tolerance * f_scale / 16) {
      return t.round_to(z.prec());
    }
    if (f.sign() > 0)
      hi = t;
    else
      lo = t;
    Real fp = emt * (one - t);
    Real t_next(work);
    bool bisect = fp.is_zero();
    if (!bisect) {
      t_next = t - f / fp;
      if (t_next <= lo || t_next >= hi) bisect = true;
    }
    if (bisect) t_next = (lo + hi) / 2;
    if (t_next == t) return t.round_to(z.prec());
    t = t_next;
  }
  // residual check with the bisection-limited accuracy
  Real emt = exp(-t);
  if (abs(t * emt - zz) <= cfg.rel_tolerance * f_scale) return t.round_to(z.prec());
  throw ConvergenceError("tree_t: no convergence within iteration budget");
}

Real normal_cdf(const Real& x) {
  const mpfr_prec_t work = x.prec() + 16;
  Real arg = -x.round_to(work) / sqrt(Real::of(2L).round_to(work));
  return (erfc(arg) / 2L).round_to(x.prec());
}

Real log_factorial(long k, int digits) {
  if (k < 0) throw DomainError("log_factorial: requires k >= 0");
  if (k <= 1) return Real::of(0L, digits);
  if (k <= 100000) {
    Real f = Real::of(factorial(k), digits + 10);
    return log(f).round_to(Real::bits_for(digits));
  }
  Real r(Real::bits_for(digits) + 16);
  mpfr_t tmp;
  mpfr_init2(tmp, r.prec());
  mpfr_set_si(tmp, k + 1, MPFR_RNDN);
  mpfr_lngamma(r.raw(), tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return r.round_to(Real::bits_for(digits));
}

}  // namespace stir2
