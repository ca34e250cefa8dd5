#include "stir2/stats.hpp"

#include "stir2/errors.hpp"
#include "stir2/special.hpp"

namespace stir2 {

MomentParams moment_params(long n, int digits) {
  if (n < 1) throw DomainError("moment_params: requires n >= 1");
  const mpfr_prec_t work = Real::bits_for(digits) + 16;
  MomentParams mp;
  mp.n = n;
  Real rn = Real::of(n).round_to(work);
  Real w = lambert_w(rn, SolverConfig::for_digits(digits)).round_to(work);
  mp.omega = w.round_to(Real::bits_for(digits));
  mp.mu = (rn / w).round_to(Real::bits_for(digits));
  mp.sigma2 = (rn / (w * (w + 1))).round_to(Real::bits_for(digits));
  return mp;
}

Real bell_asympt(long n, bool refined, int digits) {
  if (n < 2) throw DomainError("bell_asympt: requires n >= 2");
  const mpfr_prec_t work = Real::bits_for(digits) + 32;
  Real rn = Real::of(n).round_to(work);
  Real w = lambert_w(rn, SolverConfig::for_digits(digits + 10)).round_to(work);
  Real value = exp((w - 1 + 1 / w) * rn - 1) / sqrt(w + 1);
  if (refined) {
    Real corr = w * w * (2 * w * w + 7 * w + 10) / (24 * pow(w + 1, 3L) * rn);
    value = value * (1 - corr);
  }
  return value.round_to(Real::bits_for(digits));
}

std::pair<Real, Real> mean_var_asympt(long n, bool refined, int digits) {
  if (n < 2) throw DomainError("mean_var_asympt: requires n >= 2");
  if (!refined) {
    MomentParams mp = moment_params(n, digits);
    return {mp.mu, mp.sigma2};
  }
  const mpfr_prec_t work = Real::bits_for(digits) + 32;
  Real rn = Real::of(n).round_to(work);
  Real w = lambert_w(rn, SolverConfig::for_digits(digits + 10)).round_to(work);
  Real wp1 = w + 1;
  Real mean = rn / w - 1 + w / (2 * wp1 * wp1) +
              w * w * (2 * pow(w, 3L) + 8 * w * w + 11 * w + 20) / (24 * pow(wp1, 5L) * rn);
  Real var = rn / (w * wp1) - 1 + w * (w - 1) / (2 * pow(wp1, 4L)) -
             w * w * (2 * pow(w, 3L) + 10 * w * w - 27 * w + 40) / (24 * pow(wp1, 7L) * rn);
  return {mean.round_to(Real::bits_for(digits)), var.round_to(Real::bits_for(digits))};
}

long distribution_mode(const std::vector<Nat>& row_n) {
  long best = 1;
  for (long k = 2; k < static_cast<long>(row_n.size()); ++k)
    if (row_n[static_cast<size_t>(k)] > row_n[static_cast<size_t>(best)]) best = k;
  return best;
}

std::pair<Rat, Rat> mean_var_from_bells(const std::vector<Nat>& bells, long n) {
  if (static_cast<long>(bells.size()) < n + 3)
    throw DomainError("mean_var_from_bells: bells must extend to n+2");
  Rat r1(bells[static_cast<size_t>(n + 1)], bells[static_cast<size_t>(n)]);
  Rat r2(bells[static_cast<size_t>(n + 2)], bells[static_cast<size_t>(n)]);
  r1.canonicalize();
  r2.canonicalize();
  Rat mean = r1 - 1;
  Rat var = r2 - r1 * r1 - 1;
  return {mean, var};
}

LimitReport limit_checks(long n, int digits) {
  if (n < 10) throw DomainError("limit_checks: requires n >= 10");
  return limit_checks(stirling_row(n), digits);
}

LimitReport limit_checks(const std::vector<Nat>& row_n, int digits) {
  long n = static_cast<long>(row_n.size()) - 1;
  if (n < 10) throw DomainError("limit_checks: requires n >= 10");
  const mpfr_prec_t work = Real::bits_for(digits) + 16;
  LimitReport rep;
  rep.n = n;
  MomentParams mp = moment_params(n, digits);
  Real mu = mp.mu.round_to(work);
  Real sigma = sqrt(mp.sigma2.round_to(work));

  Nat bell(0);
  for (const auto& v : row_n) bell += v;
  Real bell_r = Real::of(bell).round_to(work);

  // sup over jump points: at x = k the empirical CDF jumps from F(k-1) to F(k)
  Real sup(work);
  Nat cum(0);
  Real f_prev(work);
  for (long k = 1; k <= n; ++k) {
    cum += row_n[static_cast<size_t>(k)];
    Real f_k = Real::of(cum).round_to(work) / bell_r;
    Real z = (Real::of(k).round_to(work) - mu) / sigma;
    Real phi = normal_cdf(z).round_to(work);
    sup = max(sup, abs(f_k - phi));
    sup = max(sup, abs(f_prev - phi));
    f_prev = f_k;
  }
  rep.sup_cdf_distance = sup.round_to(Real::bits_for(digits));
  rep.scaled_rate =
      (sup * sqrt(Real::of(n).round_to(work)) / log(Real::of(n).round_to(work)))
          .round_to(Real::bits_for(digits));

  Real sqrt_2pi = sqrt(2 * Real::pi(digits + 10).round_to(work));
  for (long xi = -2; xi <= 2; ++xi) {
    Real x = Real::of(xi).round_to(work);
    long kx = (mu + x * sigma).floor_long();
    Real pk(work);
    if (kx >= 1 && kx <= n) pk = Real::of(row_n[static_cast<size_t>(kx)]).round_to(work) / bell_r;
    Real ratio = pk * sqrt_2pi * sigma * exp(x * x / 2);
    rep.llt_ratios.emplace_back(x.round_to(Real::bits_for(digits)),
                                ratio.round_to(Real::bits_for(digits)));
  }
  return rep;
}

}  // namespace stir2
