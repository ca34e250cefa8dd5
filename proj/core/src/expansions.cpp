#include "stir2/expansions.hpp"

#include <algorithm>

#include "stir2/errors.hpp"
#include "stir2/exact.hpp"

namespace stir2 {

const char* family_name(Family f) {
  switch (f) {
    case Family::FD: return "FD";
    case Family::PC: return "PC";
    case Family::BB: return "BB";
    case Family::BE: return "BE";
    case Family::EE: return "EE";
    case Family::EB: return "EB";
    case Family::MENON: return "MENON";
    case Family::SADDLE_SMALLK: return "SADDLE_SMALLK";
    case Family::SADDLE_MLOGN: return "SADDLE_MLOGN";
    case Family::SADDLE_RHO: return "SADDLE_RHO";
  }
  return "?";
}

namespace {

// e^{l/k}(1-l/k) raised to the n, all exact inputs: exp(n(l/k + log((k-l)/k)))
Real g_power(long n, long k, long l, mpfr_prec_t work) {
  if (l == k) return Real(work);  // zero
  Real lk = Real::of(mpq_class(l, k)).round_to(work);
  Real logq = log(Real::of(mpq_class(k - l, k)).round_to(work));
  return exp(Real::of(n).round_to(work) * (lk + logq));
}

// cache of g_power(l) for l = 0..l_max
std::vector<Real> g_table(long n, long k, long l_max, mpfr_prec_t work) {
  std::vector<Real> t;
  t.reserve(static_cast<size_t>(l_max) + 1);
  for (long l = 0; l <= l_max; ++l) t.push_back(g_power(n, k, l, work));
  return t;
}

Real d_from_table(const std::vector<Real>& g, long j, mpfr_prec_t work) {
  Real acc(work);
  Nat c(1);
  for (long l = 0; l <= j; ++l) {
    Real term = g[static_cast<size_t>(l)] * c;
    if ((j - l) % 2 == 0)
      acc += term;
    else
      acc -= term;
    c *= (j - l);
    c /= (l + 1);
  }
  return acc;
}

// (1 - e^{-rho})^k at working precision
Real bino_exp_leading(long n, long k, mpfr_prec_t work) {
  Real rho = Real::of(mpq_class(n, k)).round_to(work);
  return exp(Real::of(k).round_to(work) * log1p(-exp(-rho)));
}

Real lambda_of(long n, long k, mpfr_prec_t work) {
  Real rho = Real::of(mpq_class(n, k)).round_to(work);
  return Real::of(k).round_to(work) * exp(-rho);
}

Real Lambda_of(long n, long k, mpfr_prec_t work) {
  Real rho = Real::of(mpq_class(n, k)).round_to(work);
  Real em = exp(-rho);
  return em / (1 - em);
}

bool fd_in_range(long n, long k, int digits) {
  // n/log n <= k <= 2n/(log n + 6)
  Real ln = log(Real::of(n, digits));
  Real rk = Real::of(k, digits);
  return rk * ln >= Real::of(n, digits) && rk * (ln + 6) <= 2 * Real::of(n, digits);
}

bool pc_in_range(long n, long k, int digits) {
  // n/W(n) <= k <= 2n/(log n + 6), i.e. lambda >= 1 and upper limit as FD
  Real w = lambert_w(Real::of(n, digits), SolverConfig::for_digits(digits));
  Real rk = Real::of(k, digits);
  Real ln = log(Real::of(n, digits));
  return rk * w >= Real::of(n, digits) && rk * (ln + 6) <= 2 * Real::of(n, digits);
}

bool family_in_range(long n, long k, int digits) {
  Real ln = log(Real::of(n, digits));
  return Real::of(k, digits) * (ln + 6) <= 2 * Real::of(n, digits);
}

}  // namespace

Real d_fd(long n, long k, long j, int digits) {
  if (j < 0 || j > k) throw DomainError("d_fd: requires 0 <= j <= k");
  const mpfr_prec_t work = Real::bits_for(digits + 5 * static_cast<int>(j) + 10);
  auto g = g_table(n, k, j, work);
  return d_from_table(g, j, work).round_to(Real::bits_for(digits));
}

Real fd_correction_sum(long n, long k, int s, int digits) {
  if (s < 1) throw DomainError("fd_correction_sum: requires s >= 1");
  long jmax = std::min<long>(s - 1, k);
  const mpfr_prec_t work = Real::bits_for(digits + 5 * static_cast<int>(jmax) + 15);
  auto g = g_table(n, k, jmax, work);
  Real Lam = Lambda_of(n, k, work);
  Real acc = Real::of(1L).round_to(work);  // j = 0 term: D(0) = 1
  Real w = Real::of(1L).round_to(work);
  Nat c(1);
  for (long j = 1; j <= jmax; ++j) {
    c *= (k - j + 1);
    c /= j;
    w = w * (-Lam);
    acc += w * Real::of(c).round_to(work) * d_from_table(g, j, work);
  }
  return acc;
}

ApproxResult fd_expansion(long n, long k, int s, int digits) {
  if (k < 1 || k > n) throw DomainError("fd_expansion: requires 1 <= k <= n");
  if (s < 1) throw DomainError("fd_expansion: requires s >= 1");
  const mpfr_prec_t work = Real::bits_for(digits + 5 * s + 15);
  ApproxResult r;
  r.family = Family::FD;
  r.order = s;
  Real leading = bino_exp_leading(n, k, work);
  Real corr = fd_correction_sum(n, k, s, digits + 5);
  r.value = (leading * corr.round_to(work)).round_to(Real::bits_for(digits));
  // first omitted term
  if (s <= k) {
    Real Lam = Lambda_of(n, k, work);
    Real next = Real::of(binom(k, s)).round_to(work) * pow(Lam, static_cast<long>(s)) *
                d_fd(n, k, s, digits + 5).round_to(work);
    r.leading_error_estimate = (leading * abs(next)).round_to(Real::bits_for(digits));
  } else {
    r.leading_error_estimate = Real::of(0L, digits);
  }
  r.in_validity_range = fd_in_range(n, k, digits);
  return r;
}

Real fd_full_identity(long n, long k, int digits) {
  if (k < 1 || k > n) throw DomainError("fd_full_identity: requires 1 <= k <= n");
  const mpfr_prec_t work = Real::bits_for(digits + 5 * static_cast<int>(k) + 20);
  auto g = g_table(n, k, k, work);
  Real Lam = Lambda_of(n, k, work);
  Real acc = Real::of(1L).round_to(work);
  Real w = Real::of(1L).round_to(work);
  Nat c(1);
  for (long j = 1; j <= k; ++j) {
    c *= (k - j + 1);
    c /= j;
    w = w * (-Lam);
    acc += w * Real::of(c).round_to(work) * d_from_table(g, j, work);
  }
  return (bino_exp_leading(n, k, work) * acc).round_to(Real::bits_for(digits));
}

Real qbar(const CentralParams& p, long m) {
  if (m < 0) throw DomainError("qbar: requires m >= 0");
  const mpfr_prec_t work = Real::bits_for(p.digits) + 32;
  long lmax = std::min(m, p.k);
  auto s2 = stirling2_row_capped(m, lmax);
  Real Lam = p.Lambda.round_to(work);
  Real acc(work);
  Real weight = Real::of(1L).round_to(work);  // C(k,l) l! (-Lambda)^l
  for (long l = 0; l <= lmax; ++l) {
    if (l > 0) weight = weight * (p.k - l + 1) * (-Lam);
    if (l < static_cast<long>(s2.size()) && s2[static_cast<size_t>(l)] != 0)
      acc += weight * Real::of(s2[static_cast<size_t>(l)]).round_to(work);
  }
  return acc.round_to(Real::bits_for(p.digits));
}

ApproxResult pc_expansion(long n, long k, int s1, int digits) {
  if (k < 1 || k > n) throw DomainError("pc_expansion: requires 1 <= k <= n");
  if (s1 < 1) throw DomainError("pc_expansion: requires s1 >= 1");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  ApproxResult r;
  r.family = Family::PC;
  r.order = s1;
  CentralParams p = central_params(n, k, digits + 10);
  auto tau = tau_values(2 * s1, n);
  Real acc = Real::of(1L).round_to(work);
  Nat denom = 1;  // m! k^m
  for (long m = 2; m < 2 * s1; ++m) {
    if (m == 2) {
      denom = 2 * pow_nat(k, 2);
    } else {
      denom *= m * k;
    }
    if (tau[static_cast<size_t>(m)] == 0) continue;
    Real t = Real::of(tau[static_cast<size_t>(m)]).round_to(work) / denom;
    acc += t * qbar(p, m).round_to(work);
  }
  Real leading = bino_exp_leading(n, k, work);
  r.value = (leading * acc).round_to(Real::bits_for(digits));
  {
    long m = 2 * s1;
    Nat dnext = (m == 2) ? Nat(2 * pow_nat(k, 2)) : Nat(denom * (m * k));
    Real t = Real::of(tau[static_cast<size_t>(m)]).round_to(work) / dnext;
    r.leading_error_estimate =
        (leading * abs(t * qbar(p, m).round_to(work))).round_to(Real::bits_for(digits));
  }
  r.in_validity_range = pc_in_range(n, k, digits);
  return r;
}

namespace {

// shared core of the Poisson-Charlier identity evaluation; m_max < 0 means
// adaptive truncation. Returns partial sums (rounded to `digits`).
std::vector<Real> pc_identity_core(long n, long k, long m_max, int digits) {
  if (k < 1 || k > n) throw DomainError("pc identity: requires 1 <= k <= n");
  const mpfr_prec_t work = Real::bits_for(digits + 5 * static_cast<int>(k) + 40);
  const mpfr_prec_t out = Real::bits_for(digits);
  const bool adaptive = m_max < 0;
  const long hard_cap = adaptive ? 4000 : m_max;

  Real leading = bino_exp_leading(n, k, work);
  Real Lam = Lambda_of(n, k, work);
  // W_l = C(k,l) l! (-Lambda)^l
  std::vector<Real> W;
  W.reserve(static_cast<size_t>(k) + 1);
  W.push_back(Real::of(1L).round_to(work));
  for (long l = 1; l <= k; ++l) W.push_back(W.back() * (k - l + 1) * (-Lam));

  std::vector<Real> partials;
  Real acc(work);
  std::vector<mpz_class> s2row = {mpz_class(1)};  // S2{0, .}
  mpz_class tau_prev2(0), tau_prev(1);            // tau_{m-2}, tau_{m-1} seeds
  Nat denom(1);                                   // m! k^m
  Real eps = pow10(-(digits + 12), digits + 20).round_to(work);
  long small_streak = 0;

  for (long m = 0; m <= hard_cap || adaptive; ++m) {
    if (!adaptive && m > hard_cap) break;
    if (adaptive && m > 4000)
      throw ConvergenceError("pc_identity_value: no convergence within 4000 terms");
    mpz_class tau_m;
    if (m == 0) {
      tau_m = 1;
    } else if (m == 1) {
      tau_m = 0;
    } else {
      tau_m = (m - 1) * (tau_prev - n * tau_prev2);
      tau_prev2 = tau_prev;
      tau_prev = tau_m;
    }
    if (m == 1) {
      tau_prev2 = 1;
      tau_prev = 0;
    }
    if (m >= 1) {
      denom *= m * k;
    }
    if (m >= 1) {
      // advance S2 row to m with columns capped at k
      long cols = std::min(m, k);
      std::vector<mpz_class> next(static_cast<size_t>(cols) + 1);
      next[0] = 0;
      for (long l = 1; l <= cols; ++l) {
        mpz_class v = (static_cast<long>(s2row.size()) > l) ? l * s2row[static_cast<size_t>(l)]
                                                            : mpz_class(0);
        if (l - 1 < static_cast<long>(s2row.size())) v += s2row[static_cast<size_t>(l - 1)];
        next[static_cast<size_t>(l)] = v;
      }
      s2row = std::move(next);
    }
    Real term(work);
    if (tau_m != 0) {
      Real qb(work);
      for (long l = 0; l < static_cast<long>(s2row.size()); ++l)
        if (s2row[static_cast<size_t>(l)] != 0)
          qb += W[static_cast<size_t>(l)] * Real::of(s2row[static_cast<size_t>(l)]).round_to(work);
      term = Real::of(tau_m).round_to(work) / denom * qb;
    }
    acc += term;
    partials.push_back((leading * acc).round_to(out));
    if (adaptive) {
      if (m >= 2 && abs(term) <= eps * max(abs(acc), eps)) {
        if (++small_streak >= 8) break;
      } else {
        small_streak = 0;
      }
    }
  }
  return partials;
}

}  // namespace

std::vector<Real> pc_partial_sums(long n, long k, long m_max, int digits) {
  if (m_max < 0) throw DomainError("pc_partial_sums: requires m_max >= 0");
  return pc_identity_core(n, k, m_max, digits);
}

Real pc_identity_value(long n, long k, int digits) {
  auto partials = pc_identity_core(n, k, -1, digits);
  return partials.back();
}

namespace {

struct FamilyEval {
  Real leading;          // (1-x)^k or e^{-lam}
  Real reduced_moment;   // correction coefficient at one t-order
};

Real family_leading_plain(FamilyKind fam, const CentralParams& p, mpfr_prec_t work) {
  Real rk = Real::of(p.k).round_to(work);
  switch (fam) {
    case FamilyKind::bb: return exp(rk * log1p(-p.lambda_b.round_to(work) / rk));
    case FamilyKind::be: return exp(rk * log1p(-p.lambda.round_to(work) / rk));
    case FamilyKind::ee: return exp(-p.lambda.round_to(work));
    case FamilyKind::eb: return exp(-p.lambda_b.round_to(work));
  }
  throw DomainError("family_leading_plain: unknown family");
}

Real family_reduced_moment(FamilyKind fam, const CentralParams& p, const BivarPoly& cm,
                           const Real& lam_alpha, mpfr_prec_t work) {
  UnivarPoly uni = cm.substitute_w(mpq_class(p.n, p.k));
  Real rk = Real::of(p.k).round_to(work);
  switch (fam) {
    case FamilyKind::bb:
      return alternating_moment_binomial_reduced(uni, p.k, p.lambda_b.round_to(work) / rk);
    case FamilyKind::be:
      return alternating_moment_binomial_reduced(uni, p.k, p.lambda.round_to(work) / rk);
    case FamilyKind::ee:
      return alternating_moment_poisson_reduced(uni, lam_alpha.round_to(work));
    case FamilyKind::eb:
      return alternating_moment_poisson_reduced(uni, p.lambda_b.round_to(work));
  }
  throw DomainError("family_reduced_moment: unknown family");
}

Family family_tag(FamilyKind fam) {
  switch (fam) {
    case FamilyKind::bb: return Family::BB;
    case FamilyKind::be: return Family::BE;
    case FamilyKind::ee: return Family::EE;
    case FamilyKind::eb: return Family::EB;
  }
  return Family::EE;
}

// displayed second-order correction of the error-reduced expansions
Real reduced_correction(FamilyKind fam, const Real& lam, const Real& rho, long k,
                        mpfr_prec_t work) {
  Real rk = Real::of(k).round_to(work);
  Real l = lam.round_to(work), r = rho.round_to(work);
  switch (fam) {
    case FamilyKind::ee:
      return l * (3 * r * r * l * (l - 2) - 2 * r * (l * l - 6 * l + 4) - l * l) /
             (24 * rk * rk);
    case FamilyKind::bb:
      return r * l * l * (3 * r * l - 6 * r - 8 * l + 18) / (24 * (rk - l) * (rk - l));
    case FamilyKind::be:
      return (3 * r * r * l * l * (l - 2) - 8 * r * l * (l * l - 3 * l + 1)) /
             (24 * (rk - l) * (rk - l));
    case FamilyKind::eb:
      return l * l * (3 * r * r * (l - 2) - 2 * r * (l - 3) - l - 6) /
             (24 * (rk - l) * (rk - l));
  }
  throw DomainError("reduced_correction: unknown family");
}

LambdaFamily to_lambda_family(FamilyKind fam) {
  switch (fam) {
    case FamilyKind::ee: return LambdaFamily::ee;
    case FamilyKind::bb: return LambdaFamily::bb;
    case FamilyKind::be: return LambdaFamily::be;
    case FamilyKind::eb: return LambdaFamily::eb;
  }
  return LambdaFamily::ee;
}

}  // namespace

ApproxResult family_expansion(long n, long k, FamilyKind family, int order, bool error_reduced,
                              int digits, const mpq_class& alpha) {
  if (k < 1 || k > n) throw DomainError("family_expansion: requires 1 <= k <= n");
  if (order < 0) throw DomainError("family_expansion: requires order >= 0");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  const mpfr_prec_t out = Real::bits_for(digits);
  CentralParams p = central_params(n, k, digits + 10);
  ApproxResult r;
  r.family = family_tag(family);
  r.order = order;
  r.error_reduced = error_reduced;
  r.in_validity_range = family_in_range(n, k, digits);

  if (!error_reduced) {
    Real lam_alpha = (family == FamilyKind::ee && alpha != 0)
                         ? lambda_alpha(p, Real::of(alpha, digits + 10))
                         : p.lambda;
    Real leading = (family == FamilyKind::ee && alpha != 0)
                       ? exp(-lam_alpha.round_to(work))
                       : family_leading_plain(family, p, work);
    SeriesPoly coeffs = family_coeffs(family, order + 1, family == FamilyKind::ee ? alpha : 0);
    Real acc = Real::of(1L).round_to(work);
    Real kinv = 1 / Real::of(k).round_to(work);
    Real kpow = Real::of(1L).round_to(work);
    for (int m = 1; m <= order; ++m) {
      kpow = kpow * kinv;
      const BivarPoly& cm = coeffs.coeffs[static_cast<size_t>(m)];
      if (cm.is_zero()) continue;
      acc += kpow * family_reduced_moment(family, p, cm, lam_alpha, work);
    }
    r.value = (leading * acc).round_to(out);
    Real next = family_reduced_moment(
        family, p, coeffs.coeffs[static_cast<size_t>(order + 1)], lam_alpha, work);
    r.leading_error_estimate = (leading * abs(next) * kpow * kinv).round_to(out);
    return r;
  }

  SolverConfig cfg = SolverConfig::for_digits(digits + 10);
  LambdaStar star = solve_lambda_star(p, to_lambda_family(family), cfg);
  Real lam = star.value.round_to(work);
  Real rk = Real::of(k).round_to(work);
  Real leading = (family == FamilyKind::ee || family == FamilyKind::eb)
                     ? exp(-lam)
                     : exp(rk * log1p(-lam / rk));
  Real corr = reduced_correction(family, lam, p.rho, k, work);
  Real acc = Real::of(1L).round_to(work);
  if (order >= 2) acc -= corr;
  r.value = (leading * acc).round_to(out);
  if (order >= 2) {
    // no closed form for the next term; scale the included one down by the
    // expansion's per-order ratio
    r.leading_error_estimate =
        (leading * abs(corr) * p.rho.round_to(work) * (1 + lam) / rk).round_to(out);
  } else {
    r.leading_error_estimate = (leading * abs(corr)).round_to(out);
  }
  return r;
}

ApproxResult menon_expansion(long n, long k, int digits) {
  if (k < 1 || k > n) throw DomainError("menon_expansion: requires 1 <= k <= n");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  CentralParams p = central_params(n, k, digits + 10);
  Real le = p.lambda_e_prime.round_to(work);
  Real rk = Real::of(k).round_to(work);
  Real corr = le * (le - 1) / (rk * rk) * (Real::of(n + k).round_to(work) / 2 - Real::of(mpq_class(1, 4)).round_to(work));
  ApproxResult r;
  r.family = Family::MENON;
  r.order = 1;
  Real leading = exp(-le);
  r.value = (leading * (1 - corr)).round_to(Real::bits_for(digits));
  r.leading_error_estimate =
      (leading * abs(corr) * p.rho.round_to(work) * (1 + le) / rk).round_to(Real::bits_for(digits));
  r.in_validity_range = family_in_range(n, k, digits);
  return r;
}

ApproxResult menon_reduced(long n, long k, int digits) {
  if (k < 1 || k > n) throw DomainError("menon_reduced: requires 1 <= k <= n");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  CentralParams p = central_params(n, k, digits + 10);
  SolverConfig cfg = SolverConfig::for_digits(digits + 10);
  LambdaStar star = solve_lambda_star(p, LambdaFamily::hat, cfg);
  Real lam = star.value.round_to(work);
  Real rk = Real::of(k).round_to(work);
  Real rho = p.rho.round_to(work);
  ApproxResult r;
  r.family = Family::MENON;
  r.order = 0;
  r.error_reduced = true;
  r.value = exp(-lam).round_to(Real::bits_for(digits));
  // paper's remainder order: k^{-3} rho^3 (lam + lam^4)
  r.leading_error_estimate =
      (r.value.round_to(work) * pow(rho / rk, 3L) * (lam + pow(lam, 4L)))
          .round_to(Real::bits_for(digits));
  r.in_validity_range = family_in_range(n, k, digits);
  return r;
}

ApproxResult saddle_corollary(long n, long k, long m, SaddleForm form, int digits) {
  if (k < 1 || k > n) throw DomainError("saddle_corollary: requires 1 <= k <= n");
  if (form != SaddleForm::small_k && m < 2)
    throw DomainError("saddle_corollary: requires m >= 2 for the log-range forms");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  const mpfr_prec_t out = Real::bits_for(digits);
  ApproxResult r;
  r.order = static_cast<int>(m);
  Real rn = Real::of(n).round_to(work);
  Real rk = Real::of(k).round_to(work);
  Real ln = log(rn);

  if (form == SaddleForm::rho_form) {
    r.family = Family::SADDLE_RHO;
    Real rho_star = Real::of(mpq_class(n + 1, k)).round_to(work);
    Real e1 = exp(-rho_star);
    Real sum(work);
    Real eh = Real::of(1L).round_to(work);
    for (long h = 0; h + 3 <= m; ++h) {
      if (h > 0) eh = eh * e1;
      sum += j_poly(h).eval(rho_star) * eh;
    }
    Real expo = rk * log1p(-e1) - Real::of(n + 1).round_to(work) * e1 * e1 / 2 * sum;
    r.value = exp(expo).round_to(out);
    Real est = rho_star * e1 +
               rk * pow(rho_star, m - 1) * exp(-Real::of(m).round_to(work) * rho_star) + 1 / rn;
    r.leading_error_estimate = (abs(r.value.round_to(work)) * est).round_to(out);
    // k <= m n/(log n + (m-2) log log n + 1)
    r.in_validity_range = (rk * (ln + (m - 2) * log(ln) + 1) <= m * rn);
    return r;
  }

  SolverConfig cfg = SolverConfig::for_digits(digits + 10);
  SaddleSolution sol = solve_saddle(n, k, cfg, digits + 10);
  Real R = sol.R.round_to(work);
  Real eR = exp(-R);
  if (form == SaddleForm::small_k) {
    r.family = Family::SADDLE_SMALLK;
    r.order = 0;
    Real expo = Real::of(k - n).round_to(work) * log1p(-eR) - rn * eR;
    r.value = exp(expo).round_to(out);
    r.leading_error_estimate =
        (abs(r.value.round_to(work)) * (R * eR + 1 / rn)).round_to(out);
    r.in_validity_range = (2 * k <= n);  // k = o(n) realized as rho >= 2
    return r;
  }

  r.family = Family::SADDLE_MLOGN;
  Real sum(work);
  for (long l = 2; l < m; ++l) sum += exp(-Real::of(l).round_to(work) * R) / l;
  Real expo = rk * log1p(-eR) + rn * sum;
  r.value = exp(expo).round_to(out);
  Real est = R * eR + rn * exp(-Real::of(m).round_to(work) * R) + 1 / rn;
  r.leading_error_estimate = (abs(r.value.round_to(work)) * est).round_to(out);
  r.in_validity_range = (rk * (ln + 1) <= m * rn);
  return r;
}

Real family_first_error_poly(FamilyKind family, const Real& rho, const Real& lam) {
  const Real& r = rho;
  const Real& l = lam;
  Real common = 3 * r * r * l * (l - 2);
  switch (family) {
    case FamilyKind::ee: return common - 2 * r * (l * l - 6 * l + 4) - l * l;
    case FamilyKind::eb: return common - 2 * r * (l * l - 3 * l) - l * (l + 6);
    case FamilyKind::bb: return common + 2 * r * (2 * l * l + 3 * l);
    case FamilyKind::be: return common + 2 * r * (2 * l * l + 6 * l - 4);
  }
  throw DomainError("family_first_error_poly: unknown family");
}

Real pc_truncation(long n, long k, long N, int digits) {
  if (N < 0) throw DomainError("pc_truncation: requires N >= 0");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  CentralParams p = central_params(n, k, digits + 10);
  auto tau = tau_values(N, n);
  Real acc = Real::of(1L).round_to(work);
  Nat denom(1);
  for (long m = 2; m <= N; ++m) {
    denom = factorial(m) * pow_nat(k, m);
    if (tau[static_cast<size_t>(m)] == 0) continue;
    acc += Real::of(tau[static_cast<size_t>(m)]).round_to(work) / denom *
           qbar(p, m).round_to(work);
  }
  return (bino_exp_leading(n, k, work) * acc).round_to(Real::bits_for(digits));
}

Real ee_fixed_n_truncation(long n, long k, long N, int digits) {
  if (N < 0) throw DomainError("ee_fixed_n_truncation: requires N >= 0");
  const mpfr_prec_t work = Real::bits_for(digits) + 48;
  // a_m(j): prod_{1<=l<j}(1-lt) = exp(-sum_r t^r P_r(j)/r)
  SeriesPoly log_a;
  log_a.order = static_cast<int>(N);
  log_a.coeffs.resize(static_cast<size_t>(N) + 1);
  for (long rr = 1; rr <= N; ++rr) {
    BivarPoly lr;
    UnivarPoly pr = power_sum_poly(rr);
    for (long i = 0; i <= pr.degree(); ++i) {
      mpq_class c = -pr.coeffs[static_cast<size_t>(i)] / rr;
      c.canonicalize();
      lr += BivarPoly::monomial(static_cast<int>(i), 0, c);
    }
    log_a.coeffs[static_cast<size_t>(rr)] = lr;
  }
  SeriesPoly a = series_exp(log_a);
  auto tau = tau_values(N, n);
  Real lam = lambda_of(n, k, work);
  Real acc(work);
  Real kinv = 1 / Real::of(k).round_to(work);
  Real kpow = Real::of(1L).round_to(work);
  for (long s = 0; s <= N; ++s) {
    if (s > 0) kpow = kpow * kinv;
    // c_s(n, j) = sum_{m+l=s} a_m(j) tau_l(n)/l! j^l
    UnivarPoly cs;
    for (long l = 0; l <= s; ++l) {
      if (tau[static_cast<size_t>(l)] == 0) continue;
      UnivarPoly am = a.coeffs[static_cast<size_t>(s - l)].substitute_w(0);
      if (am.coeffs.empty()) continue;
      mpq_class scale(tau[static_cast<size_t>(l)]);
      scale /= factorial(l);
      // shift by j^l and accumulate
      if (cs.degree() < am.degree() + l)
        cs.coeffs.resize(static_cast<size_t>(am.degree() + l) + 1, mpq_class(0));
      for (long i = 0; i <= am.degree(); ++i)
        cs.coeffs[static_cast<size_t>(i + l)] += am.coeffs[static_cast<size_t>(i)] * scale;
    }
    cs.trim();
    if (cs.coeffs.empty()) continue;
    acc += kpow * alternating_moment_poisson(cs, lam).round_to(work);
  }
  return acc.round_to(Real::bits_for(digits));
}

}  // namespace stir2
