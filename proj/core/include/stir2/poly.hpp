#pragma once

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

#include "stir2/params.hpp"
#include "stir2/real.hpp"

namespace stir2 {

/// Dense univariate polynomial with exact rational coefficients,
/// coeffs[i] = coefficient of x^i.
struct UnivarPoly {
  std::vector<mpq_class> coeffs;

  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
  void trim();
  mpq_class eval_q(const mpq_class& x) const;
  mpz_class eval_z(const mpz_class& x) const;  // requires integer coefficients
  Real eval(const Real& x) const;
};

/// Finitely supported polynomial in (j, w) with exact rational coefficients.
class BivarPoly {
 public:
  static BivarPoly zero() { return BivarPoly(); }
  static BivarPoly constant(const mpq_class& c);
  static BivarPoly monomial(int deg_j, int deg_w, const mpq_class& c);

  bool is_zero() const { return terms_.empty(); }
  int deg_j() const;
  int deg_w() const;
  mpq_class coeff(int deg_j, int deg_w) const;

  BivarPoly& operator+=(const BivarPoly& o);
  BivarPoly& operator-=(const BivarPoly& o);
  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);
  BivarPoly scaled(const mpq_class& c) const;

  // substitute a rational value for w; result is a polynomial in j
  UnivarPoly substitute_w(const mpq_class& w) const;
  Real eval(const Real& j, const Real& w) const;

  const std::map<std::pair<int, int>, mpq_class>& terms() const { return terms_; }

 private:
  void add_term(int dj, int dw, const mpq_class& c);
  // key = (deg_j, deg_w); zero coefficients are never stored
  std::map<std::pair<int, int>, mpq_class> terms_;
};

/// Truncated power series in t with BivarPoly coefficients; coeffs[m] is the
/// coefficient of t^m.
struct SeriesPoly {
  int order = 0;
  std::vector<BivarPoly> coeffs;
};

// exp of a series with zero constant term, truncated at the input's order
SeriesPoly series_exp(const SeriesPoly& log_series);

// Bernoulli number B_i (B_1 = -1/2), exact
mpq_class bernoulli(long i);

// P_r(j) = sum_{l=0}^{j-1} l^r as a polynomial in j (degree r+1); used for
// log prod_{1<=l<j}(1-lt) = -sum_r t^r/r P_r(j)
UnivarPoly power_sum_poly(long r);

// tau_m(n): Taylor coefficients of (e^x(1-x))^n, tau_m = m! [x^m];
// recurrence tau_m = (m-1)(tau_{m-1} - n tau_{m-2})
UnivarPoly tau_poly(long m);

// tau_0(n)..tau_{m_max}(n) evaluated exactly at integer n
std::vector<mpz_class> tau_values(long m_max, long n);

// J_h(z) = 2 sum_{0<=l<=h} (h+2)^{l-1} (h+1-l)/(l+1)! z^l, degree h
UnivarPoly j_poly(long h);

enum class FamilyKind { bb, be, ee, eb };

/// Exact coefficient polynomials c_m(j, w) of the four formal families,
/// generated by log-then-exp truncated series arithmetic. `alpha` applies to
/// the ee family only (exact rational; callers convert floats exactly).
SeriesPoly family_coeffs(FamilyKind family, int m_max, const mpq_class& alpha = 0);

const char* family_kind_name(FamilyKind f);

// ---- alternating-moment reductions ------------------------------------

// sum_{0<=j<=k} C(k,j) (-x)^j p(j), reduced through falling factorials to
// (1-x)^k sum_l q_l C(k,l) l! (-x/(1-x))^l with q_l = sum_m p_m S2{m,l}
Real alternating_moment_binomial(const UnivarPoly& p, long k, const Real& x);

// sum_{j>=0} (-lam)^j/j! p(j) = e^{-lam} sum_l q_l (-lam)^l
Real alternating_moment_poisson(const UnivarPoly& p, const Real& lam);

// the sums above without their leading (1-x)^k resp. e^{-lam} factor
Real alternating_moment_binomial_reduced(const UnivarPoly& p, long k, const Real& x);
Real alternating_moment_poisson_reduced(const UnivarPoly& p, const Real& lam);

enum class MomentKind { binomial, poisson };

/// Spec-facing wrapper: substitutes w = n/k exactly and uses x = lambda/k
/// (binomial) or lambda (poisson) from the given parameters.
Real alternating_moment(MomentKind kind, const CentralParams& p, const BivarPoly& poly);

// Stirling numbers of the second kind S2{m, 0..min(m,l_max)} as one row
std::vector<mpz_class> stirling2_row_capped(long m, long l_max);

}  // namespace stir2
