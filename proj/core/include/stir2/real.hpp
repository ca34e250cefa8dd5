#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace stir2 {

/// Radix-independent floating value with an explicit working precision,
/// expressed in decimal digits. Arithmetic is correctly rounded (MPFR);
/// binary operations produce results at the wider operand precision.
class Real {
 public:
  static constexpr int kDefaultDigits = 50;
  static constexpr int kMinDigits = 15;

  // bits needed for `digits` decimal digits, plus guard bits
  static mpfr_prec_t bits_for(int digits);

  Real();
  explicit Real(mpfr_prec_t bits);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  static Real of(long v, int digits = kDefaultDigits);
  static Real of(double v, int digits = kDefaultDigits);
  static Real of(const mpz_class& v, int digits = kDefaultDigits);
  static Real of(const mpq_class& v, int digits = kDefaultDigits);
  static Real parse(const std::string& s, int digits = kDefaultDigits);
  static Real nan(int digits = kDefaultDigits);
  static Real pi(int digits = kDefaultDigits);

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  long floor_long() const { return mpfr_get_si(v_, MPFR_RNDD); }
  // exact conversion: every finite value is m * 2^e
  mpq_class to_rational_exact() const;

  // deterministic scientific form with `sig` significant digits: d.dd…e±XX
  std::string str(int sig) const;

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend Real operator+(const Real& a, long b);
  friend Real operator-(const Real& a, long b);
  friend Real operator*(const Real& a, long b);
  friend Real operator/(const Real& a, long b);
  friend Real operator+(long a, const Real& b);
  friend Real operator-(long a, const Real& b);
  friend Real operator*(long a, const Real& b);
  friend Real operator/(long a, const Real& b);

  friend Real operator*(const Real& a, const mpz_class& b);
  friend Real operator/(const Real& a, const mpz_class& b);

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.v_, b.v_); }

  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }

  friend Real exp(const Real& a);
  friend Real expm1(const Real& a);
  friend Real log(const Real& a);
  friend Real log1p(const Real& a);
  friend Real sqrt(const Real& a);
  friend Real abs(const Real& a);
  friend Real pow(const Real& base, long e);
  friend Real pow(const Real& base, const Real& e);
  friend Real erfc(const Real& a);
  friend Real max(const Real& a, const Real& b);
  friend Real min(const Real& a, const Real& b);

  // value at a possibly different precision (rounded)
  Real round_to(mpfr_prec_t bits) const;

 private:
  mpfr_t v_;
};

// 10^e at the given working precision (e may be negative)
Real pow10(long e, int digits = Real::kDefaultDigits);

}  // namespace stir2
