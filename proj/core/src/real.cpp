#include "stir2/real.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "stir2/errors.hpp"

namespace stir2 {

mpfr_prec_t Real::bits_for(int digits) {
  if (digits < 2) digits = 2;
  return static_cast<mpfr_prec_t>(digits * 3.3219280948873623 + 17.0);
}

Real::Real() : Real(bits_for(kDefaultDigits)) {}

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(v_, bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, o.prec());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  v_[0] = o.v_[0];
  mpfr_init2(o.v_, MPFR_PREC_MIN);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::of(long v, int digits) {
  Real r(bits_for(digits));
  mpfr_set_si(r.v_, v, MPFR_RNDN);
  return r;
}

Real Real::of(double v, int digits) {
  Real r(bits_for(digits));
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

Real Real::of(const mpz_class& v, int digits) {
  Real r(bits_for(digits));
  mpfr_set_z(r.v_, v.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real Real::of(const mpq_class& v, int digits) {
  Real r(bits_for(digits));
  mpfr_set_q(r.v_, v.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real Real::parse(const std::string& s, int digits) {
  Real r(bits_for(digits));
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw DomainError("unparseable numeric literal: " + s);
  return r;
}

Real Real::nan(int digits) {
  Real r(bits_for(digits));
  mpfr_set_nan(r.v_);
  return r;
}

Real Real::pi(int digits) {
  Real r(bits_for(digits));
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

mpq_class Real::to_rational_exact() const {
  if (is_zero()) return mpq_class(0);
  if (is_nan() || mpfr_inf_p(v_)) throw DomainError("non-finite value has no rational form");
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
  mpq_class q(m);
  if (e >= 0) {
    mpq_class two_e;
    mpz_class num(1);
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    q *= mpq_class(num);
  } else {
    mpz_class den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    q /= mpq_class(den);
  }
  q.canonicalize();
  return q;
}

std::string Real::str(int sig) const {
  if (sig < 2) sig = 2;
  if (is_nan()) return "nan";
  if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) {
    std::string out = "0.";
    out.append(static_cast<size_t>(sig - 1), '0');
    out += "e+00";
    return out;
  }
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(sig), v_, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  // mpfr convention: value = 0.digits * 10^e
  std::string out = neg ? "-" : "";
  out += digits.substr(0, 1);
  out += ".";
  out += digits.substr(1);
  long ee = static_cast<long>(e) - 1;
  out += "e";
  out += (ee < 0) ? "-" : "+";
  std::string a = std::to_string(ee < 0 ? -ee : ee);
  if (a.size() < 2) a.insert(0, "0");
  out += a;
  return out;
}

Real Real::operator-() const {
  Real r(prec());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

namespace {
mpfr_prec_t wider(const Real& a, const Real& b) {
  return a.prec() > b.prec() ? a.prec() : b.prec();
}
}  // namespace

Real& Real::operator+=(const Real& o) { return *this = *this + o; }
Real& Real::operator-=(const Real& o) { return *this = *this - o; }
Real& Real::operator*=(const Real& o) { return *this = *this * o; }
Real& Real::operator/=(const Real& o) { return *this = *this / o; }

Real operator+(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, long b) {
  Real r(a.prec());
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, long b) {
  Real r(a.prec());
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.prec());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(a.prec());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
Real operator+(long a, const Real& b) { return b + a; }
Real operator-(long a, const Real& b) {
  Real r(b.prec());
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(long a, const Real& b) { return b * a; }
Real operator/(long a, const Real& b) {
  Real r(b.prec());
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const mpz_class& b) {
  Real r(a.prec());
  mpfr_mul_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const mpz_class& b) {
  Real r(a.prec());
  mpfr_div_z(r.v_, a.v_, b.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real exp(const Real& a) {
  Real r(a.prec());
  mpfr_exp(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real expm1(const Real& a) {
  Real r(a.prec());
  mpfr_expm1(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real log(const Real& a) {
  Real r(a.prec());
  mpfr_log(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real log1p(const Real& a) {
  Real r(a.prec());
  mpfr_log1p(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real sqrt(const Real& a) {
  Real r(a.prec());
  mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real abs(const Real& a) {
  Real r(a.prec());
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real pow(const Real& base, long e) {
  Real r(base.prec());
  mpfr_pow_si(r.v_, base.v_, e, MPFR_RNDN);
  return r;
}
Real pow(const Real& base, const Real& e) {
  Real r(wider(base, e));
  mpfr_pow(r.v_, base.v_, e.v_, MPFR_RNDN);
  return r;
}
Real erfc(const Real& a) {
  Real r(a.prec());
  mpfr_erfc(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

Real Real::round_to(mpfr_prec_t bits) const {
  Real r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

Real pow10(long e, int digits) {
  Real r(Real::bits_for(digits));
  mpfr_set_si(r.raw(), 10, MPFR_RNDN);
  mpfr_pow_si(r.raw(), r.raw(), e, MPFR_RNDN);
  return r;
}

}  // namespace stir2
