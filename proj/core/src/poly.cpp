#include "stir2/poly.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

#include "stir2/errors.hpp"
#include "stir2/exact.hpp"

namespace stir2 {

void UnivarPoly::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

mpq_class UnivarPoly::eval_q(const mpq_class& x) const {
  mpq_class acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpz_class UnivarPoly::eval_z(const mpz_class& x) const {
  mpz_class acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= x;
    if (it->get_den() != 1) throw DomainError("eval_z: non-integer coefficient");
    acc += it->get_num();
  }
  return acc;
}

Real UnivarPoly::eval(const Real& x) const {
  Real acc = Real(x.prec());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * x + Real::of(*it).round_to(x.prec());
  return acc;
}

BivarPoly BivarPoly::constant(const mpq_class& c) { return monomial(0, 0, c); }

BivarPoly BivarPoly::monomial(int deg_j, int deg_w, const mpq_class& c) {
  BivarPoly p;
  p.add_term(deg_j, deg_w, c);
  return p;
}

int BivarPoly::deg_j() const {
  int d = -1;
  for (const auto& [key, c] : terms_)
    if (key.first > d) d = key.first;
  return d;
}

int BivarPoly::deg_w() const {
  int d = -1;
  for (const auto& [key, c] : terms_)
    if (key.second > d) d = key.second;
  return d;
}

mpq_class BivarPoly::coeff(int dj, int dw) const {
  auto it = terms_.find({dj, dw});
  return it == terms_.end() ? mpq_class(0) : it->second;
}

void BivarPoly::add_term(int dj, int dw, const mpq_class& c) {
  if (c == 0) return;
  auto key = std::make_pair(dj, dw);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
  return *this;
}

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_)
      r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

BivarPoly BivarPoly::scaled(const mpq_class& c) const {
  BivarPoly r;
  if (c == 0) return r;
  for (const auto& [key, v] : terms_) r.terms_.emplace(key, v * c);
  return r;
}

UnivarPoly BivarPoly::substitute_w(const mpq_class& w) const {
  UnivarPoly p;
  for (const auto& [key, c] : terms_) {
    auto [dj, dw] = key;
    if (p.degree() < dj) p.coeffs.resize(static_cast<size_t>(dj) + 1, mpq_class(0));
    mpq_class wp(1);
    for (int i = 0; i < dw; ++i) wp *= w;
    p.coeffs[static_cast<size_t>(dj)] += c * wp;
  }
  p.trim();
  return p;
}

Real BivarPoly::eval(const Real& j, const Real& w) const {
  Real acc(j.prec());
  for (const auto& [key, c] : terms_) {
    Real t = Real::of(c).round_to(j.prec());
    t = t * pow(j, static_cast<long>(key.first)) * pow(w, static_cast<long>(key.second));
    acc += t;
  }
  return acc;
}

SeriesPoly series_exp(const SeriesPoly& log_series) {
  if (!log_series.coeffs.empty() && !log_series.coeffs[0].is_zero())
    throw DomainError("series_exp: constant term must vanish");
  SeriesPoly e;
  e.order = log_series.order;
  e.coeffs.resize(static_cast<size_t>(e.order) + 1);
  e.coeffs[0] = BivarPoly::constant(1);
  // E' = L' E  =>  m E_m = sum_{r=1..m} r L_r E_{m-r}
  for (int m = 1; m <= e.order; ++m) {
    BivarPoly acc;
    for (int r = 1; r <= m; ++r) {
      if (static_cast<size_t>(r) >= log_series.coeffs.size()) break;
      const BivarPoly& lr = log_series.coeffs[static_cast<size_t>(r)];
      if (lr.is_zero()) continue;
      acc += (lr * e.coeffs[static_cast<size_t>(m - r)]).scaled(mpq_class(r));
    }
    e.coeffs[static_cast<size_t>(m)] = acc.scaled(mpq_class(1, m));
  }
  return e;
}

mpq_class bernoulli(long i) {
  static std::vector<mpq_class> cache = {mpq_class(1)};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<long>(cache.size()) <= i) {
    long m = static_cast<long>(cache.size());
    // sum_{j=0}^{m} C(m+1,j) B_j = 0
    mpq_class acc(0);
    for (long j = 0; j < m; ++j) acc += mpq_class(binom(m + 1, j)) * cache[static_cast<size_t>(j)];
    mpq_class b = -acc / mpq_class(binom(m + 1, m));
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[static_cast<size_t>(i)];
}

UnivarPoly power_sum_poly(long r) {
  if (r < 1) throw DomainError("power_sum_poly: requires r >= 1");
  // sum_{l=0}^{j-1} l^r = 1/(r+1) sum_{i=0}^{r} C(r+1,i) B_i j^{r+1-i}
  UnivarPoly p;
  p.coeffs.assign(static_cast<size_t>(r) + 2, mpq_class(0));
  for (long i = 0; i <= r; ++i) {
    mpq_class c = mpq_class(binom(r + 1, i)) * bernoulli(i) / mpq_class(r + 1);
    c.canonicalize();
    p.coeffs[static_cast<size_t>(r + 1 - i)] += c;
  }
  p.trim();
  return p;
}

UnivarPoly tau_poly(long m) {
  if (m < 0) throw DomainError("tau_poly: requires m >= 0");
  static std::vector<UnivarPoly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (cache.empty()) {
    cache.push_back(UnivarPoly{{mpq_class(1)}});  // tau_0 = 1
    cache.push_back(UnivarPoly{{}});              // tau_1 = 0
  }
  while (static_cast<long>(cache.size()) <= m) {
    long mm = static_cast<long>(cache.size());
    const UnivarPoly& t1 = cache[static_cast<size_t>(mm - 1)];
    const UnivarPoly& t2 = cache[static_cast<size_t>(mm - 2)];
    // tau_m = (m-1)(tau_{m-1} - n tau_{m-2})
    UnivarPoly t;
    t.coeffs.assign(static_cast<size_t>(std::max(t1.degree(), t2.degree() + 1)) + 1, mpq_class(0));
    for (long i = 0; i <= t1.degree(); ++i)
      t.coeffs[static_cast<size_t>(i)] += mpq_class(mm - 1) * t1.coeffs[static_cast<size_t>(i)];
    for (long i = 0; i <= t2.degree(); ++i)
      t.coeffs[static_cast<size_t>(i + 1)] -= mpq_class(mm - 1) * t2.coeffs[static_cast<size_t>(i)];
    t.trim();
    cache.push_back(std::move(t));
  }
  return cache[static_cast<size_t>(m)];
}

std::vector<mpz_class> tau_values(long m_max, long n) {
  if (m_max < 0) throw DomainError("tau_values: requires m_max >= 0");
  std::vector<mpz_class> v(static_cast<size_t>(m_max) + 1);
  v[0] = 1;
  if (m_max >= 1) v[1] = 0;
  for (long m = 2; m <= m_max; ++m)
    v[static_cast<size_t>(m)] =
        (m - 1) * (v[static_cast<size_t>(m - 1)] - n * v[static_cast<size_t>(m - 2)]);
  return v;
}

UnivarPoly j_poly(long h) {
  if (h < 0) throw DomainError("j_poly: requires h >= 0");
  UnivarPoly p;
  p.coeffs.assign(static_cast<size_t>(h) + 1, mpq_class(0));
  for (long l = 0; l <= h; ++l) {
    // 2 (h+2)^{l-1} (h+1-l) / (l+1)!
    mpq_class c(2 * (h + 1 - l), 1);
    if (l == 0) {
      c /= (h + 2);
    } else {
      mpz_class pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(h + 2),
                    static_cast<unsigned long>(l - 1));
      c *= pw;
    }
    c /= factorial(l + 1);
    c.canonicalize();
    p.coeffs[static_cast<size_t>(l)] = c;
  }
  p.trim();
  return p;
}

const char* family_kind_name(FamilyKind f) {
  switch (f) {
    case FamilyKind::bb: return "bb";
    case FamilyKind::be: return "be";
    case FamilyKind::ee: return "ee";
    case FamilyKind::eb: return "eb";
  }
  return "?";
}

namespace {

// log-series of the family's defining ratio, coefficients of t^1..t^{m_max}
SeriesPoly family_log_series(FamilyKind family, int m_max, const mpq_class& alpha) {
  SeriesPoly log_s;
  log_s.order = m_max;
  log_s.coeffs.resize(static_cast<size_t>(m_max) + 1);
  const bool keeps_j_term = (family == FamilyKind::bb || family == FamilyKind::eb);
  for (int r = 1; r <= m_max; ++r) {
    BivarPoly lr;
    // (w/t) log(1-jt) [+ jw for e^{jw} families]:
    //   -w j^{r+1}/(r+1), plus +w j/(r+1) when divided by (1-t)^{jw/t}
    lr += BivarPoly::monomial(r + 1, 1, mpq_class(-1, r + 1));
    if (keeps_j_term) lr += BivarPoly::monomial(1, 1, mpq_class(1, r + 1));
    if (family == FamilyKind::ee || family == FamilyKind::eb) {
      // log prod_{1<=l<j}(1-lt) contributes -P_r(j)/r
      UnivarPoly pr = power_sum_poly(r);
      for (long i = 0; i <= pr.degree(); ++i) {
        mpq_class c = -pr.coeffs[static_cast<size_t>(i)] / r;
        c.canonicalize();
        lr += BivarPoly::monomial(static_cast<int>(i), 0, c);
      }
    }
    if (family == FamilyKind::ee && r == 1 && alpha != 0)
      lr += BivarPoly::monomial(1, 0, alpha);
    log_s.coeffs[static_cast<size_t>(r)] = lr;
  }
  return log_s;
}

}  // namespace

SeriesPoly family_coeffs(FamilyKind family, int m_max, const mpq_class& alpha) {
  if (m_max < 0) throw DomainError("family_coeffs: requires m_max >= 0");
  if (alpha != 0 && family != FamilyKind::ee)
    throw DomainError("family_coeffs: alpha applies to the ee family only");
  using Key = std::tuple<int, int, std::string>;
  static std::map<Key, SeriesPoly> cache;
  static std::mutex mu;
  Key key{static_cast<int>(family), m_max, alpha.get_str()};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  SeriesPoly s = series_exp(family_log_series(family, m_max, alpha));
  cache.emplace(key, s);
  return s;
}

namespace {

// q_l = sum_m p_m S2{m,l} for l = 0..min(deg, l_cap)
std::vector<mpq_class> falling_factorial_coeffs(const UnivarPoly& p, long l_cap) {
  long deg = p.degree();
  if (deg < 0) return {};
  long lmax = std::min(deg, l_cap);
  std::vector<mpq_class> q(static_cast<size_t>(lmax) + 1, mpq_class(0));
  // row recurrence over m with columns capped at lmax
  std::vector<mpz_class> row = {mpz_class(1)};  // S2{0,0}
  if (p.coeffs[0] != 0) q[0] += p.coeffs[0];
  for (long m = 1; m <= deg; ++m) {
    long cols = std::min(m, lmax);
    std::vector<mpz_class> next(static_cast<size_t>(cols) + 1);
    next[0] = 0;
    for (long l = 1; l <= cols; ++l) {
      mpz_class v = (static_cast<long>(row.size()) > l) ? l * row[static_cast<size_t>(l)]
                                                        : mpz_class(0);
      if (l - 1 < static_cast<long>(row.size())) v += row[static_cast<size_t>(l - 1)];
      next[static_cast<size_t>(l)] = v;
    }
    row = std::move(next);
    const mpq_class& pm = p.coeffs[static_cast<size_t>(m)];
    if (pm != 0)
      for (long l = 0; l < static_cast<long>(row.size()); ++l)
        q[static_cast<size_t>(l)] += pm * row[static_cast<size_t>(l)];
  }
  return q;
}

}  // namespace

std::vector<mpz_class> stirling2_row_capped(long m, long l_max) {
  std::vector<mpz_class> row = {mpz_class(1)};
  for (long mm = 1; mm <= m; ++mm) {
    long cols = std::min(mm, l_max);
    std::vector<mpz_class> next(static_cast<size_t>(cols) + 1);
    next[0] = 0;
    for (long l = 1; l <= cols; ++l) {
      mpz_class v = (static_cast<long>(row.size()) > l) ? l * row[static_cast<size_t>(l)]
                                                        : mpz_class(0);
      if (l - 1 < static_cast<long>(row.size())) v += row[static_cast<size_t>(l - 1)];
      next[static_cast<size_t>(l)] = v;
    }
    row = std::move(next);
  }
  return row;
}

Real alternating_moment_binomial_reduced(const UnivarPoly& p, long k, const Real& x) {
  const mpfr_prec_t work = x.prec() + 16;
  auto q = falling_factorial_coeffs(p, k);
  Real one = Real::of(1L).round_to(work);
  Real ratio = -x.round_to(work) / (one - x.round_to(work));  // -X
  Real acc(work);
  Real weight = one;  // C(k,l) l! (-X)^l
  for (long l = 0; l < static_cast<long>(q.size()); ++l) {
    if (l > 0) weight = weight * (k - l + 1) * ratio;
    if (q[static_cast<size_t>(l)] != 0)
      acc += weight * Real::of(q[static_cast<size_t>(l)]).round_to(work);
  }
  return acc;
}

Real alternating_moment_poisson_reduced(const UnivarPoly& p, const Real& lam) {
  const mpfr_prec_t work = lam.prec() + 16;
  auto q = falling_factorial_coeffs(p, p.degree());
  Real acc(work);
  Real weight = Real::of(1L).round_to(work);
  for (long l = 0; l < static_cast<long>(q.size()); ++l) {
    if (l > 0) weight = weight * (-lam.round_to(work));
    if (q[static_cast<size_t>(l)] != 0)
      acc += weight * Real::of(q[static_cast<size_t>(l)]).round_to(work);
  }
  return acc;
}

Real alternating_moment_binomial(const UnivarPoly& p, long k, const Real& x) {
  const mpfr_prec_t work = x.prec() + 16;
  Real leading = exp(Real::of(k).round_to(work) * log1p(-x.round_to(work)));
  return leading * alternating_moment_binomial_reduced(p, k, x);
}

Real alternating_moment_poisson(const UnivarPoly& p, const Real& lam) {
  return exp(-lam) * alternating_moment_poisson_reduced(p, lam);
}

Real alternating_moment(MomentKind kind, const CentralParams& p, const BivarPoly& poly) {
  UnivarPoly uni = poly.substitute_w(mpq_class(p.n, p.k));
  if (kind == MomentKind::binomial) {
    Real x = p.lambda / Real::of(p.k, p.digits);
    return alternating_moment_binomial(uni, p.k, x);
  }
  return alternating_moment_poisson(uni, p.lambda);
}

}  // namespace stir2
