#include "stir2/exact.hpp"

#include <utility>

#include "stir2/errors.hpp"

namespace stir2 {

Nat binom(long n, long k) {
  if (k < 0 || k > n) return Nat(0);
  Nat r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Nat factorial(long n) {
  if (n < 0) throw DomainError("factorial of negative argument");
  Nat r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Nat pow_nat(long base, long e) {
  if (base < 0 || e < 0) throw DomainError("pow_nat expects nonnegative arguments");
  Nat r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

StirlingTriangle::StirlingTriangle(long n_max) : zero_(0) {
  if (n_max < 0) throw DomainError("StirlingTriangle: n_max must be >= 0");
  if (n_max > kMaxRows)
    throw ResourceLimitError("StirlingTriangle: n_max exceeds the memory budget");
  rows_.resize(static_cast<size_t>(n_max) + 1);
  rows_[0] = {Nat(1)};
  for (long n = 1; n <= n_max; ++n) {
    const auto& prev = rows_[static_cast<size_t>(n - 1)];
    auto& cur = rows_[static_cast<size_t>(n)];
    cur.resize(static_cast<size_t>(n) + 1);
    cur[0] = 0;
    for (long k = 1; k < n; ++k)
      cur[static_cast<size_t>(k)] =
          k * prev[static_cast<size_t>(k)] + prev[static_cast<size_t>(k - 1)];
    cur[static_cast<size_t>(n)] = 1;
  }
}

const Nat& StirlingTriangle::at(long n, long k) const {
  if (n < 0 || n > n_max()) throw DomainError("StirlingTriangle::at: n out of range");
  if (k < 0 || k > n) return zero_;
  return rows_[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

Nat StirlingTriangle::bell(long n) const {
  if (n < 0 || n > n_max()) throw DomainError("StirlingTriangle::bell: n out of range");
  Nat b(0);
  for (const auto& v : rows_[static_cast<size_t>(n)]) b += v;
  return b;
}

Nat sieve_numerator(long n, long k) {
  Nat acc(0), c(1);  // c = C(k,j)
  Nat term;
  for (long j = 0; j <= k; ++j) {
    if (k - j > 0) {
      mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(k - j),
                    static_cast<unsigned long>(n));
      term *= c;
    } else {
      term = (n == 0) ? c : Nat(0);  // 0^0 = 1
    }
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
    c *= (k - j);
    c /= (j + 1);
  }
  return acc;
}

Nat stirling2(long n, long k) {
  if (n < 0 || k < 0) throw DomainError("stirling2: negative argument");
  if (k > n) return Nat(0);
  if (n == 0) return Nat(1);  // k == 0 here
  if (k == 0) return Nat(0);
  Nat num = sieve_numerator(n, k);
  Nat r;
  mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), factorial(k).get_mpz_t());
  return r;
}

Rat normalized_s(long n, long k) {
  if (k < 1 || k > n) throw DomainError("normalized_s: requires 1 <= k <= n");
  Rat r(sieve_numerator(n, k), pow_nat(k, n));
  r.canonicalize();
  return r;
}

std::vector<Nat> stirling_row(long n) {
  if (n < 0) throw DomainError("stirling_row: n must be >= 0");
  std::vector<Nat> cur = {Nat(1)};
  for (long m = 1; m <= n; ++m) {
    std::vector<Nat> next(static_cast<size_t>(m) + 1);
    next[0] = 0;
    for (long k = 1; k < m; ++k)
      next[static_cast<size_t>(k)] =
          k * cur[static_cast<size_t>(k)] + cur[static_cast<size_t>(k - 1)];
    next[static_cast<size_t>(m)] = 1;
    cur = std::move(next);
  }
  return cur;
}

std::vector<Nat> bell_numbers(long n_max) {
  if (n_max < 0) throw DomainError("bell_numbers: n_max must be >= 0");
  if (n_max > StirlingTriangle::kMaxRows)
    throw ResourceLimitError("bell_numbers: n_max exceeds the memory budget");
  std::vector<Nat> bells;
  bells.reserve(static_cast<size_t>(n_max) + 1);
  bells.emplace_back(1);
  std::vector<Nat> cur = {Nat(1)};
  for (long m = 1; m <= n_max; ++m) {
    std::vector<Nat> next(static_cast<size_t>(m) + 1);
    next[0] = 0;
    Nat sum(0);
    for (long k = 1; k < m; ++k) {
      next[static_cast<size_t>(k)] =
          k * cur[static_cast<size_t>(k)] + cur[static_cast<size_t>(k - 1)];
      sum += next[static_cast<size_t>(k)];
    }
    next[static_cast<size_t>(m)] = 1;
    sum += 1;
    bells.push_back(std::move(sum));
    cur = std::move(next);
  }
  return bells;
}

SieveProfile sieve_profile(long n, long k) {
  if (k < 1 || k > n) throw DomainError("sieve_profile: requires 1 <= k <= n");
  SieveProfile p;
  p.n = n;
  p.k = k;
  Nat kn = pow_nat(k, n);
  Nat c(1);
  p.terms.reserve(static_cast<size_t>(k) + 1);
  p.partial_sums.reserve(static_cast<size_t>(k) + 1);
  Rat run(0);
  for (long j = 0; j <= k; ++j) {
    Nat num = c * pow_nat(k - j, n);
    Rat b(num, kn);
    b.canonicalize();
    if (j % 2 == 0)
      run += b;
    else
      run -= b;
    if (j > 0 && b > p.terms[static_cast<size_t>(p.j_star)]) p.j_star = j;
    p.terms.push_back(b);
    p.partial_sums.push_back(run);
    c *= (k - j);
    c /= (j + 1);
  }
  p.total = run;
  return p;
}

Rat coupon_covered(long n, long k, long s) {
  if (n < 0 || k < 1) throw DomainError("coupon_covered: requires n >= 0, k >= 1");
  if (s < 1 || s > k) throw DomainError("coupon_covered: requires 1 <= s <= k");
  Nat num(0), c(1);
  Nat pw;
  for (long j = 0; j + s <= k; ++j) {
    Nat base = binom(k - j, s);
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n));
    pw *= c;
    if (j % 2 == 0)
      num += pw;
    else
      num -= pw;
    c *= (k - j);
    c /= (j + 1);
  }
  Nat den;
  Nat cks = binom(k, s);
  mpz_pow_ui(den.get_mpz_t(), cks.get_mpz_t(), static_cast<unsigned long>(n));
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat exact_moment(const std::vector<Nat>& row_n, long m, bool centered) {
  long n = static_cast<long>(row_n.size()) - 1;
  if (n < 1) throw DomainError("exact_moment: requires n >= 1");
  if (m < 0) throw DomainError("exact_moment: requires m >= 0");
  if (m == 0) return Rat(1);
  Nat bell(0);
  for (const auto& v : row_n) bell += v;
  auto raw = [&](long i) {
    Nat acc(0);
    for (long k = 1; k <= n; ++k) acc += pow_nat(k, i) * row_n[static_cast<size_t>(k)];
    Rat r(acc, bell);
    r.canonicalize();
    return r;
  };
  if (!centered) return raw(m);
  // E(X-mu)^m = sum_i C(m,i) (-mu)^(m-i) E X^i
  Rat mu = raw(1);
  Rat acc(0);
  Rat neg_mu_pow(1);
  std::vector<Rat> raws(static_cast<size_t>(m) + 1);
  for (long i = 0; i <= m; ++i) raws[static_cast<size_t>(i)] = (i == 0) ? Rat(1) : raw(i);
  for (long i = m; i >= 0; --i) {
    Rat term(binom(m, i));
    term *= raws[static_cast<size_t>(i)];
    term *= neg_mu_pow;
    acc += term;
    neg_mu_pow *= -mu;
  }
  return acc;
}

Rat exact_moment(long n, long m, bool centered) {
  if (n < 1) throw DomainError("exact_moment: requires n >= 1");
  return exact_moment(stirling_row(n), m, centered);
}

}  // namespace stir2
