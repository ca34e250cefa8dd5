#pragma once

#include <gmpxx.h>

#include <vector>

namespace stir2 {

using Nat = mpz_class;  // arbitrary-precision nonnegative integer
using Rat = mpq_class;  // arbitrary-precision rational, canonical form

Nat binom(long n, long k);
Nat factorial(long n);
Nat pow_nat(long base, long e);

/// Stored triangle of Stirling partition numbers for 0 <= k <= n <= n_max.
/// Immutable after construction; rows are safe to share across threads.
class StirlingTriangle {
 public:
  // default memory budget; larger requests raise ResourceLimitError
  static constexpr long kMaxRows = 5000;

  explicit StirlingTriangle(long n_max);

  long n_max() const { return static_cast<long>(rows_.size()) - 1; }
  // 0 for k < 0 or k > n
  const Nat& at(long n, long k) const;
  const std::vector<Nat>& row(long n) const { return rows_.at(static_cast<size_t>(n)); }
  Nat bell(long n) const;

 private:
  std::vector<std::vector<Nat>> rows_;
  Nat zero_;
};

// Sieve-formula numerator: sum_{0<=j<=k} C(k,j) (-1)^j (k-j)^n. Nonnegative.
Nat sieve_numerator(long n, long k);

// Stirling{n}{k}, sieve route. Degenerate conventions: {0,0}=1, {n,0}=0 for
// n>=1, {n}{k}=0 for k>n.
Nat stirling2(long n, long k);

// S(n,k) = Stirling{n}{k} k!/k^n, exactly. Requires 1 <= k <= n.
Rat normalized_s(long n, long k);

// Row n of the triangle by a streaming pass (only one row kept in memory).
std::vector<Nat> stirling_row(long n);

// B_0..B_{n_max} via streaming row sums.
std::vector<Nat> bell_numbers(long n_max);

struct SieveProfile {
  long n = 0, k = 0;
  std::vector<Rat> terms;         // b_{n,k}(j), j = 0..k
  std::vector<Rat> partial_sums;  // sum_{l<=j} (-1)^l b(l)
  long j_star = 0;                // index of the maximal term
  Rat total;                      // S(n,k)
};

SieveProfile sieve_profile(long n, long k);

// Exact probability that n stages of s simultaneous draws cover all k coupon
// types. Requires n >= 0, k >= 1, 1 <= s <= k.
Rat coupon_covered(long n, long k, long s);

// E(X_n^m) (raw) or E((X_n - E X_n)^m) (centered) under the uniform
// set-partition distribution, exactly. Requires n >= 1, m >= 0.
Rat exact_moment(long n, long m, bool centered);
Rat exact_moment(const std::vector<Nat>& row_n, long m, bool centered);

}  // namespace stir2
