#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <bit>
#include <cassert>
#include <stdexcept>
#include <vector>

namespace opiw {

// Ranks and binomial coefficients grow to k*log2(m) bits, so everything here
// runs on exact big integers.
using BigCount = boost::multiprecision::cpp_int;

// A k-combination stored largest-first: c[0] = c_k > c[1] = c_{k-1} > ... >
// c[k-1] = c_1 >= 0. With this layout colexicographic order on the sets is
// plain lexicographic order on the vectors.
using Combination = std::vector<int>;

namespace detail {

// Exact C(n, t) by the multiplicative formula; each intermediate division is
// exact because the running product is always a binomial coefficient itself.
inline BigCount binom_direct(long long n, long long t) {
  if (t < 0 || n < 0 || t > n) return 0;
  if (t > n - t) t = n - t;
  BigCount r = 1;
  for (long long i = 1; i <= t; ++i) {
    r *= (n - t + i);
    r /= i;
  }
  return r;
}

// Pascal row cache for the rank/unrank hot path. Rows are appended once and
// never mutated afterwards; warm-up is single-writer (the test and CLI
// drivers are single threaded, matching that contract).
inline const std::vector<BigCount> &pascal_row(int n) {
  static std::vector<std::vector<BigCount>> rows;
  while ((int)rows.size() <= n) {
    int r = (int)rows.size();
    std::vector<BigCount> row(r + 1, 1);
    for (int t = 1; t < r; ++t) row[t] = rows[r - 1][t - 1] + rows[r - 1][t];
    rows.push_back(std::move(row));
  }
  return rows[n];
}

}  // namespace detail

// Reference stays valid as the cache grows: appending rows moves the inner
// vectors but never their element storage.
inline const BigCount &binom(int n, int t) {
  static const BigCount zero = 0;
  if (t < 0 || n < 0 || t > n) return zero;
  return detail::pascal_row(n)[t];
}

// Colexicographic rank r = sum_j C(c_j, j) over digits j = k..1.
inline BigCount comb_rank(const Combination &c) {
  int k = (int)c.size();
  for (int i = 0; i + 1 < k; ++i)
    if (c[i] <= c[i + 1]) throw std::invalid_argument("comb_rank: digits must strictly decrease");
  if (k > 0 && c[k - 1] < 0) throw std::invalid_argument("comb_rank: digits must be nonnegative");
  BigCount r = 0;
  for (int i = 0; i < k; ++i) r += binom(c[i], k - i);
  return r;
}

namespace detail {

inline void unrank_check_range(int m, int k, const BigCount &r) {
  if (m < 0 || k < 0) throw std::out_of_range("unrank: m and k must be nonnegative");
  if (r < 0 || r >= binom(m, k)) throw std::out_of_range("unrank: rank out of range");
}

}  // namespace detail

// Digit-by-digit unranking: c_j is the largest value with C(c_j, j) <= r,
// found by building c_j from its most significant bit down. No explicit
// upper bound per digit is needed beyond the first: after subtracting
// C(c_j, j) the residual is < C(c_j, j-1), which pins the next digit below
// the current one.
inline Combination comb_unrank_greedy(int m, int k, BigCount r) {
  detail::unrank_check_range(m, k, r);
  Combination out;
  out.reserve(k);
  int width = m > 1 ? std::bit_width((unsigned)(m - 1)) : 1;
  for (int j = k; j >= 1; --j) {
    int c = 0;
    for (int bit = 1 << (width - 1); bit > 0; bit >>= 1) {
      int cand = c | bit;
      if (cand <= m - 1 && binom(cand, j) <= r) c = cand;
    }
    assert(out.empty() || c < out.back());
    r -= binom(c, j);
    out.push_back(c);
  }
  assert(r == 0);
  return out;
}

namespace detail {

// Range-halving unranking. The interval [lo, hi) is visited upper half
// first, carrying (j, r) through, so digits come out in decreasing order
// exactly as in the greedy scan. Two prunes cut whole subtrees: no digits
// remain, or r < C(lo, j) (equivalent to c_j < lo, so the interval holds
// nothing). At a singleton that survives the prune the element is taken:
// C(lo, j) <= r and c_j < lo + 1 force c_j = lo.
inline void dc_place(int lo, int hi, int &j, BigCount &r, Combination &out) {
  if (j == 0) return;
  if (r < binom(lo, j)) return;
  if (hi - lo == 1) {
    r -= binom(lo, j);
    out.push_back(lo);
    --j;
    return;
  }
  int mid = lo + (hi - lo) / 2;
  dc_place(mid, hi, j, r, out);
  dc_place(lo, mid, j, r, out);
}

}  // namespace detail

inline Combination comb_unrank_dc(int m, int k, BigCount r) {
  detail::unrank_check_range(m, k, r);
  Combination out;
  out.reserve(k);
  int j = k;
  detail::dc_place(0, m, j, r, out);
  assert(j == 0 && r == 0);
  return out;
}

// PS(x) = sum_{i<x} C(m1, i) * C(m2, k-i), evaluated by binary splitting of
// the term ratio R(i) = (m1-i)(k-i) / ((i+1)(m2-k+i+1)). The split state
// (P, Q, T) over an index window satisfies T/Q = sum of the cumulative ratio
// products and P = product of the numerators, merged as a balanced tree so
// big-integer multiplications stay near the root.
namespace detail {

struct SplitPQT {
  BigCount P, Q, T;
};

inline SplitPQT ps_split(long long m1, long long m2, long long k, long long a, long long b) {
  if (b - a == 1) {
    BigCount p = BigCount(m1 - a) * (k - a);
    BigCount q = BigCount(a + 1) * (m2 - k + a + 1);
    return {p, q, q};
  }
  long long mid = a + (b - a) / 2;
  SplitPQT l = ps_split(m1, m2, k, a, mid);
  SplitPQT r = ps_split(m1, m2, k, mid, b);
  return {l.P * r.P, l.Q * r.Q, l.T * r.Q + l.P * r.T};
}

}  // namespace detail

inline BigCount hypergeometric_prefix_sum(long long m1, long long m2, long long k, long long x) {
  if (m1 < 0 || m2 < 0 || k < 0) throw std::invalid_argument("hypergeometric_prefix_sum: negative parameter");
  if (x < 0 || x > k + 1) throw std::invalid_argument("hypergeometric_prefix_sum: x outside [0, k+1]");
  // The distribution's support is [max(0, k-m2), min(k, m1)]; terms outside
  // are zero and the ratio recurrence is only run inside it, where every
  // denominator (i+1)(m2-k+i+1) is strictly positive.
  long long i0 = k > m2 ? k - m2 : 0;
  long long i1 = k < m1 ? k : m1;
  long long xe = x < i1 + 1 ? x : i1 + 1;
  if (xe <= i0) return 0;
  BigCount h0 = detail::binom_direct(m1, i0) * detail::binom_direct(m2, k - i0);
  if (xe - i0 == 1) return h0;
  // T/Q over the window [i0, xe) is sum_{i in [i0, xe)} H(i)/H(i0): one
  // summand per window slot, the first being the empty product 1.
  detail::SplitPQT s = detail::ps_split(m1, m2, k, i0, xe);
  BigCount num = h0 * s.T;
  BigCount quot, rem;
  boost::multiprecision::divide_qr(num, s.Q, quot, rem);
  if (rem != 0) throw std::logic_error("hypergeometric_prefix_sum: non-exact split division");
  return quot;
}

}  // namespace opiw
