#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "bent.hpp"

namespace opiw {

// Success probabilities reach ~1e-37 on the large benchmark instances, so the
// floating-point lane carries a 256-bit mantissa; counts below 257 clauses go
// through exact integer arithmetic instead.
using Real256 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Satisfaction target.

// Expected satisfied fraction (sqrt(l/m (1-r/q)) + sqrt((1-l/m) r/q))^2.
inline double semicircle_target(long long m, long long ell, long long r, long long q) {
  if (m <= 0 || ell < 0 || ell > m) throw std::invalid_argument("semicircle_target: ell range");
  if (r <= 0 || r >= q) throw std::invalid_argument("semicircle_target: need 0 < r < q");
  double lf = double(ell) / double(m);
  double rho = double(r) / double(q);
  double root = std::sqrt(lf * (1.0 - rho)) + std::sqrt((1.0 - lf) * rho);
  return root * root;
}

struct AttackTarget {
  long long m = 0, n = 0, ell = 0, r = 0, q = 0;
  int b = 0;
  double mu = 0.0;  // semicircle fraction
  long long t = 0;  // clauses to satisfy
};

// Threshold convention: ell = floor(n/2) and t = nearest integer to mu*m.
// Calibrated once against the published trial counts (all ten instances land
// exactly; ceil overshoots three of them, floor undershoots six) and frozen.
inline long long semicircle_threshold(double mu, long long m) {
  return (long long)std::floor(mu * double(m) + 0.5);
}

inline AttackTarget attack_target(long long m, long long n, int b, long long r) {
  if (b < 1 || b > 62) throw std::invalid_argument("attack_target: b range");
  if (m <= 0 || n <= 0 || n > m) throw std::invalid_argument("attack_target: need 0 < n <= m");
  AttackTarget tg;
  tg.m = m;
  tg.n = n;
  tg.b = b;
  tg.q = 1LL << b;
  tg.r = r;
  tg.ell = n / 2;
  tg.mu = semicircle_target(m, tg.ell, r, tg.q);
  tg.t = semicircle_threshold(tg.mu, m);
  if (tg.t < n || tg.t > m) throw std::domain_error("attack_target: threshold outside [n, m]");
  return tg;
}

// ---------------------------------------------------------------------------
// Prange trial counts: p(t) = sum_{s=t}^m C(m-n, s-n) (r/q)^{s-n} (1-r/q)^{m-s}.

// Exact path: the tail numerator over denominator q^{m-n}, walked from s = m
// downward. Both divisions stay exact: C(M,j) j / (M-j+1) = C(M,j-1) and the
// running power of r sheds one factor per step.
inline Real256 prange_success_prob_exact(long long m, long long n, long long r, long long q,
                                         long long t) {
  if (n < 0 || t < n || t > m) throw std::invalid_argument("prange: need n <= t <= m");
  if (r <= 0 || r >= q) throw std::invalid_argument("prange: need 0 < r < q");
  long long M = m - n;
  BigInt term = boost::multiprecision::pow(BigInt(r), unsigned(M));  // s = m
  BigInt num = term;
  for (long long s = m; s > t; --s) {
    long long j = s - n;
    term *= j;
    term *= (q - r);
    term /= (M - j + 1);
    term /= r;
    num += term;
  }
  BigInt den = boost::multiprecision::pow(BigInt(q), unsigned(M));
  return Real256(num) / Real256(den);
}

// Floating-point path: ascending term recurrence from s = t.
inline Real256 prange_success_prob_float(long long m, long long n, long long r, long long q,
                                         long long t) {
  if (n < 0 || t < n || t > m) throw std::invalid_argument("prange: need n <= t <= m");
  if (r <= 0 || r >= q) throw std::invalid_argument("prange: need 0 < r < q");
  long long M = m - n;
  BigInt c0 = 1;  // C(M, t-n)
  for (long long j = 1; j <= t - n; ++j) {
    c0 *= (M - j + 1);
    c0 /= j;
  }
  Real256 rho = Real256(r) / Real256(q);
  Real256 term = Real256(c0) * boost::multiprecision::pow(rho, unsigned(t - n)) *
                 boost::multiprecision::pow(1 - rho, unsigned(m - t));
  Real256 acc = term;
  Real256 ratio = rho / (1 - rho);
  for (long long s = t; s < m; ++s) {
    term *= ratio * Real256(m - s) / Real256(s + 1 - n);
    acc += term;
  }
  return acc;
}

inline Real256 prange_success_prob(long long m, long long n, long long r, long long q,
                                   long long t) {
  return m <= 256 ? prange_success_prob_exact(m, n, r, q, t)
                  : prange_success_prob_float(m, n, r, q, t);
}

inline Real256 prange_trials(long long m, long long n, long long r, long long q, long long t) {
  return 1 / prange_success_prob(m, n, r, q, t);
}

// Heuristic throughput of a day of Frontier: 24*3600 s at half efficiency,
// 37632 nodes * 220 threads * 4-way SIMD at 1.7 GHz, one trial per cycle.
inline double frontier_trials_per_day() {
  return 24.0 * 3600.0 * 0.5 * 37632.0 * 220.0 * 4.0 * 1.7e9;
}

// ---------------------------------------------------------------------------
// Overlap tables.

// Best fractional overlap of a codimension-s affine subspace with the twisted
// quadric target set in F2^{2k}. Matches the exhaustive affine search.
inline OverlapTable mm_overlap_table(int k) {
  if (k < 1 || k > 30) throw std::invalid_argument("mm_overlap_table: k range");
  OverlapTable P(2 * k + 1);
  P[0] = 0.5 - std::ldexp(1.0, -(k + 1));
  P[1] = 0.5;
  for (int s = 2; s <= 2 * k; ++s) P[s] = s > k ? 1.0 : 0.5 + std::ldexp(1.0, -(k - s + 2));
  return P;
}

// Decoder restricted to the whole space or single points: fraction p0 until
// all b constraints are spent, then certainty.
inline OverlapTable singleton_or_full_table(int b, double p0) {
  if (b < 1) throw std::invalid_argument("singleton_or_full_table: b range");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("singleton_or_full_table: p0 range");
  OverlapTable P(b + 1, p0);
  P[b] = 1.0;
  return P;
}

namespace detail {
inline void validate_table(const OverlapTable &P) {
  if (P.empty()) throw std::invalid_argument("overlap table: empty");
  for (std::size_t s = 0; s < P.size(); ++s) {
    if (!(P[s] >= 0.0 && P[s] <= 1.0)) throw std::invalid_argument("overlap table: range");
    if (s > 0 && P[s] < P[s - 1]) throw std::invalid_argument("overlap table: not monotone");
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Fractional relaxation: maximize sum p_s P[s] with sum p_s = 1 and
// sum s p_s <= b n / m. Two active constraints put an optimum on a support
// of at most two points, so enumerating singletons and pairs is exact.

struct LpResult {
  std::vector<double> p;
  double value = 0.0;
};

inline LpResult xp_lp_allocation(const OverlapTable &P, int b, long long n, long long m) {
  detail::validate_table(P);
  if ((long long)P.size() != b + 1) throw std::invalid_argument("xp_lp_allocation: table size");
  if (n < 0 || m <= 0) throw std::invalid_argument("xp_lp_allocation: n, m range");
  double beta = double(b) * double(n) / double(m);
  LpResult best;
  best.p.assign(P.size(), 0.0);
  best.value = -1.0;
  for (int s = 0; s <= b; ++s) {
    if (s <= beta && P[s] > best.value) {
      std::fill(best.p.begin(), best.p.end(), 0.0);
      best.p[s] = 1.0;
      best.value = P[s];
    }
  }
  for (int u = 0; u <= b; ++u) {
    for (int v = u + 1; v <= b; ++v) {
      if (!(u < beta && beta < v)) continue;
      double pv = (beta - u) / double(v - u);
      double val = P[u] * (1.0 - pv) + P[v] * pv;
      if (val > best.value) {
        std::fill(best.p.begin(), best.p.end(), 0.0);
        best.p[u] = 1.0 - pv;
        best.p[v] = pv;
        best.value = val;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Integer allocations.

struct Allocation {
  std::vector<long long> counts;  // counts[s] clauses paying s constraints
};

inline long long allocation_cost(const Allocation &a) {
  long long c = 0;
  for (std::size_t s = 0; s < a.counts.size(); ++s) c += (long long)s * a.counts[s];
  return c;
}

inline long long allocation_size(const Allocation &a) {
  long long c = 0;
  for (long long v : a.counts) c += v;
  return c;
}

// Round the fractional optimum to counts, then walk surplus cost downward
// until the budget holds.
inline Allocation lp_rounded_allocation(const OverlapTable &P, int b, long long n, long long m) {
  LpResult lp = xp_lp_allocation(P, b, n, m);
  Allocation a;
  a.counts.assign(P.size(), 0);
  long long used = 0;
  int first = 0;
  for (int s = 0; s <= b; ++s) {
    if (lp.p[s] <= 0.0) continue;
    if (used == 0) first = s;
    long long c = (long long)std::floor(lp.p[s] * double(m) + 0.5);
    c = std::min(c, m - used);
    a.counts[s] += c;
    used += c;
  }
  a.counts[first] += m - used;
  long long budget = (long long)b * n;
  while (allocation_cost(a) > budget) {
    for (int s = b; s >= 1; --s) {
      if (a.counts[s] > 0) {
        --a.counts[s];
        ++a.counts[s - 1];
        break;
      }
    }
  }
  return a;
}

namespace detail {

// log k! for k = 0..n.
inline std::vector<double> log_factorials(long long n) {
  std::vector<double> lf(n + 1, 0.0);
  for (long long i = 2; i <= n; ++i) lf[i] = lf[i - 1] + std::log(double(i));
  return lf;
}

// Binomial(c, p) mass function in log space; exact spikes for p in {0, 1}.
inline std::vector<double> binom_pmf(long long c, double p, const std::vector<double> &lf) {
  std::vector<double> pmf(c + 1, 0.0);
  if (c == 0 || p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[c] = 1.0;
    return pmf;
  }
  double lp = std::log(p), lq = std::log1p(-p);
  for (long long j = 0; j <= c; ++j)
    pmf[j] = std::exp(lf[c] - lf[j] - lf[c - j] + double(j) * lp + double(c - j) * lq);
  return pmf;
}

inline std::vector<double> convolve(const std::vector<double> &a, const std::vector<double> &b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace detail

// P(sum of Bernoullis >= t) for an allocation under table P, by grouping the
// clauses per level and convolving the binomial masses.
inline double allocation_success_prob(const OverlapTable &P, const Allocation &a, long long t) {
  detail::validate_table(P);
  if (a.counts.size() != P.size()) throw std::invalid_argument("allocation: size mismatch");
  long long m = allocation_size(a);
  if (t <= 0) return 1.0;
  std::vector<double> lf = detail::log_factorials(m);
  std::vector<double> dist{1.0};
  long long base = 0;
  for (std::size_t s = 0; s < P.size(); ++s) {
    if (a.counts[s] == 0) continue;
    if (P[s] >= 1.0) {
      base += a.counts[s];
      continue;
    }
    dist = detail::convolve(dist, detail::binom_pmf(a.counts[s], P[s], lf));
  }
  long long need = t - base;
  if (need <= 0) return 1.0;
  if (need >= (long long)dist.size()) return 0.0;
  double acc = 0.0;
  for (std::size_t j = dist.size(); j-- > (std::size_t)need;) acc += dist[j];
  return std::min(acc, 1.0);
}

// Same tail in 256-bit arithmetic via an ascending term recurrence per group;
// immune to the double underflow of extreme tails.
inline Real256 allocation_success_prob_precise(const OverlapTable &P, const Allocation &a,
                                               long long t) {
  detail::validate_table(P);
  if (a.counts.size() != P.size()) throw std::invalid_argument("allocation: size mismatch");
  if (t <= 0) return 1;
  std::vector<Real256> dist{Real256(1)};
  long long base = 0;
  for (std::size_t s = 0; s < P.size(); ++s) {
    long long c = a.counts[s];
    if (c == 0) continue;
    if (P[s] >= 1.0) {
      base += c;
      continue;
    }
    std::vector<Real256> pmf(c + 1);
    if (P[s] <= 0.0) {
      pmf.assign(c + 1, Real256(0));
      pmf[0] = 1;
    } else {
      Real256 p = P[s];
      Real256 term = boost::multiprecision::pow(1 - p, unsigned(c));
      Real256 ratio = p / (1 - p);
      for (long long j = 0; j <= c; ++j) {
        pmf[j] = term;
        if (j < c) term *= ratio * Real256(c - j) / Real256(j + 1);
      }
    }
    std::vector<Real256> out(dist.size() + c, Real256(0));
    for (std::size_t i = 0; i < dist.size(); ++i)
      for (long long j = 0; j <= c; ++j) out[i + j] += dist[i] * pmf[j];
    dist = std::move(out);
  }
  long long need = t - base;
  if (need <= 0) return 1;
  if (need >= (long long)dist.size()) return 0;
  Real256 acc = 0;
  for (std::size_t j = dist.size(); j-- > (std::size_t)need;) acc += dist[j];
  return acc;
}

// ---------------------------------------------------------------------------
// Probability-optimal allocation of a constraint budget.
//
// Objective: counts c_s with sum c_s = m and sum s c_s <= B maximizing
// P(sum X_i >= t) where X_i ~ Bernoulli(P[s_i]). Comparisons use the tail
// tuple (P(>= t), P(= t-1), ..., P(= 0)) lexicographically.

struct TailTuple {
  std::vector<double> v;  // (P(>=t), P(=t-1), ..., P(=0))
};

inline bool operator<(const TailTuple &a, const TailTuple &b) { return a.v < b.v; }
inline bool operator==(const TailTuple &a, const TailTuple &b) { return a.v == b.v; }

enum class Comparator { Fast, Slow };

struct KnapsackResult {
  Allocation alloc;
  double gamma = 0.0;
};

struct KnapsackResultExact {
  Allocation alloc;
  BigRat gamma;
};

namespace detail {

// Truncated distributions d[j] = P(sum = j) for j < t plus d[t] = P(sum >= t).
// The exact lane scales by 2^kp per absorbed clause, so distributions are
// comparable exactly when they cover the same number of clauses; the state
// machine only ever compares at equal clause counts.
struct DoubleProbs {
  using Elem = double;
  using FVal = double;
  std::vector<double> p;
  FVal fvalue(std::size_t s) const { return p[s]; }
  std::vector<double> unit(long long t) const {
    std::vector<double> d(t + 1, 0.0);
    d[0] = 1.0;
    return d;
  }
  void extend(std::vector<double> &d, std::size_t s) const {
    long long t = (long long)d.size() - 1;
    if (t == 0) return;  // the single bucket is the absorbing tail
    double pr = p[s];
    d[t] += pr * d[t - 1];
    for (long long j = t - 1; j >= 1; --j) d[j] = (1.0 - pr) * d[j] + pr * d[j - 1];
    d[0] *= (1.0 - pr);
  }
};

struct DyadicProbs {
  using Elem = BigInt;
  using FVal = long long;
  std::vector<long long> pnum;
  long long den = 1;
  int kp = 0;
  long long fvalue(std::size_t s) const { return pnum[s]; }
  std::vector<BigInt> unit(long long t) const {
    std::vector<BigInt> d(t + 1);
    d[0] = 1;
    return d;
  }
  void extend(std::vector<BigInt> &d, std::size_t s) const {
    long long t = (long long)d.size() - 1;
    if (t == 0) {
      d[0] *= den;  // absorbing tail; keep the scale in step
      return;
    }
    long long pn = pnum[s];
    d[t] = den * d[t] + pn * d[t - 1];
    for (long long j = t - 1; j >= 1; --j) d[j] = (den - pn) * d[j] + pn * d[j - 1];
    d[0] *= (den - pn);
  }
};

// Smallest power-of-two denominator shared by all table entries.
inline DyadicProbs dyadic_probs(const OverlapTable &P) {
  DyadicProbs dp;
  int kp = 0;
  for (double v : P) {
    int e = 0;
    while (e <= 40 && v * std::ldexp(1.0, e) != std::floor(v * std::ldexp(1.0, e))) ++e;
    if (e > 40) throw std::invalid_argument("exact allocation: table entry is not dyadic");
    kp = std::max(kp, e);
  }
  dp.kp = kp;
  dp.den = 1LL << kp;
  for (double v : P) dp.pnum.push_back((long long)std::llround(v * std::ldexp(1.0, kp)));
  return dp;
}

// Lexicographic order on (d[t], d[t-1], ..., d[0]); -1, 0, +1.
template <class Elem>
int tail_cmp(const std::vector<Elem> &a, const std::vector<Elem> &b) {
  for (std::size_t j = a.size(); j-- > 0;) {
    if (a[j] != b[j]) return a[j] < b[j] ? -1 : 1;
  }
  return 0;
}

// Prefers the allocation whose mass sits at smaller levels: first difference
// scanning from the top level down wins by the smaller count.
inline bool smaller_levels(const std::vector<long long> &a, const std::vector<long long> &b) {
  for (std::size_t s = a.size(); s-- > 0;) {
    if (a[s] != b[s]) return a[s] < b[s];
  }
  return false;
}

// Budget-respecting state machine over (clauses left, budget left, level).
// A step either assigns one clause at the current level or closes the level;
// colliding partials are resolved by the tail-tuple comparator, optionally
// after appending the expectation-greedy completion of the remaining clauses
// (the slow rule). Ties go to the allocation using smaller levels.
template <class Probs>
struct DpRunner {
  const Probs &probs;
  long long m, B, t;
  Comparator mode;
  int smax;

  struct State {
    std::vector<typename Probs::Elem> dist;
    std::vector<long long> counts;
    bool live = false;
  };

  // Expectation-greedy completion: value of the best sum of P over `i`
  // clauses at levels >= low within `budget`, plus the branch taken.
  std::vector<typename Probs::FVal> fval;
  std::vector<signed char> fch;  // 0 close level, 1 take, -1 infeasible
  std::size_t fidx(long long i, long long budget, int low) const {
    return (std::size_t)((i * (B + 1) + budget) * (smax + 2) + low);
  }
  void build_completion_table() {
    fval.assign((std::size_t)(m + 1) * (B + 1) * (smax + 2), typename Probs::FVal(0));
    fch.assign(fval.size(), 0);
    for (int low = smax + 1; low >= 0; --low) {
      for (long long i = 0; i <= m; ++i) {
        for (long long budget = 0; budget <= B; ++budget) {
          std::size_t at = fidx(i, budget, low);
          if (i == 0) {
            fch[at] = 0;
            continue;
          }
          if (low > smax) {
            fch[at] = -1;
            continue;
          }
          signed char bump_ch = fch[fidx(i, budget, low + 1)];
          bool bump_ok = (low + 1 <= smax + 1) && bump_ch != -1;
          typename Probs::FVal bump_v = bump_ok ? fval[fidx(i, budget, low + 1)] : 0;
          bool take_ok = budget >= low && fch[fidx(i - 1, budget - low, low)] != -1;
          typename Probs::FVal take_v =
              take_ok ? fval[fidx(i - 1, budget - low, low)] + probs.fvalue(low) : 0;
          if (!bump_ok && !take_ok) {
            fch[at] = -1;
          } else if (take_ok && (!bump_ok || take_v > bump_v)) {
            fval[at] = take_v;
            fch[at] = 1;
          } else {
            fval[at] = bump_v;
            fch[at] = 0;
          }
        }
      }
    }
  }

  // Comparison key: the candidate's distribution, extended by the greedy
  // completion when running slow.
  std::vector<typename Probs::Elem> key_of(const State &st, long long i, long long budget,
                                           int low) const {
    std::vector<typename Probs::Elem> d = st.dist;
    if (mode == Comparator::Slow) {
      long long ci = i, cb = budget;
      int cl = low;
      while (ci > 0) {
        signed char ch = fch[fidx(ci, cb, cl)];
        if (ch == -1) break;  // dead end; compare the bare partial
        if (ch == 1) {
          probs.extend(d, (std::size_t)cl);
          --ci;
          cb -= cl;
        } else {
          ++cl;
        }
      }
    }
    return d;
  }

  void merge(State &cell, State &&cand, long long i, long long budget, int low) {
    if (!cell.live) {
      cell = std::move(cand);
      return;
    }
    auto kn = key_of(cand, i, budget, low);
    auto ko = key_of(cell, i, budget, low);
    int c = tail_cmp(kn, ko);
    if (c > 0 || (c == 0 && smaller_levels(cand.counts, cell.counts))) cell = std::move(cand);
  }

  // Shared sweep; terminal selection happens on the final level.
  std::pair<Allocation, std::vector<typename Probs::Elem>> run() {
    if (mode == Comparator::Slow) build_completion_table();
    auto grid = std::vector<State>((std::size_t)(m + 1) * (B + 1));
    auto at = [&](long long i, long long budget) -> State & {
      return grid[(std::size_t)(i * (B + 1) + budget)];
    };
    State &root = at(m, B);
    root.dist = probs.unit(t);
    root.counts.assign(smax + 1, 0);
    root.live = true;
    for (int low = 0; low <= smax; ++low) {
      for (long long i = m; i >= 1; --i) {
        for (long long budget = low; budget <= B; ++budget) {
          State &src = at(i, budget);
          if (!src.live) continue;
          State cand;
          cand.dist = src.dist;
          probs.extend(cand.dist, (std::size_t)low);
          cand.counts = src.counts;
          ++cand.counts[low];
          cand.live = true;
          merge(at(i - 1, budget - low), std::move(cand), i - 1, budget - low, low);
        }
      }
      // closing the level carries every surviving partial over unchanged
    }
    long long best_b = -1;
    for (long long budget = 0; budget <= B; ++budget) {
      State &st = at(0, budget);
      if (!st.live) continue;
      if (best_b < 0) {
        best_b = budget;
        continue;
      }
      State &cur = at(0, best_b);
      int c = tail_cmp(st.dist, cur.dist);
      // prefer the better tail, then the cheaper spend, then smaller levels
      if (c > 0 || (c == 0 && budget > best_b) ||
          (c == 0 && budget == best_b && smaller_levels(st.counts, cur.counts)))
        best_b = budget;
    }
    if (best_b < 0) throw std::logic_error("allocation state machine: no terminal");
    Allocation a;
    a.counts = at(0, best_b).counts;
    return {a, at(0, best_b).dist};
  }
};

// Dominant-family search used past the state-space limit: nearly all budget
// buys certainty at the first all-ones level, and the remainder is spread as
// a small partition over the cheaper levels. The family is scanned around the
// maximal certainty count with the exact tail evaluated per candidate.
inline KnapsackResult xp_allocation_search(const OverlapTable &P, long long m, long long B,
                                           long long t) {
  int b = (int)P.size() - 1;
  int smax_eff = b;
  for (int s = 0; s <= b; ++s) {
    if (P[s] >= 1.0) {
      smax_eff = s;
      break;
    }
  }
  KnapsackResult best;
  best.alloc.counts.assign(P.size(), 0);
  best.alloc.counts[0] = m;
  best.gamma = allocation_success_prob(P, best.alloc, t);
  if (smax_eff == 0) {
    best.gamma = 1.0;
    return best;
  }
  std::vector<double> lf = detail::log_factorials(m);
  long long xmax = std::min(B / smax_eff, m);
  auto consider = [&](const Allocation &a, double g) {
    if (g > best.gamma ||
        (g == best.gamma && (allocation_cost(a) < allocation_cost(best.alloc) ||
                             (allocation_cost(a) == allocation_cost(best.alloc) &&
                              detail::smaller_levels(a.counts, best.alloc.counts)))))
      best = {a, g};
  };
  // Dense window under the certainty cap, where the winners live, plus a
  // coarse sweep down to zero so mid-heavy shapes are never missed outright.
  std::set<long long> xs;
  for (long long x = std::max<long long>(0, xmax - 12); x <= xmax; ++x) xs.insert(x);
  long long stride = std::max<long long>(1, xmax / 16);
  for (long long x = 0; x < xmax; x += stride) xs.insert(x);
  for (long long x : xs) {
    long long rem = B - smax_eff * x;
    long long pb = std::min<long long>(rem, 72);
    // Upper-tail mass of the bulk group for every reachable bulk size.
    long long parts_cap = std::min<long long>(pb, m - x);
    std::vector<std::vector<double>> bulk_tail(parts_cap + 1);
    for (long long np = 0; np <= parts_cap; ++np) {
      long long c0 = m - x - np;
      std::vector<double> pmf = detail::binom_pmf(c0, P[0], lf);
      std::vector<double> tail(pmf.size() + 1, 0.0);
      for (std::size_t j = pmf.size(); j-- > 0;) tail[j] = tail[j + 1] + pmf[j];
      bulk_tail[np] = std::move(tail);
    }
    long long vneed = t - x;
    auto gamma_mid = [&](const std::vector<double> &mid, long long np) {
      if (vneed <= 0) return 1.0;
      const std::vector<double> &tail = bulk_tail[np];
      double acc = 0.0;
      for (std::size_t j = 0; j < mid.size(); ++j) {
        long long v = vneed - (long long)j;
        if (v <= 0)
          acc += mid[j];
        else if (v < (long long)tail.size())
          acc += mid[j] * tail[v];
      }
      return std::min(acc, 1.0);
    };
    // DFS over partitions of at most pb into parts within [1, smax_eff-1],
    // each part one clause, threading the mid distribution.
    std::vector<long long> pcounts(smax_eff, 0);
    std::vector<double> mid{1.0};
    auto emit = [&](long long np) {
      Allocation a;
      a.counts.assign(P.size(), 0);
      a.counts[0] = m - x - np;
      for (int s = 1; s < smax_eff; ++s) a.counts[s] = pcounts[s];
      a.counts[smax_eff] += x;
      consider(a, gamma_mid(mid, np));
    };
    auto rec = [&](auto &&self, long long left, int maxpart, long long np) -> void {
      emit(np);
      if (np >= parts_cap) return;
      for (int v = std::min<long long>(maxpart, left); v >= 1; --v) {
        ++pcounts[v];
        std::vector<double> save = mid;
        mid.resize(mid.size() + 1, 0.0);
        for (std::size_t j = mid.size(); j-- > 1;)
          mid[j] = (j < save.size() ? save[j] * (1.0 - P[v]) : 0.0) + save[j - 1] * P[v];
        mid[0] = save[0] * (1.0 - P[v]);
        self(self, left - v, v, np + 1);
        mid = std::move(save);
        --pcounts[v];
      }
    };
    rec(rec, pb, smax_eff - 1, 0);
  }
  // Fractional-optimum rounding as an extra seed; cheap single evaluation.
  long long n_equiv = B / std::max(1, b);
  Allocation lpr = lp_rounded_allocation(P, b, n_equiv, m);
  consider(lpr, allocation_success_prob(P, lpr, t));
  return best;
}

}  // namespace detail

// State-space threshold between the exact machine and the dominant-family
// search: states and the resident distribution volume both stay modest.
inline bool xp_dp_tractable(long long m, long long B, long long t, std::size_t levels) {
  long double states = (long double)(m + 1) * (B + 1) * (long double)levels;
  long double dist_elems = (long double)(m + 1) * (B + 1) * (long double)(t + 2);
  return states <= 3e5L && dist_elems <= 3e7L;
}

inline KnapsackResult xp_knapsack_dp(const OverlapTable &P, long long m, long long B, long long t,
                                     Comparator mode) {
  detail::validate_table(P);
  if (t > m) throw std::invalid_argument("xp_knapsack_dp: infeasible t > m");
  if (t < 0 || m <= 0 || B < 0) throw std::invalid_argument("xp_knapsack_dp: ranges");
  if (B > m * (long long)(P.size() - 1)) throw std::invalid_argument("xp_knapsack_dp: B > m b");
  if (!xp_dp_tractable(m, B, t, P.size()))
    return detail::xp_allocation_search(P, m, B, t);
  detail::DoubleProbs probs;
  probs.p = P;
  detail::DpRunner<detail::DoubleProbs> runner{probs, m, B, t, mode, (int)P.size() - 1, {}, {}};
  auto [alloc, dist] = runner.run();
  return {alloc, dist.back()};
}

// Exact lane over scaled integers; every table entry must be dyadic. Only
// meant for oracle-sized instances.
inline KnapsackResultExact xp_knapsack_dp_exact(const OverlapTable &P, long long m, long long B,
                                                long long t, Comparator mode) {
  detail::validate_table(P);
  if (t > m) throw std::invalid_argument("xp_knapsack_dp: infeasible t > m");
  if (t < 0 || m <= 0 || B < 0) throw std::invalid_argument("xp_knapsack_dp: ranges");
  if (B > m * (long long)(P.size() - 1)) throw std::invalid_argument("xp_knapsack_dp: B > m b");
  if (!xp_dp_tractable(m, B, t, P.size()))
    throw std::domain_error("xp_knapsack_dp_exact: instance too large");
  detail::DyadicProbs probs = detail::dyadic_probs(P);
  detail::DpRunner<detail::DyadicProbs> runner{probs, m, B, t, mode, (int)P.size() - 1, {}, {}};
  auto [alloc, dist] = runner.run();
  BigInt den = boost::multiprecision::pow(BigInt(2), unsigned(m * probs.kp));
  return {alloc, BigRat(dist.back(), den)};
}

// Expected trials 1/gamma against the quadric target set, with the slow
// comparator when the state machine fits and the dominant-family search
// above the limit. The reported tail is re-evaluated at 256-bit precision.
inline double xp_trials(long long m, long long n, int b, long long r) {
  if (b < 2 || b % 2 != 0) throw std::invalid_argument("xp_trials: b must be even, >= 2");
  AttackTarget tg = attack_target(m, n, b, r);
  OverlapTable P = mm_overlap_table(b / 2);
  KnapsackResult res = xp_knapsack_dp(P, m, (long long)b * n, tg.t, Comparator::Slow);
  Real256 g = allocation_success_prob_precise(P, res.alloc, tg.t);
  if (g == 0) throw std::domain_error("xp_trials: vanishing success probability");
  return double(1 / g);
}

// ---------------------------------------------------------------------------
// Analytic bounds.

inline double hoeffding_rate(double R) {
  if (!(R > 0.0 && R < 1.0)) throw std::invalid_argument("hoeffding_rate: R range");
  double d = std::sqrt(R / 2.0 * (1.0 - R / 2.0)) - R;
  return 2.0 * d * d;
}

inline double hoeffding_trials_lower_bound(long long m, double R) {
  if (m <= 0) throw std::invalid_argument("hoeffding_trials_lower_bound: m range");
  return std::exp(hoeffding_rate(R) * double(m));
}

// Tail bound P(sum >= t) <= exp(-2 (t - mean)^2 / m) for m variables in [0,1].
inline double hoeffding_tail_bound(long long m, double mean, long long t) {
  if (m <= 0) throw std::invalid_argument("hoeffding_tail_bound: m range");
  double gap = double(t) - mean;
  if (gap <= 0.0) return 1.0;
  return std::min(1.0, std::exp(-2.0 * gap * gap / double(m)));
}

}  // namespace opiw
