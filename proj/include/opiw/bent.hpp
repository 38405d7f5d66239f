#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace opiw {

// F2 row vectors of length <= 31 are bitmasks (bit i is coordinate x_{i+1});
// matrices are dense row lists.
using F2Vec = std::uint32_t;
using F2Matrix = std::vector<F2Vec>;

inline int f2_parity(F2Vec v) { return std::popcount(v) & 1; }

inline F2Vec f2_matvec(const F2Matrix &M, F2Vec x) {
  F2Vec y = 0;
  for (std::size_t r = 0; r < M.size(); ++r) y |= (F2Vec)f2_parity(M[r] & x) << r;
  return y;
}

inline int f2_rank(F2Matrix M) {
  int rank = 0;
  for (std::size_t r = 0; r < M.size(); ++r) {
    F2Vec row = M[r];
    for (std::size_t s = 0; s < (std::size_t)rank; ++s)
      if (row & (M[s] & (F2Vec)-(std::int32_t)M[s]))  // reduce by stored pivot bits
        row ^= M[s];
    if (row == 0) continue;
    M[rank] = row;
    // keep stored rows reduced against the new pivot
    F2Vec pivot = row & (F2Vec)-(std::int32_t)row;
    for (int s = 0; s < rank; ++s)
      if (M[s] & pivot) M[s] ^= row;
    ++rank;
  }
  return rank;
}

// Membership in the Maiorana-McFarland quadric over F2^{2k}:
// sum_{i=1}^{k} x_i x_{i+k} = 1.
inline bool s_k_member(int k, F2Vec x) {
  if (k < 1 || k > 15) throw std::invalid_argument("s_k_member: need 1 <= k <= 15");
  if (x >> (2 * k)) throw std::invalid_argument("s_k_member: vector longer than 2k bits");
  F2Vec low = (F2Vec)((1u << k) - 1);
  return std::popcount((x & low) & (x >> k)) & 1;
}

inline std::vector<std::uint8_t> s_k_bitmap(int k) {
  std::vector<std::uint8_t> bits(std::size_t(1) << (2 * k));
  for (F2Vec x = 0; x < bits.size(); ++x) bits[x] = s_k_member(k, x);
  return bits;
}

// Proven ceiling on |A cap S_k| over affine subspaces A of dimension d. The
// middle case needs k >= 2, which holds whenever k <= d < 2k-1 is nonempty.
inline long long mm_intersection_bound(int k, int d) {
  if (k < 1 || d < 0 || d > 2 * k) throw std::invalid_argument("mm_intersection_bound: bad (k, d)");
  if (d < k) return 1ll << d;
  if (d < 2 * k - 1) return (1ll << (d - 1)) + (1ll << (k - 2));
  if (d == 2 * k - 1) return 1ll << (2 * k - 2);
  return (1ll << (2 * k - 1)) - (1ll << (k - 1));
}

struct AffineSubspace {
  F2Matrix basis;
  F2Vec offset = 0;
};

inline bool affine_subspace_valid(const AffineSubspace &a) {
  return f2_rank(a.basis) == (int)a.basis.size();
}

// Gaussian binomial [n choose d]_2 counts d-dimensional linear subspaces of
// F2^n; small DP on [n d] = [n-1 d] + 2^{n-d} [n-1 d-1].
inline unsigned long long gaussian_binom2(int n, int d) {
  if (d < 0 || d > n) return 0;
  std::vector<unsigned long long> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<unsigned long long> next(std::min(i, d) + 1);
    next[0] = 1;
    for (int j = 1; j <= std::min(i, d); ++j)
      next[j] = (j <= i - 1 ? row[j] : 0) + ((unsigned long long)1 << (i - j)) * row[j - 1];
    row = std::move(next);
  }
  return row[d];
}

// Canonical enumeration of d-dimensional linear subspaces: pivot columns
// strictly increasing, each row carrying its pivot bit plus free bits only
// at non-pivot columns above the pivot. Every subspace appears exactly once,
// and affine subspaces follow by adding offsets supported off the pivots.
template <class F>
inline void for_each_rref_basis(int n, int d, F &&f) {
  if (d < 0 || d > n || n > 16) throw std::invalid_argument("for_each_rref_basis: bad (n, d)");
  if ((long long)d * (n - d) >= 62) throw std::domain_error("for_each_rref_basis: free-bit mask too wide");
  if (d == 0) {
    F2Matrix empty;
    f(empty, (F2Vec)0);
    return;
  }
  std::vector<int> piv(d);
  for (int i = 0; i < d; ++i) piv[i] = i;
  for (;;) {
    F2Vec pivmask = 0;
    for (int p : piv) pivmask |= (F2Vec)1 << p;
    std::vector<std::pair<int, int>> slots;  // (row, free column)
    for (int i = 0; i < d; ++i)
      for (int q = piv[i] + 1; q < n; ++q)
        if (!(pivmask >> q & 1)) slots.push_back({i, q});
    for (std::uint64_t sel = 0; sel < (std::uint64_t(1) << slots.size()); ++sel) {
      F2Matrix basis(d);
      for (int i = 0; i < d; ++i) basis[i] = (F2Vec)1 << piv[i];
      for (std::size_t t = 0; t < slots.size(); ++t)
        if (sel >> t & 1) basis[slots[t].first] |= (F2Vec)1 << slots[t].second;
      f(basis, pivmask);
    }
    int i = d - 1;
    while (i >= 0 && piv[i] == n - d + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
  }
}

// Exact max of |A cap member| over d-dimensional affine subspaces of F2^n,
// by exhaustive walk: span points per basis, then one offset per coset
// (offsets live on the non-pivot columns, so cosets are hit exactly once).
inline int max_intersection_over_affine(int n, int d, const std::vector<std::uint8_t> &member) {
  if (member.size() != std::size_t(1) << n)
    throw std::invalid_argument("max_intersection_over_affine: bitmap size mismatch");
  int best = 0;
  for_each_rref_basis(n, d, [&](const F2Matrix &basis, F2Vec pivmask) {
    std::vector<F2Vec> span{0};
    span.reserve(std::size_t(1) << d);
    for (F2Vec b : basis) {
      std::size_t sz = span.size();
      for (std::size_t t = 0; t < sz; ++t) span.push_back(span[t] ^ b);
    }
    F2Vec freemask = (F2Vec)(((1u << n) - 1) & ~pivmask);
    F2Vec off = 0;
    do {
      int cnt = 0;
      for (F2Vec p : span) cnt += member[p ^ off];
      if (cnt > best) best = cnt;
      off = (off - freemask) & freemask;
    } while (off != 0);
  });
  return best;
}

inline int max_affine_intersection(int k, int d) {
  if (k < 1 || d < 0 || d > 2 * k) throw std::invalid_argument("max_affine_intersection: bad (k, d)");
  if (2 * k > 8) throw std::domain_error("max_affine_intersection: exhaustive mode needs 2k <= 8");
  return max_intersection_over_affine(2 * k, d, s_k_bitmap(k));
}

// A twisted target set: x is a member when transform * x + offset lands in
// S_k. An invertible transform keeps the set size at |S_k|.
struct TargetSet {
  int k = 0;
  F2Matrix transform;
  F2Vec offset = 0;

  bool member(F2Vec x) const { return s_k_member(k, f2_matvec(transform, x) ^ offset); }
  bool operator==(const TargetSet &) const = default;
};

// P[s] for s = 0..2k: best fraction of a codimension-s affine subspace lying
// inside the target set. All values are dyadic, so doubles hold them exactly.
using OverlapTable = std::vector<double>;

inline OverlapTable overlap_table_bruteforce(const TargetSet &t) {
  if (t.k < 1) throw std::invalid_argument("overlap_table_bruteforce: bad k");
  if (2 * t.k > 8) throw std::domain_error("overlap_table_bruteforce: exhaustive mode needs 2k <= 8");
  int n = 2 * t.k;
  std::vector<std::uint8_t> member(std::size_t(1) << n);
  for (F2Vec x = 0; x < member.size(); ++x) member[x] = t.member(x);
  OverlapTable table(n + 1);
  for (int s = 0; s <= n; ++s) {
    int d = n - s;
    table[s] = (double)max_intersection_over_affine(n, d, member) / (double)(1u << d);
  }
  return table;
}

// Uniform over GL_dim(F2): draw rows uniformly, rejecting any row inside the
// span of the accepted ones. Every full-rank row sequence is equally likely.
inline F2Matrix gl_random(int dim, std::mt19937_64 &rng) {
  if (dim < 1 || dim > 30) throw std::invalid_argument("gl_random: bad dimension");
  std::uniform_int_distribution<F2Vec> dist(0, (F2Vec)((1u << dim) - 1));
  F2Matrix rows;
  F2Matrix reduced;  // echelon shadow of the accepted rows
  while ((int)rows.size() < dim) {
    F2Vec row = dist(rng);
    F2Vec t = row;
    for (F2Vec v : reduced) {
      F2Vec pivot = v & (F2Vec)-(std::int32_t)v;
      if (t & pivot) t ^= v;
    }
    if (t == 0) continue;
    rows.push_back(row);
    reduced.push_back(t);
  }
  return rows;
}

struct OPIInstance {
  int k = 0;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<TargetSet> targets;  // targets[j-1] guards evaluation point j

  bool operator==(const OPIInstance &) const = default;
};

// One independent uniform invertible transform per evaluation point,
// deterministic in the seed. The definition fixes m to the full multiplica-
// tive group of F_{2^{2k}} and uses plain (offset-free) twists.
inline OPIInstance tbt_opi_generate(int k, int m, int n, std::uint64_t seed) {
  if (k < 1 || k > 12) throw std::invalid_argument("tbt_opi_generate: bad k");
  if (m != (1 << (2 * k)) - 1) throw std::invalid_argument("tbt_opi_generate: m must be 2^(2k) - 1");
  if (n < 1 || n > m) throw std::invalid_argument("tbt_opi_generate: need 1 <= n <= m");
  OPIInstance inst;
  inst.k = k;
  inst.m = m;
  inst.n = n;
  inst.seed = seed;
  inst.targets.reserve(m);
  std::mt19937_64 rng(seed);
  for (int j = 0; j < m; ++j) inst.targets.push_back({k, gl_random(2 * k, rng), 0});
  return inst;
}

}  // namespace opiw
