#pragma once

// Arithmetic in GF(2^b) for 1 <= b <= 16 over a configurable irreducible
// polynomial, plus imported gate-cost constants and a PCTOF rank minimizer.
//
// Representation: polynomial basis, little-endian bit order (bit i is the
// coefficient of x^i). Multiplication goes through log/antilog tables built
// at construction from a primitive element; the table builder itself uses
// plain shift-and-xor reduction so the two paths are independent.

#include <array>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "opiw/ledger.hpp"

namespace opiw {

typedef std::uint16_t felt_t;   // field element, bits < 2^b
typedef std::uint32_t fpoly_t;  // small F2[x] polynomial, bit i = coeff of x^i

inline int fpoly_deg(fpoly_t p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

// Carry-less product of two F2[x] polynomials (no reduction).
inline std::uint64_t fpoly_clmul(std::uint32_t a, std::uint32_t b) {
  std::uint64_t acc = 0;
  for (int i = 0; b >> i; ++i)
    if ((b >> i) & 1u) acc ^= (std::uint64_t)a << i;
  return acc;
}

// Remainder of p mod m in F2[x]; m != 0.
inline std::uint32_t fpoly_mod(std::uint64_t p, fpoly_t m) {
  assert(m != 0);
  int dm = fpoly_deg(m);
  for (int i = 63; i >= dm; --i)
    if ((p >> i) & 1u) p ^= (std::uint64_t)m << (i - dm);
  return (std::uint32_t)p;
}

// Irreducibility over F2 by trial division against every polynomial of
// degree 1..b/2. Degree must be exactly b.
inline bool fpoly_irreducible(fpoly_t m, int b) {
  if (fpoly_deg(m) != b) return false;
  if (b == 1) return true;
  for (int d = 1; 2 * d <= b; ++d)
    for (fpoly_t f = 1u << d; f < (2u << d); ++f)
      if (fpoly_mod(m, f) == 0) return false;
  return true;
}

// Smallest irreducible of degree exactly b (smallest bitmask).
inline fpoly_t fpoly_smallest_irreducible(int b) {
  for (fpoly_t m = 1u << b; m < (2u << b); ++m)
    if (fpoly_irreducible(m, b)) return m;
  throw std::logic_error("no irreducible found");  // unreachable for b >= 1
}

// Gate counts of one quantum-quantum multiplication at a given b.
// Known only for the imported table rows; zero-initialized otherwise.
struct GfCosts {
  std::uint32_t qq_toffoli = 0;
  std::uint32_t qq_cnot = 0;
  std::uint32_t qq_pctof = 0;
  bool known = false;
};

inline GfCosts default_costs(int b) {
  switch (b) {
    case 10: return {39, 738, 39, true};
    case 11: return {47, 1278, 46, true};
    case 12: return {51, 1506, 51, true};
    default: return {};
  }
}

// Multiplications in one Itoh-Tsujii inversion: the addition chain for
// b-1 built from its binary expansion.
inline int itoh_tsujii_mults(int b) {
  if (b <= 1) return 0;
  unsigned n = (unsigned)(b - 1);
  int len = 0, pc = 0;
  for (unsigned v = n; v > 1; v >>= 1) ++len;
  for (unsigned v = n; v; v >>= 1) pc += (int)(v & 1u);
  return len + pc - 1;
}

class GF {
 public:
  explicit GF(int b) : GF(b, fpoly_smallest_irreducible(b), default_costs(b)) {}
  GF(int b, fpoly_t irreducible) : GF(b, irreducible, default_costs(b)) {}

  GF(int b, fpoly_t irreducible, GfCosts costs)
      : b_(b), mod_(irreducible), costs_(costs), inv_mults_(itoh_tsujii_mults(b)) {
    if (b < 1 || b > 16) throw std::invalid_argument("b out of range [1,16]");
    if (!fpoly_irreducible(mod_, b)) throw std::invalid_argument("polynomial not irreducible of degree b");
    q_ = 1u << b;
    build_tables();
  }

  int b() const { return b_; }
  unsigned q() const { return q_; }
  fpoly_t irreducible() const { return mod_; }
  const GfCosts &costs() const { return costs_; }
  int cost_inv_mults() const { return inv_mults_; }
  void set_cost_inv_mults(int v) { inv_mults_ = v; }

  felt_t add(felt_t a, felt_t x) const { return a ^ x; }

  felt_t mul(felt_t a, felt_t x) const {
    assert(a < q_ && x < q_);
    if (a == 0 || x == 0) return 0;
    return alog_[log_[a] + log_[x]];
  }

  felt_t sqr(felt_t a) const { return mul(a, a); }

  // Table inverse; the circuit-accounted path lives in felt_inv below.
  felt_t inv(felt_t a) const {
    assert(a < q_);
    if (a == 0) throw std::domain_error("inverse of zero");
    if (b_ == 1) return 1;
    unsigned ord = q_ - 1;
    return alog_[(ord - log_[a]) % ord];
  }

  felt_t pow(felt_t a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    felt_t r = 1, base = a;
    while (e) {
      if (e & 1u) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  // a^(2^k), k squarings.
  felt_t frob(felt_t a, int k) const {
    for (int i = 0; i < k; ++i) a = sqr(a);
    return a;
  }

  // Multiplicative generator underlying the log tables: generator()^i = alog[i].
  felt_t generator() const { return b_ == 1 ? 1 : alog_[1]; }

 private:
  int b_;
  fpoly_t mod_;
  GfCosts costs_;
  int inv_mults_;
  unsigned q_ = 0;
  std::vector<std::uint16_t> log_;   // index by element, valid for nonzero
  std::vector<felt_t> alog_;         // doubled so mul needs no modular reduce

  felt_t slow_mul(felt_t a, felt_t x) const {
    return (felt_t)fpoly_mod(fpoly_clmul(a, x), mod_);
  }

  void build_tables() {
    unsigned ord = q_ - 1;
    log_.assign(q_, 0);
    alog_.assign(2 * ord, 0);
    if (b_ == 1) {
      alog_[0] = 1;
      log_[1] = 0;
      return;
    }
    for (felt_t g = 2; g < q_; ++g) {
      felt_t v = 1;
      unsigned i = 0;
      for (; i < ord; ++i) {
        alog_[i] = v;
        v = slow_mul(v, g);
        if (v == 1) break;
      }
      if (i + 1 == ord) {  // g generates the full multiplicative group
        for (unsigned j = 0; j < ord; ++j) {
          alog_[ord + j] = alog_[j];
          log_[alog_[j]] = (std::uint16_t)j;
        }
        return;
      }
    }
    throw std::logic_error("no generator found");  // unreachable: group is cyclic
  }
};

// ---- ledgered operation layer ----

inline felt_t felt_add(const GF &F, felt_t a, felt_t b) { return F.add(a, b); }

inline felt_t felt_mul(const GF &F, felt_t a, felt_t b, CostLedger *lg = nullptr) {
  if (lg) lg->qq_mult += 1;
  return F.mul(a, b);
}

// Same value as felt_mul; c is classically known so the circuit is
// Clifford-only and the charge lands on qc_mult.
inline felt_t felt_mul_const(const GF &F, felt_t a, felt_t c, CostLedger *lg = nullptr) {
  if (lg) lg->qc_mult += 1;
  return F.mul(a, c);
}

// Inversion by square-and-multiply along the Itoh-Tsujii addition chain for
// b-1; cost_inv_mults() multiplications plus linear squarings. The ledger
// takes one gf_inverse; the multiplication expansion enters the derived
// gate totals via cost_inv_mults so it is not double counted here.
inline felt_t felt_inv_counted(const GF &F, felt_t a, int *mults) {
  if (a == 0) throw std::domain_error("inverse of zero");
  int cnt = 0;
  if (F.b() == 1) {
    if (mults) *mults = 0;
    return 1;
  }
  unsigned n = (unsigned)(F.b() - 1);
  int top = 0;
  while ((n >> top) > 1) ++top;
  felt_t t = a;  // t = a^(2^k - 1), k starts at 1
  int k = 1;
  for (int i = top - 1; i >= 0; --i) {
    t = F.mul(F.frob(t, k), t);
    ++cnt;
    k *= 2;
    if ((n >> i) & 1u) {
      t = F.mul(F.sqr(t), a);
      ++cnt;
      k += 1;
    }
  }
  if (mults) *mults = cnt;
  return F.sqr(t);  // a^(2^b - 2)
}

inline felt_t felt_inv(const GF &F, felt_t a, CostLedger *lg = nullptr) {
  if (lg) lg->gf_inverse += 1;
  return felt_inv_counted(F, a, nullptr);
}

// Derived gate totals. Inversions expand to cost_inv_mults qq-grade
// multiplications each. Unknown when the cost table has no row for this b.
inline bool toffoli_total(const CostLedger &lg, const GF &F, std::uint64_t *out) {
  if (!F.costs().known) return false;
  *out = (lg.qq_mult + lg.gf_inverse * (std::uint64_t)F.cost_inv_mults()) * F.costs().qq_toffoli;
  return true;
}

inline bool pctof_total(const CostLedger &lg, const GF &F, std::uint64_t *out) {
  if (!F.costs().known) return false;
  *out = (lg.qq_mult + lg.gf_inverse * (std::uint64_t)F.cost_inv_mults()) * F.costs().qq_pctof;
  return true;
}

inline bool cnot_total(const CostLedger &lg, const GF &F, std::uint64_t *out) {
  if (!F.costs().known) return false;
  *out = (lg.qq_mult + lg.gf_inverse * (std::uint64_t)F.cost_inv_mults()) * F.costs().qq_cnot;
  return true;
}

// ---- PCTOF rank minimization ----
//
// A PCTOF gate computes AND(parity of control_x over register X, parity of
// control_y over register Y) and XORs it into the target wires. Its action
// on the output register is the degree-2 Boolean polynomial
// sum_{i in cx, j in cy} x_i y_j, one row of an F2 matrix with b^2 monomial
// columns. Gates whose rows are dependent can be folded into a spanning
// subset whose targets absorb the decompositions.

struct PctofGate {
  std::uint32_t control_x = 0;
  std::uint32_t control_y = 0;
  std::uint32_t target = 0;

  bool operator==(const PctofGate &o) const = default;
};

namespace detail {

// 256-bit row: monomial x_i y_j at bit i*b + j.
typedef std::array<std::uint64_t, 4> PctofRow;

inline PctofRow pctof_row(const PctofGate &g, int b) {
  PctofRow r{0, 0, 0, 0};
  for (int i = 0; i < b; ++i) {
    if (!((g.control_x >> i) & 1u)) continue;
    for (int j = 0; j < b; ++j) {
      if (!((g.control_y >> j) & 1u)) continue;
      int bit = i * b + j;
      r[bit >> 6] ^= 1ull << (bit & 63);
    }
  }
  return r;
}

inline bool row_zero(const PctofRow &r) { return !(r[0] | r[1] | r[2] | r[3]); }

inline int row_lowbit(const PctofRow &r) {
  for (int w = 0; w < 4; ++w)
    if (r[w]) return w * 64 + __builtin_ctzll(r[w]);
  return -1;
}

inline void row_xor(PctofRow &a, const PctofRow &b) {
  for (int w = 0; w < 4; ++w) a[w] ^= b[w];
}

}  // namespace detail

inline std::vector<PctofGate> pctof_minimize(const std::vector<PctofGate> &gates, int b) {
  assert(b >= 1 && b <= 16);
  struct Pivot {
    detail::PctofRow row;
    int bit;
    std::vector<std::uint32_t> combo;  // chosen-gate indices whose rows sum to row
  };
  std::vector<Pivot> pivots;
  std::vector<PctofGate> chosen;

  auto reduce = [&](detail::PctofRow r, std::vector<std::uint32_t> *combo) {
    for (const Pivot &p : pivots) {
      if ((r[p.bit >> 6] >> (p.bit & 63)) & 1ull) {
        detail::row_xor(r, p.row);
        if (combo)
          for (std::uint32_t c : p.combo) combo->push_back(c);
      }
    }
    return r;
  };

  for (const PctofGate &g : gates) {
    std::vector<std::uint32_t> combo;
    detail::PctofRow r = reduce(detail::pctof_row(g, b), &combo);
    if (detail::row_zero(r)) continue;
    combo.push_back((std::uint32_t)chosen.size());
    pivots.push_back({r, detail::row_lowbit(r), std::move(combo)});
    chosen.push_back({g.control_x, g.control_y, 0});
  }

  // Second pass: decompose every input row over the chosen basis and fold
  // its target into each participating basis gate. XOR-parity over the
  // combo lists implements the cancellation.
  for (const PctofGate &g : gates) {
    std::vector<std::uint32_t> combo;
    detail::PctofRow r = reduce(detail::pctof_row(g, b), &combo);
    assert(detail::row_zero(r));
    (void)r;
    std::vector<int> parity(chosen.size(), 0);
    for (std::uint32_t c : combo) parity[c] ^= 1;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (parity[i]) chosen[i].target ^= g.target;
  }
  return chosen;
}

}  // namespace opiw
