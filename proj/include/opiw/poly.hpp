#pragma once

#include <stdexcept>
#include <vector>

#include "opiw/gf.hpp"
#include "opiw/ledger.hpp"

namespace opiw {

// Dense little-endian coefficient vector: p[i] is the coefficient of z^i.
// Canonical form keeps no trailing zeros, so the zero polynomial is {} and
// deg(0) = -1.
using Poly = std::vector<felt_t>;

inline void poly_trim(Poly &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_deg(const Poly &p) {
  int d = (int)p.size() - 1;
  while (d >= 0 && p[d] == 0) --d;
  return d;
}

inline bool poly_is_zero(const Poly &p) { return poly_deg(p) < 0; }

inline Poly poly_add(const Poly &p, const Poly &q) {
  Poly out(std::max(p.size(), q.size()), 0);
  for (size_t i = 0; i < p.size(); ++i) out[i] = p[i];
  for (size_t i = 0; i < q.size(); ++i) out[i] ^= q[i];
  poly_trim(out);
  return out;
}

inline Poly poly_mul(const GF &F, const Poly &p, const Poly &q, CostLedger *ledger = nullptr) {
  if (poly_is_zero(p) || poly_is_zero(q)) return {};
  Poly out(p.size() + q.size() - 1, 0);
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) out[i + j] ^= felt_mul(F, p[i], q[j], ledger);
  poly_trim(out);
  return out;
}

inline std::pair<Poly, Poly> poly_divmod(const GF &F, const Poly &a, const Poly &b) {
  int db = poly_deg(b);
  if (db < 0) throw std::domain_error("poly_divmod: division by zero polynomial");
  Poly r = a;
  poly_trim(r);
  int dr = poly_deg(r);
  if (dr < db) return {{}, r};
  Poly q(dr - db + 1, 0);
  felt_t inv_lead = F.inv(b[db]);
  while (dr >= db) {
    felt_t factor = F.mul(r[dr], inv_lead);
    int shift = dr - db;
    q[shift] = factor;
    for (int i = 0; i <= db; ++i) r[shift + i] ^= F.mul(factor, b[i]);
    poly_trim(r);
    dr = poly_deg(r);
  }
  return {q, r};
}

// Horner evaluation; gamma is treated as a classical constant, so a degree-d
// polynomial costs exactly d constant multiplications.
inline felt_t poly_eval(const GF &F, const Poly &p, felt_t gamma, CostLedger *ledger = nullptr) {
  int d = poly_deg(p);
  if (d < 0) return 0;
  felt_t acc = p[d];
  for (int i = d - 1; i >= 0; --i) acc = (felt_t)(felt_mul_const(F, acc, gamma, ledger) ^ p[i]);
  return acc;
}

inline Poly poly_scale(const GF &F, const Poly &p, felt_t c) {
  if (c == 0) return {};
  Poly out = p;
  for (felt_t &x : out) x = F.mul(x, c);
  poly_trim(out);
  return out;
}

inline Poly poly_derivative(const Poly &p) {
  Poly out;
  if (p.size() <= 1) return out;
  out.assign(p.size() - 1, 0);
  for (size_t i = 1; i < p.size(); i += 2) out[i - 1] = p[i];
  poly_trim(out);
  return out;
}

struct EEATriple {
  Poly r, u, v;  // A*u + B*v = r for the (A,B) that produced the table
};

// Textbook extended Euclid over GF(2^b)[z], kept deliberately unit-ambiguous:
// no monic normalization anywhere. The table starts with the two seed rows
// (A,1,0), (B,0,1) and ends with the zero-remainder row, so the gcd row is
// always the second-to-last entry (or the first row when B = 0).
inline std::vector<EEATriple> classical_eea(const GF &F, const Poly &A, const Poly &B) {
  Poly a = A, b = B;
  poly_trim(a);
  poly_trim(b);
  if (poly_is_zero(a) && poly_is_zero(b))
    throw std::invalid_argument("classical_eea: gcd(0,0) undefined");
  std::vector<EEATriple> rows;
  rows.push_back({a, {1}, {}});
  rows.push_back({b, {}, {1}});
  while (!poly_is_zero(rows.back().r)) {
    const EEATriple &prev = rows[rows.size() - 2];
    const EEATriple &cur = rows.back();
    auto [q, r] = poly_divmod(F, prev.r, cur.r);
    EEATriple next;
    next.r = r;
    next.u = poly_add(prev.u, poly_mul(F, q, cur.u));
    next.v = poly_add(prev.v, poly_mul(F, q, cur.v));
    rows.push_back(std::move(next));
  }
  return rows;
}

}  // namespace opiw
