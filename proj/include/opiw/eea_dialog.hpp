#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opiw/ledger.hpp"
#include "opiw/poly.hpp"

namespace opiw {

// Implicit-Bezout EEA: a constant-time divstep loop whose per-step records
// (swap decision + subtraction coefficient) form the Dialog. Each step is
// the matrix product M_double * M_add(c) * M_invert^swap, so the whole run
// is a linear map that can later be replayed against any start vector:
// modular division, modular multiplication, and pointwise Bezout evaluation
// all become Dialog playbacks instead of explicit polynomial arithmetic.

struct DialogStep {
  bool swapped;
  felt_t coeff;
};

struct Dialog {
  std::vector<DialogStep> steps;
  std::vector<int> delta_trace;  // delta after each completed step
  int n = 0;                     // max input degree
  int budget = 0;                // shared-buffer cells: poly + dialog regions
  Poly final_a, final_b;         // buffer contents after the last step
  felt_t gamma0 = 0;             // final a-track constant when the gcd is a unit
  bool unit_gcd = false;
  // live coefficients never spilled past the shrinking poly region; always
  // true for unit-gcd and decoder-shaped runs, can legitimately fail when a
  // large gcd parks cells beyond the oblivious schedule's envelope
  bool fit_ok = true;
  int peak_live = 0;

  size_t size() const { return steps.size(); }
};

namespace detail {

// z^{-1} mod P: z * (P - P(0))/z = P - P(0) == -P(0) (mod P), so divide by
// the constant term. Needs P(0) != 0.
inline Poly zinv_mod(const GF &F, const Poly &P) {
  if (P.empty() || P[0] == 0) throw std::invalid_argument("zinv_mod: P(0) must be nonzero");
  felt_t c = F.inv(P[0]);
  Poly out(P.begin() + 1, P.end());
  for (felt_t &x : out) x = F.mul(x, c);
  poly_trim(out);
  return out;
}

}  // namespace detail

// Builds the Dialog for (A, B) in `steps` divsteps (default 2n for maximum
// input degree n, which fully drains any input pair). A must have a nonzero
// constant term: the swap rule keeps the a-track constant invertible, which
// is what makes every step's coefficient well defined.
//
// Register sharing: the two polynomials live packed from opposite ends of a
// fixed buffer; each step retires exactly one buffer cell into the dialog
// region, so poly_cells + dialog_cells stays equal to the buffer size. The
// schedule is oblivious, so charges use the structural cell counts, not the
// (possibly smaller) live ones: per step 1 inversion + 1 qq for the
// coefficient, floor((poly_cells + delta)/2) qq for the in-place
// subtraction, and poly_cells/2 cswaps when the swap fires.
inline Dialog dialog_build(const GF &F, const Poly &A, const Poly &B, int steps = -1,
                           CostLedger *ledger = nullptr) {
  Poly a = A, b = B;
  // The buffer is sized by the registers as handed in: zero cells still exist
  // physically, so an input with unlucky leading zeros keeps its full window.
  int budget = 2 * (int)std::max(a.size(), b.size());
  poly_trim(a);
  poly_trim(b);
  if (a.empty() || a[0] == 0)
    throw std::invalid_argument("dialog_build: A must have a nonzero constant term");

  int da0 = poly_deg(a), db0 = poly_deg(b);
  int n = std::max(da0, std::max(db0, 0));
  if (steps < 0) steps = 2 * n;
  if (steps > budget) throw std::invalid_argument("dialog_build: steps exceed the buffer");
  // The quoted divstep degree bounds hold under their theorem's shape
  // (strictly dominant a-track); other shapes are legal but unchecked.
  bool check_bounds = da0 > db0;

  Dialog d;
  d.n = n;
  d.budget = budget;
  d.steps.reserve(steps);
  d.delta_trace.reserve(steps);

  int delta = 1;
  for (int i = 1; i <= steps; ++i) {
    int poly_cells = budget - (i - 1);

    felt_t b0 = b.empty() ? 0 : b[0];
    bool swapped = delta > 0 && b0 != 0;
    if (swapped) {
      std::swap(a, b);
      delta = -delta;
      if (ledger) ledger->cswap += (std::uint64_t)(poly_cells / 2);
    }

    b0 = b.empty() ? 0 : b[0];
    felt_t c = b0 ? F.mul(b0, F.inv(a[0])) : 0;
    if (ledger) {
      ledger->gf_inverse += 1;  // constant-time: inverted even when unused
      ledger->qq_mult += 1;
    }

    // b <- (b - c*a) / z, in place; the constant term cancels by design.
    size_t nb = std::max(b.size(), a.size());
    b.resize(nb, 0);
    if (c)
      for (size_t j = 0; j < a.size(); ++j) b[j] ^= F.mul(c, a[j]);
    if (b[0] != 0) throw std::logic_error("dialog_build: shift would drop a nonzero constant");
    b.erase(b.begin());
    poly_trim(b);
    if (ledger && poly_cells + delta > 0)
      ledger->qq_mult += (std::uint64_t)((poly_cells + delta) / 2);

    delta += 1;
    d.steps.push_back({swapped, c});
    d.delta_trace.push_back(delta);

    // register-sharing identity and fit
    int dialog_cells = i;
    if (poly_cells - 1 + dialog_cells != budget)
      throw std::logic_error("dialog_build: cell conservation broken");
    int live = (int)(a.size() + b.size());
    if (live > d.peak_live) d.peak_live = live;
    // The pair must fit in the region the dialog has not yet claimed. The
    // in-place shift fuses into the subtraction, so the step works inside
    // poly_cells even when the eliminated track rebounds to deg(a) - 1.
    if (live > poly_cells) d.fit_ok = false;

    if (check_bounds) {
      if (!poly_is_zero(a) && 2 * poly_deg(a) > 2 * da0 - 1 - i + delta)
        throw std::logic_error("dialog_build: a-track degree bound violated");
      if (!poly_is_zero(b) && 2 * poly_deg(b) > 2 * da0 - 1 - i - delta)
        throw std::logic_error("dialog_build: b-track degree bound violated");
    }
  }

  d.final_a = a;
  d.final_b = b;
  d.unit_gcd = poly_deg(a) == 0 && poly_is_zero(b);
  d.gamma0 = d.unit_gcd ? a[0] : 0;
  return d;
}

// Replays the first `prefix` steps (all when negative) as a 2x2 polynomial
// matrix T, in the z-cleared parametrization T <- diag(z,1)*M_add(c)*S^sw*T.
// Each true step matrix is z^{-1} times this one, so after i steps
// T * [A, B]^T = z^i * [a_i, b_i] exactly. Classical verification aid; no
// ledger.
inline std::array<std::array<Poly, 2>, 2> dialog_matrix(const GF &F, const Dialog &d,
                                                        int prefix = -1) {
  std::array<std::array<Poly, 2>, 2> t = {{{Poly{1}, Poly{}}, {Poly{}, Poly{1}}}};
  size_t upto = prefix < 0 ? d.steps.size() : (size_t)prefix;
  for (size_t s = 0; s < upto; ++s) {
    const DialogStep &st = d.steps[s];
    if (st.swapped) std::swap(t[0], t[1]);
    for (int col = 0; col < 2; ++col)
      t[1][col] = poly_add(t[1][col], poly_scale(F, t[0][col], st.coeff));
    for (int col = 0; col < 2; ++col)
      if (!poly_is_zero(t[0][col])) t[0][col].insert(t[0][col].begin(), 0);
  }
  return t;
}

namespace detail {

inline Poly residue_cells(const GF &F, const Poly &C, const Poly &P, size_t cells) {
  Poly r = poly_divmod(F, C, P).second;
  r.resize(cells, 0);
  return r;
}

}  // namespace detail

// Forward playback of [0, C]: every true step applies swap, the c-update,
// and a z^{-1} rotation mod P to the bottom track. For a Dialog built from
// (P, B) with unit gcd the top track finishes at gamma0 * C * B^{-1}, so one
// unit correction yields C * B^{-1} mod P.
//
// Per step on deg(P)-cell tracks: deg(P) qq (c-update, oblivious) and
// deg(P) qc (the z^{-1} fold against the classical modulus); swaps move
// deg(P) cell pairs. The unit correction at the end costs one inversion and
// deg(P) qq.
inline Poly dialog_div(const GF &F, const Dialog &d, const Poly &C, const Poly &P,
                       CostLedger *ledger = nullptr) {
  if (!d.unit_gcd) throw std::domain_error("dialog_div: dialog gcd is not a unit");
  int np = poly_deg(P);
  if (np < 1) throw std::invalid_argument("dialog_div: modulus must have degree >= 1");
  Poly zi = detail::zinv_mod(F, P);
  zi.resize(np, 0);

  Poly top(np, 0), bot = detail::residue_cells(F, C, P, np);
  for (const DialogStep &st : d.steps) {
    if (st.swapped) {
      top.swap(bot);
      if (ledger) ledger->cswap += (std::uint64_t)np;
    }
    if (st.coeff)
      for (int j = 0; j < np; ++j) bot[j] ^= F.mul(st.coeff, top[j]);
    // bot <- bot * z^{-1} mod P: shift down, fold the dropped constant
    felt_t b0 = bot[0];
    for (int j = 0; j + 1 < np; ++j) bot[j] = bot[j + 1];
    bot[np - 1] = 0;
    if (b0)
      for (int j = 0; j < np; ++j) bot[j] ^= F.mul(b0, zi[j]);
    if (ledger) {
      ledger->qq_mult += (std::uint64_t)np;
      ledger->qc_mult += (std::uint64_t)np;
    }
  }

  felt_t unit = F.inv(d.gamma0);
  for (felt_t &x : top) x = F.mul(x, unit);
  if (ledger) {
    ledger->gf_inverse += 1;
    ledger->qq_mult += (std::uint64_t)np;
  }
  poly_trim(top);
  return top;
}

// Reverse playback: inverts every step (M^{-1} = S^sw * M_add(c) * diag(1,z))
// walking the Dialog backwards, so the start vector [C, 0] finishes with
// B * C / gamma0 on the bottom track; the unit correction returns B*C mod P.
inline Poly dialog_mul(const GF &F, const Dialog &d, const Poly &C, const Poly &P,
                       CostLedger *ledger = nullptr) {
  if (!d.unit_gcd) throw std::domain_error("dialog_mul: dialog gcd is not a unit");
  int np = poly_deg(P);
  if (np < 1) throw std::invalid_argument("dialog_mul: modulus must have degree >= 1");
  // z^np mod P, the fold row for the forward z rotation
  Poly zfold(P.begin(), P.begin() + np);
  felt_t plead = F.inv(P[np]);
  for (felt_t &x : zfold) x = F.mul(x, plead);

  Poly top = detail::residue_cells(F, C, P, np), bot(np, 0);
  for (auto it = d.steps.rbegin(); it != d.steps.rend(); ++it) {
    // bot <- bot * z mod P: shift up, fold the overflow cell
    felt_t lead = bot[np - 1];
    for (int j = np - 1; j > 0; --j) bot[j] = bot[j - 1];
    bot[0] = 0;
    if (lead)
      for (int j = 0; j < np; ++j) bot[j] ^= F.mul(lead, zfold[j]);
    if (it->coeff)
      for (int j = 0; j < np; ++j) bot[j] ^= F.mul(it->coeff, top[j]);
    if (ledger) {
      ledger->qq_mult += (std::uint64_t)np;
      ledger->qc_mult += (std::uint64_t)np;
    }
    if (it->swapped) {
      top.swap(bot);
      if (ledger) ledger->cswap += (std::uint64_t)np;
    }
  }

  for (felt_t &x : bot) x = F.mul(x, d.gamma0);
  if (ledger) ledger->qq_mult += (std::uint64_t)np;
  poly_trim(bot);
  return bot;
}

// Pointwise playback of the start vector [0, 1] with every z replaced by the
// evaluation point: returns T22(gamma), the bottom-track Bezout polynomial
// evaluated at gamma. One qq per step (the c-update); the gamma scaling of
// the top track multiplies by a classical sweep constant and is part of the
// parallel-evaluation trick, charged nowhere.
inline felt_t dialog_eval(const GF &F, const Dialog &d, felt_t gamma,
                          CostLedger *ledger = nullptr) {
  felt_t top = 0, bot = 1;
  for (const DialogStep &st : d.steps) {
    if (st.swapped) {
      std::swap(top, bot);
      if (ledger) ledger->cswap += 1;
    }
    bot ^= F.mul(st.coeff, top);
    if (ledger) ledger->qq_mult += 1;
    top = F.mul(gamma, top);
  }
  return bot;
}

// Same playback with a derivative track pushed through by the product rule:
// d(gamma*top) = top + gamma*d(top). Returns (T22(gamma), T22'(gamma)) at
// two qq per step.
inline std::pair<felt_t, felt_t> dialog_eval_with_derivative(const GF &F, const Dialog &d,
                                                             felt_t gamma,
                                                             CostLedger *ledger = nullptr) {
  felt_t top = 0, bot = 1, dt = 0, db = 0;
  for (const DialogStep &st : d.steps) {
    if (st.swapped) {
      std::swap(top, bot);
      std::swap(dt, db);
      if (ledger) ledger->cswap += 2;
    }
    bot ^= F.mul(st.coeff, top);
    db ^= F.mul(st.coeff, dt);
    if (ledger) ledger->qq_mult += 2;
    felt_t ntop = F.mul(gamma, top);
    felt_t ndt = (felt_t)(top ^ F.mul(gamma, dt));
    top = ntop;
    dt = ndt;
  }
  return {bot, db};
}

}  // namespace opiw
