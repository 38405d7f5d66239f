#pragma once
// Syndrome decoding of Reed-Solomon codes: solve the key equation
// sigma(z)*S(z) = Omega(z) mod z^(2*ell) with either EEA architecture, locate
// errors by a Chien sweep, read values off Forney's quotient. Every quantum
// arithmetic charge goes through the cost ledger; the two architectures keep
// the locator either as an explicit coefficient register or as a recorded
// divstep dialog replayed pointwise.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opiw/eea_dialog.hpp"
#include "opiw/eea_sync.hpp"
#include "opiw/gf.hpp"
#include "opiw/ledger.hpp"
#include "opiw/poly.hpp"

namespace opiw {

// Block length m over the nonzero field elements, syndrome length n,
// correction radius ell = n/2. eval_points[j-1] is the point of location j,
// fixed as consecutive generator powers starting at 1.
struct RSCode {
  int m = 0;
  int n = 0;
  int ell = 0;
  std::vector<felt_t> eval_points;
};

inline RSCode rs_code(const GF &F, int m, int n) {
  if (m < 1 || (unsigned)m > F.q() - 1)
    throw std::invalid_argument("rs_code: block length needs m distinct nonzero points");
  if (n < 1 || n > m) throw std::invalid_argument("rs_code: syndrome length out of range");
  RSCode code;
  code.m = m;
  code.n = n;
  code.ell = n / 2;
  code.eval_points.resize(m);
  felt_t g = F.generator(), p = 1;
  for (int j = 0; j < m; ++j) {
    code.eval_points[j] = p;
    p = F.mul(p, g);
  }
  return code;
}

// Sparse error pattern: location j in [1..m] -> nonzero value.
using ErrorPattern = std::map<int, felt_t>;

// s_k = sum_j e_j * gamma_j^k for k = 0..n-1. This prepares the decoder's
// input register and is not part of the decoding ledger.
inline Poly syndrome_compute(const GF &F, const RSCode &code, const ErrorPattern &e) {
  Poly S(code.n, 0);
  for (const auto &[j, v] : e) {
    if (j < 1 || j > code.m) throw std::invalid_argument("syndrome_compute: location out of range");
    if (v == 0) throw std::invalid_argument("syndrome_compute: error values must be nonzero");
    felt_t p = v;
    for (int k = 0; k < code.n; ++k) {
      S[k] ^= p;
      p = F.mul(p, code.eval_points[j - 1]);
    }
  }
  poly_trim(S);
  return S;
}

enum class RsMode { Explicit, Implicit };

// Solved key equation. Both modes report the canonical pair (sigma(0) = 1);
// the implicit mode additionally carries the dialog whose playback stands in
// for sigma, with wt_hat the degree of the played-back bottom track.
struct KeyEquation {
  RsMode mode = RsMode::Explicit;
  int ell = 0;
  Poly sigma;
  Poly omega;
  Dialog dialog;
  bool have_dialog = false;
  int wt_hat = 0;
};

namespace detail {

// Horner over a fixed cell window: cells-1 constant multiplications are
// charged no matter which cells happen to hold zero.
inline felt_t window_eval(const GF &F, const Poly &p, std::size_t cells, felt_t x,
                          CostLedger *ledger = nullptr) {
  std::size_t w = std::max(cells, p.size());
  felt_t acc = 0;
  for (std::size_t i = w; i-- > 0;) {
    if (i + 1 < w) acc = felt_mul_const(F, acc, x, ledger);
    if (i < p.size()) acc ^= p[i];
  }
  return acc;
}

// Joint locator evaluation via the even/odd split: sigma(x) = E(x^2) + x*O(x^2)
// and sigma'(x) = O(x^2) in characteristic 2. Squarings are Frobenius (linear,
// free), so the pair costs exactly deg(sigma) constant multiplications.
inline std::pair<felt_t, felt_t> locator_pair_eval(const GF &F, const Poly &sigma, felt_t x,
                                                   CostLedger *ledger = nullptr) {
  int d = poly_deg(sigma);
  if (d < 1) return {d == 0 ? sigma[0] : (felt_t)0, 0};
  Poly even, odd;
  for (int i = 0; i <= d; ++i) (i % 2 ? odd : even).push_back(sigma[i]);
  felt_t x2 = F.mul(x, x);
  felt_t ev = window_eval(F, even, even.size(), x2, ledger);
  felt_t ov = window_eval(F, odd, odd.size(), x2, ledger);
  return {(felt_t)(ev ^ felt_mul_const(F, ov, x, ledger)), ov};
}

// Pseudo-inverse: the inversion circuit runs unconditionally, zero stays zero.
inline felt_t inv0(const GF &F, felt_t v, CostLedger *ledger = nullptr) {
  if (v == 0) {
    if (ledger) ledger->gf_inverse += 1;
    return 0;
  }
  return felt_inv(F, v, ledger);
}

}  // namespace detail

// Runs the EEA on (z^(2*ell), S) to the first remainder of degree < ell.
// Explicit mode holds the half-run's cofactor/remainder pair in registers and
// rescales it so sigma(0) = 1. Implicit mode records the divstep dialog of
// the reversed syndrome window; its bottom-track playback polynomial equals
// rev(sigma) up to one unit, and the final buffer cells hold Omega reversed
// over the locator-degree window (deg sigma - 1) times the same unit. The
// canonical pair is reconstructed off-ledger for reporting while decoding
// works on the raw cells.
inline KeyEquation solve_key_equation(const GF &F, const Poly &S_in, int ell, RsMode mode,
                                      CostLedger *ledger = nullptr) {
  if (ell < 0) throw std::invalid_argument("solve_key_equation: ell must be >= 0");
  int ne = 2 * ell;
  Poly S = S_in;
  poly_trim(S);
  if (poly_deg(S) >= ne)
    throw std::invalid_argument("solve_key_equation: syndrome degree must be < 2*ell");

  KeyEquation ke;
  ke.mode = mode;
  ke.ell = ell;
  if (poly_is_zero(S)) {  // null syndrome: nothing to locate
    ke.sigma = {1};
    return ke;
  }

  if (mode == RsMode::Explicit) {
    Poly A(ne + 1, 0);
    A[ne] = 1;
    SyncResult res = sync_eea_run(F, A, S, SyncMode::Half, ell, ledger).first;
    Poly sg = res.sigma, om = res.omega;
    felt_t c0 = sg.empty() ? 0 : sg[0];
    if (c0 != 0) {  // degenerate inputs skip the rescale and fail verification later
      felt_t ci = felt_inv(F, c0, ledger);
      sg[0] = 1;
      for (std::size_t i = 1; i < sg.size(); ++i) sg[i] = felt_mul_const(F, sg[i], ci, ledger);
      for (felt_t &x : om) x = felt_mul_const(F, x, ci, ledger);
    }
    poly_trim(sg);
    poly_trim(om);
    ke.sigma = sg;
    ke.omega = om;
    return ke;
  }

  // Reversed syndrome, full n-cell window: the register keeps its zero cells.
  Poly g(ne, 0);
  for (std::size_t i = 0; i < S.size(); ++i) g[ne - 1 - i] = S[i];
  ke.dialog = dialog_build(F, Poly{1}, g, ne, ledger);
  ke.have_dialog = true;

  Poly t22 = dialog_matrix(F, ke.dialog)[1][1];
  poly_trim(t22);
  ke.wt_hat = std::max(poly_deg(t22), 0);
  if (!poly_is_zero(t22)) {
    felt_t ui = F.inv(t22[poly_deg(t22)]);
    Poly sg(t22.rbegin(), t22.rend());
    for (felt_t &x : sg) x = F.mul(x, ui);
    poly_trim(sg);
    ke.sigma = sg;
    Poly fb = ke.dialog.final_b;
    std::size_t w = std::max<std::size_t>(fb.size(), ke.wt_hat);
    fb.resize(w, 0);
    Poly om(fb.rbegin(), fb.rend());
    for (felt_t &x : om) x = F.mul(x, ui);
    poly_trim(om);
    ke.omega = om;
  } else {
    ke.sigma = {1};
  }
  return ke;
}

// { j : sigma(gamma_j^-1) = 0 }. Explicit mode sweeps the locator register at
// deg(sigma) constant multiplications per point (the even/odd split, which
// also yields the derivative); implicit mode replays the dialog with its
// derivative track at 2 qq per step per point. Roots of the played-back
// reversed locator sit at gamma_j directly.
inline std::vector<int> chien_search(const GF &F, const KeyEquation &ke, const RSCode &code,
                                     CostLedger *ledger = nullptr) {
  std::vector<int> roots;
  if (ke.mode == RsMode::Implicit) {
    if (!ke.have_dialog) return roots;
    for (int j = 1; j <= code.m; ++j)
      if (dialog_eval_with_derivative(F, ke.dialog, code.eval_points[j - 1], ledger).first == 0)
        roots.push_back(j);
    return roots;
  }
  for (int j = 1; j <= code.m; ++j) {
    felt_t x = F.inv(code.eval_points[j - 1]);  // classical sweep constant
    if (detail::locator_pair_eval(F, ke.sigma, x, ledger).first == 0) roots.push_back(j);
  }
  return roots;
}

// Error value at a located position. Explicit: e_j = gamma_j * Omega(x) /
// sigma'(x) at x = gamma_j^-1; the gamma_j factor is the k=0 syndrome
// convention (-1 = 1 in characteristic 2). Implicit: the final buffer cells
// evaluated over the fixed ell-cell window (their content ends below the
// locator degree, so the top cells read zero) divided by the playback
// derivative. The shared unit cancels in the quotient and the reversal
// supplies the convention factor by itself, so no correction is applied.
// A zero derivative marks a malformed locator; the quotient then reads 0.
inline felt_t forney(const GF &F, const KeyEquation &ke, int j, const RSCode &code,
                     CostLedger *ledger = nullptr) {
  if (j < 1 || j > code.m) throw std::invalid_argument("forney: location out of range");
  felt_t gamma = code.eval_points[j - 1];
  if (ke.mode == RsMode::Explicit) {
    felt_t x = F.inv(gamma);
    felt_t dv = detail::locator_pair_eval(F, ke.sigma, x, ledger).second;
    felt_t ov = detail::window_eval(F, ke.omega, ke.omega.size(), x, ledger);
    ov = felt_mul_const(F, ov, gamma, ledger);
    return felt_mul(F, ov, detail::inv0(F, dv, ledger), ledger);
  }
  if (!ke.have_dialog) return 0;
  felt_t dv = dialog_eval_with_derivative(F, ke.dialog, gamma, ledger).second;
  felt_t fbv = detail::window_eval(F, ke.dialog.final_b, ke.ell, gamma, ledger);
  return felt_mul(F, fbv, detail::inv0(F, dv, ledger), ledger);
}

struct DecodeResult {
  ErrorPattern pattern;
  bool ok = false;  // recomputed syndrome reproduced the input register
  KeyEquation key;
};

// Full pipeline. The per-point loop is oblivious: every location evaluates
// the locator pair and the Forney quotient on the fixed schedule, and the
// root indicator only gates which results enter the pattern. Syndrome
// recomputation for the verification flag is a classical post-check, charged
// nowhere.
inline DecodeResult rs_decode(const GF &F, const RSCode &code, const Poly &S, RsMode mode,
                              CostLedger *ledger = nullptr) {
  Poly Sfull = S;
  poly_trim(Sfull);
  if (poly_deg(Sfull) >= code.n)
    throw std::invalid_argument("rs_decode: syndrome exceeds the register");
  Poly Skey = Sfull;
  if (Skey.size() > (std::size_t)(2 * code.ell)) Skey.resize(2 * code.ell);

  DecodeResult out;
  out.key = solve_key_equation(F, Skey, code.ell, mode, ledger);
  const KeyEquation &ke = out.key;

  bool trivial = (mode == RsMode::Explicit) ? (poly_deg(ke.sigma) < 1) : !ke.have_dialog;
  if (!trivial && mode == RsMode::Explicit) {
    for (int j = 1; j <= code.m; ++j) {
      felt_t gamma = code.eval_points[j - 1];
      felt_t x = F.inv(gamma);  // classical sweep constant
      auto [sv, dv] = detail::locator_pair_eval(F, ke.sigma, x, ledger);
      felt_t ov = detail::window_eval(F, ke.omega, ke.omega.size(), x, ledger);
      ov = felt_mul_const(F, ov, gamma, ledger);
      felt_t e = felt_mul(F, ov, detail::inv0(F, dv, ledger), ledger);
      if (sv == 0 && e != 0) out.pattern[j] = e;
    }
  } else if (!trivial) {
    for (int j = 1; j <= code.m; ++j) {
      felt_t gamma = code.eval_points[j - 1];
      auto [v, dv] = dialog_eval_with_derivative(F, ke.dialog, gamma, ledger);
      felt_t fbv = detail::window_eval(F, ke.dialog.final_b, ke.ell, gamma, ledger);
      felt_t e = felt_mul(F, fbv, detail::inv0(F, dv, ledger), ledger);
      if (v == 0 && e != 0) out.pattern[j] = e;
    }
  }

  out.ok = (syndrome_compute(F, code, out.pattern) == Sfull);
  return out;
}

}  // namespace opiw
