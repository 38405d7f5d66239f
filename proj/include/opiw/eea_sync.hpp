#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opiw/ledger.hpp"
#include "opiw/poly.hpp"

namespace opiw {

// Synchronized constant-schedule EEA with explicit Bezout tracking.
//
// The machine keeps two registers of n+1 cells each. A register holds one
// cofactor growing from the low end and one monic-stored remainder (leading
// coefficient implicit) growing from the high end; the in-flight quotient
// lives in the cells freed between them. Every logical iteration runs a
// fixed four-phase schedule whose duration depends only on the degree drops,
// so the cycle count is an identity of the quotient profile, not a timing
// estimate.

enum class SyncMode { Full, Half };

struct CycleTrace {
  // per-iteration quotient degree d_i and remainder degree drop s_i
  std::vector<std::pair<int, int>> steps;
  std::uint64_t T = 0;  // total cycles
  long long D = 0;      // sum of d_i
  long long S = 0;      // sum of s_i
  int k = 0;            // iterations executed
  int d_k = 0;          // last quotient degree
  int peak_cells = 0;   // max single-register occupancy observed

  // the closed form the per-iteration schedule must sum to
  long long closed_form() const { return 3 * D + S - d_k + 2 * (long long)k; }
};

struct SyncResult {
  // full mode
  Poly gcd, u, v;  // A*u + B*v = gcd, gcd monic
  // half mode: first row with deg(remainder) < ell
  Poly sigma, omega;
};

inline std::uint64_t cycle_bound(int n, SyncMode mode) {
  if (n < 1) throw std::invalid_argument("cycle_bound: n must be >= 1");
  if (mode == SyncMode::Full) return 6ull * n - 1;
  return 6ull * (n / 2) + 5;
}

namespace detail {

inline int cells_of_cofactor(const Poly &v) { return poly_is_zero(v) ? 0 : poly_deg(v) + 1; }

// monic storage: the implicit leading coefficient occupies no cell
inline int cells_of_remainder(const Poly &r) { return std::max(poly_deg(r), 0); }

}  // namespace detail

// Runs the machine on deg(A) = n > deg(B) >= 0. Full mode drains to the
// gcd (the zero-remainder division still executes on the fixed schedule, as
// idle work); half mode halts at the first remainder of degree < ell.
//
// Accounting: every cycle performs n quantum-quantum multiplications across
// the register, each iteration's Normalize charges one inversion plus one
// constant multiplication per scaled live cell, and the concurrent Swap
// moves n+1 cell pairs. The B-side cofactor is tracked in-register; the
// A-side cofactor of the full result is reconstructed afterwards from the
// Bezout identity and charged nowhere.
inline std::pair<SyncResult, CycleTrace> sync_eea_run(const GF &F, const Poly &A, const Poly &B,
                                                      SyncMode mode, int ell = 0,
                                                      CostLedger *ledger = nullptr) {
  Poly a = A, b = B;
  poly_trim(a);
  poly_trim(b);
  int n = poly_deg(a);
  if (poly_is_zero(b)) throw std::invalid_argument("sync_eea_run: B = 0");
  if (poly_deg(b) >= n)
    throw std::invalid_argument("sync_eea_run: requires deg A > deg B");
  if (mode == SyncMode::Half && (ell < 0 || ell > n))
    throw std::invalid_argument("sync_eea_run: half mode requires 0 <= ell <= n");

  CycleTrace trace;
  auto see_cells = [&trace](int c) {
    if (c > trace.peak_cells) trace.peak_cells = c;
  };

  // Load: B is normalized monic on entry so every later division sees a
  // monic divisor; the single cofactor cell starts as the scaling unit.
  felt_t lead_inv = felt_inv(F, b[poly_deg(b)], ledger);
  Poly r_prev = a;
  Poly r_cur(b.size());
  for (size_t i = 0; i < b.size(); ++i) r_cur[i] = felt_mul_const(F, b[i], lead_inv, ledger);
  poly_trim(r_cur);
  Poly v_prev = {};
  Poly v_cur = {lead_inv};

  int d_prev = 0;  // d_0 = 0 anchors the first iteration's schedule
  while (true) {
    if (mode == SyncMode::Half && poly_deg(r_cur) < ell) break;
    if (poly_is_zero(r_cur)) break;

    int c_start = detail::cells_of_cofactor(v_prev) + detail::cells_of_remainder(r_prev);
    if (c_start > n + 1) throw std::logic_error("sync_eea_run: register overflow at cycle start");
    see_cells(c_start);

    auto [q, r_new] = poly_divmod(F, r_prev, r_cur);
    int d_i = poly_deg(q);
    int s_i = poly_deg(r_cur) - poly_deg(r_new);  // deg(0) = -1 makes the drain row s = deg+1

    int c_postdiv = detail::cells_of_cofactor(v_prev) + (d_i + 1) +
                    detail::cells_of_remainder(r_cur);
    if (c_postdiv > n + 1)
      throw std::logic_error("sync_eea_run: register overflow after division");
    see_cells(c_postdiv);

    Poly v_new = poly_add(v_prev, poly_mul(F, q, v_cur));

    // Normalize: keep the fresh remainder monic, scaling its stored cells
    // and the paired cofactor.
    if (!poly_is_zero(r_new)) {
      felt_t c = felt_inv(F, r_new[poly_deg(r_new)], ledger);
      for (int i = 0; i < poly_deg(r_new); ++i) r_new[i] = felt_mul_const(F, r_new[i], c, ledger);
      r_new[poly_deg(r_new)] = 1;
      for (felt_t &x : v_new) x = felt_mul_const(F, x, c, ledger);
    }

    // Unified cycle block: Division (d_i+1) + Normalize/Align (s_i) +
    // Bezout playback (d_{i-1}) + update (d_i+1) cycles, n wide each.
    std::uint64_t T_i = (std::uint64_t)(2 * d_i + s_i + d_prev + 2);
    trace.T += T_i;
    if (ledger) {
      ledger->qq_mult += (std::uint64_t)n * T_i;
      ledger->cswap += (std::uint64_t)(n + 1);  // concurrent register swap
    }
    trace.steps.push_back({d_i, s_i});
    trace.D += d_i;
    trace.S += s_i;
    trace.d_k = d_i;
    trace.k += 1;

    // Degree invariants after the swap: (a) the live pair fits the budget,
    // (b) both sequences move strictly, (c) the cofactor/remainder degrees
    // mirror around n.
    if (!poly_is_zero(r_new) && poly_deg(v_new) + poly_deg(r_new) > n)
      throw std::logic_error("sync_eea_run: invariant (a) violated");
    if (poly_deg(r_new) >= poly_deg(r_cur) || poly_deg(v_new) <= poly_deg(v_prev))
      throw std::logic_error("sync_eea_run: invariant (b) violated");
    if (poly_deg(v_new) != n - poly_deg(r_cur))
      throw std::logic_error("sync_eea_run: invariant (c) violated");

    d_prev = d_i;
    r_prev = std::move(r_cur);
    r_cur = std::move(r_new);
    v_prev = std::move(v_cur);
    v_cur = std::move(v_new);
  }

  SyncResult out;
  if (mode == SyncMode::Half) {
    out.omega = r_cur;
    out.sigma = v_cur;
  } else {
    out.gcd = r_prev;
    out.v = v_prev;
    // reconstruct the A-side cofactor classically: u = (gcd - B*v) / A
    auto [u, rem] = poly_divmod(F, poly_add(out.gcd, poly_mul(F, b, out.v)), a);
    if (!poly_is_zero(rem)) throw std::logic_error("sync_eea_run: Bezout reconstruction failed");
    out.u = std::move(u);
  }
  return {std::move(out), std::move(trace)};
}

}  // namespace opiw
