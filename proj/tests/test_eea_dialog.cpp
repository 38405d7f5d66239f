#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "opiw/eea_dialog.hpp"

using namespace opiw;

namespace {

Poly rand_poly(std::mt19937_64 &rng, const GF &F, int deg, bool nonzero_const = false) {
  Poly p(deg + 1);
  for (int i = 0; i <= deg; ++i) p[i] = (felt_t)(rng() % F.q());
  if (deg >= 0) p[deg] = (felt_t)(1 + rng() % (F.q() - 1));
  if (nonzero_const) p[0] = (felt_t)(1 + rng() % (F.q() - 1));
  return p;
}

Poly shift_up(const Poly &p, int k) {
  if (poly_is_zero(p)) return {};
  Poly out(p.size() + k, 0);
  for (size_t i = 0; i < p.size(); ++i) out[i + k] = p[i];
  return out;
}

// scalar u with x == u*y, or -1 if none
int proportionality(const GF &F, const Poly &x, const Poly &y) {
  Poly a = x, b = y;
  poly_trim(a);
  poly_trim(b);
  if (a.empty() && b.empty()) return 1;
  if (a.size() != b.size()) return -1;
  felt_t u = F.mul(a.back(), F.inv(b.back()));
  if (poly_scale(F, b, u) != a) return -1;
  return (int)u;
}

}  // namespace

TEST_CASE("build shape: 2n steps, cell conservation, delta trace") {
  GF F(4);
  std::mt19937_64 rng(21);
  for (int it = 0; it < 100; ++it) {
    int n = 2 + (int)(rng() % 8);
    Poly A = rand_poly(rng, F, n, true);
    Poly B = rand_poly(rng, F, (int)(rng() % n));
    Dialog d = dialog_build(F, A, B);
    CHECK(d.size() == (size_t)(2 * n));
    CHECK(d.delta_trace.size() == d.size());
    CHECK(d.budget == 2 * (n + 1));
    CHECK(poly_is_zero(d.final_b));  // fully drained after 2n steps
    CHECK(!poly_is_zero(d.final_a));
    CHECK(d.peak_live <= d.budget);
    if (d.unit_gcd) CHECK(d.fit_ok);  // register sharing holds on unit-gcd runs
  }
  CHECK_THROWS_AS(dialog_build(F, Poly{0, 1}, Poly{1}), std::invalid_argument);
  CHECK_THROWS_AS(dialog_build(F, Poly{1, 1}, Poly{1}, 100), std::invalid_argument);
}

TEST_CASE("full playback matrix sends [A,B] to the drained buffer") {
  GF F(3);
  std::mt19937_64 rng(22);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + (int)(rng() % 6);
    Poly A = rand_poly(rng, F, n, true);
    Poly B = rand_poly(rng, F, (int)(rng() % n));
    Dialog d = dialog_build(F, A, B);
    auto t = dialog_matrix(F, d);
    int s = (int)d.size();
    Poly top = poly_add(poly_mul(F, t[0][0], A), poly_mul(F, t[0][1], B));
    Poly bot = poly_add(poly_mul(F, t[1][0], A), poly_mul(F, t[1][1], B));
    REQUIRE(top == shift_up(d.final_a, s));
    REQUIRE(poly_is_zero(bot));

    // drained a-track is the gcd up to a unit
    auto rows = classical_eea(F, A, B);
    const Poly &g = rows[rows.size() - 2].r;
    REQUIRE(proportionality(F, d.final_a, g) > 0);
  }
}

TEST_CASE("bottom row of the playback matrix is the zero-row cofactor pair") {
  GF F(4);
  std::mt19937_64 rng(23);
  int checked = 0;
  while (checked < 200) {
    int n = 2 + (int)(rng() % 6);
    Poly A = rand_poly(rng, F, n, true);
    Poly B = rand_poly(rng, F, (int)(rng() % n));
    if (poly_is_zero(B)) continue;
    Dialog d = dialog_build(F, A, B);
    auto t = dialog_matrix(F, d);
    auto rows = classical_eea(F, A, B);
    const EEATriple &zr = rows.back();
    REQUIRE(poly_is_zero(zr.r));
    int u_of_v = proportionality(F, t[1][1], zr.v);
    int u_of_u = proportionality(F, t[1][0], zr.u);
    REQUIRE(u_of_v > 0);
    REQUIRE(u_of_u == u_of_v);  // one common unit for the pair
    ++checked;
  }
}

TEST_CASE("prefix playback reconstructs every intermediate buffer") {
  GF F(3);
  std::mt19937_64 rng(24);
  for (int it = 0; it < 60; ++it) {
    int n = 2 + (int)(rng() % 5);
    Poly A = rand_poly(rng, F, n, true);
    Poly B = rand_poly(rng, F, (int)(rng() % n));
    Dialog d = dialog_build(F, A, B);
    for (int i = 0; i <= (int)d.size(); ++i) {
      Dialog pre = dialog_build(F, A, B, i);
      for (int s = 0; s < i; ++s) {
        REQUIRE(pre.steps[s].swapped == d.steps[s].swapped);
        REQUIRE(pre.steps[s].coeff == d.steps[s].coeff);
      }
      auto t = dialog_matrix(F, d, i);
      Poly top = poly_add(poly_mul(F, t[0][0], A), poly_mul(F, t[0][1], B));
      Poly bot = poly_add(poly_mul(F, t[1][0], A), poly_mul(F, t[1][1], B));
      REQUIRE(top == shift_up(pre.final_a, i));
      REQUIRE(bot == shift_up(pre.final_b, i));
    }
  }
}

TEST_CASE("dialog division inverts and multiplies in one playback") {
  std::mt19937_64 rng(25);
  for (int it = 0; it < 150; ++it) {
    GF F(3 + (int)(rng() % 2));
    int n = 2 + (int)(rng() % 5);
    Poly P, B;
    while (true) {
      P = rand_poly(rng, F, n, true);
      B = rand_poly(rng, F, (int)(rng() % n));
      if (poly_is_zero(B)) continue;
      if (poly_deg(classical_eea(F, P, B)[classical_eea(F, P, B).size() - 2].r) == 0) break;
    }
    Dialog d = dialog_build(F, P, B);
    REQUIRE(d.unit_gcd);

    Poly C = rand_poly(rng, F, (int)(rng() % n));

    // oracle: C * B^{-1} mod P from the textbook table
    auto rows = classical_eea(F, P, B);
    const EEATriple &g = rows[rows.size() - 2];
    Poly binv = poly_scale(F, g.v, F.inv(g.r[0]));
    Poly want = poly_divmod(F, poly_mul(F, C, binv), P).second;
    REQUIRE(dialog_div(F, d, C, P) == want);

    // trivials and linearity
    REQUIRE(dialog_div(F, d, B, P) == Poly{1});
    REQUIRE(dialog_div(F, d, Poly{}, P).empty());
    felt_t sc = (felt_t)(1 + rng() % (F.q() - 1));
    REQUIRE(dialog_div(F, d, poly_scale(F, C, sc), P) == poly_scale(F, want, sc));

    // multiplication and the round trip
    Poly prod = poly_divmod(F, poly_mul(F, B, C), P).second;
    REQUIRE(dialog_mul(F, d, C, P) == prod);
    REQUIRE(dialog_mul(F, d, Poly{1}, P) == poly_divmod(F, B, P).second);
    REQUIRE(dialog_mul(F, d, dialog_div(F, d, C, P), P) == poly_divmod(F, C, P).second);
  }
}

TEST_CASE("non-unit gcd is flagged and playback refuses") {
  GF F(3);
  // P = (z+1)*(z^2+z+1), B = (z+1)*z share the factor z+1
  Poly common{1, 1};
  Poly P = poly_mul(F, common, Poly{1, 1, 1});
  Poly B = poly_mul(F, common, Poly{0, 1});
  Dialog d = dialog_build(F, P, B);
  CHECK(!d.unit_gcd);
  CHECK_THROWS_AS(dialog_div(F, d, Poly{1}, P), std::domain_error);
  CHECK_THROWS_AS(dialog_mul(F, d, Poly{1}, P), std::domain_error);
}

TEST_CASE("pointwise playback equals evaluating the bottom-right entry") {
  GF F(4);
  std::mt19937_64 rng(26);
  for (int it = 0; it < 100; ++it) {
    int n = 2 + (int)(rng() % 5);
    Poly A = rand_poly(rng, F, n, true);
    Poly B = rand_poly(rng, F, (int)(rng() % n));
    Dialog d = dialog_build(F, A, B);
    auto t = dialog_matrix(F, d);
    const Poly &t22 = t[1][1];
    Poly dt22 = poly_derivative(t22);
    for (felt_t g = 0; g < (felt_t)F.q(); ++g) {
      REQUIRE(dialog_eval(F, d, g) == poly_eval(F, t22, g));
      auto [v, dv] = dialog_eval_with_derivative(F, d, g);
      REQUIRE(v == poly_eval(F, t22, g));
      REQUIRE(dv == poly_eval(F, dt22, g));
    }
    CHECK(dialog_eval(F, d, 0) == (t22.empty() ? 0 : t22[0]));
  }
}

TEST_CASE("playback ledgers follow the per-step schedule") {
  GF F(4);
  std::mt19937_64 rng(27);
  int n = 6;
  Poly A = rand_poly(rng, F, n, true);
  Poly B = rand_poly(rng, F, n - 1);
  Dialog d = dialog_build(F, A, B);

  CostLedger le;
  dialog_eval(F, d, 7, &le);
  CHECK(le.qq_mult == d.size());
  CHECK(le.gf_inverse == 0);
  CHECK(le.qc_mult == 0);

  CostLedger ld;
  dialog_eval_with_derivative(F, d, 7, &ld);
  CHECK(ld.qq_mult == 2 * d.size());
  CHECK(ld.gf_inverse == 0);
}

TEST_CASE("build ledger stays within the quadratic budget") {
  std::mt19937_64 rng(28);
  for (int b : {3, 10}) {
    GF F(b);
    for (int n : {4, 8, 16, 32}) {
      Poly A = rand_poly(rng, F, n, true);
      Poly B = rand_poly(rng, F, n - 1);
      CostLedger lg;
      Dialog d = dialog_build(F, A, B, -1, &lg);
      CHECK(lg.qq_mult <= (std::uint64_t)(n * n + 10 * n + 10));
      CHECK(lg.gf_inverse == d.size());  // one inversion per step, oblivious
    }
  }
}
