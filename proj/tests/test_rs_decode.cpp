#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "opiw/rs_decode.hpp"

using namespace opiw;

namespace {

ErrorPattern random_pattern(std::mt19937_64 &rng, int m, int wt, unsigned q) {
  ErrorPattern e;
  while ((int)e.size() < wt) {
    int j = 1 + (int)(rng() % m);
    e[j] = (felt_t)(1 + rng() % (q - 1));
  }
  return e;
}

// symmetric difference with value xor: the group law of sparse patterns
ErrorPattern pattern_xor(const ErrorPattern &a, const ErrorPattern &b) {
  ErrorPattern out = a;
  for (const auto &[j, v] : b) {
    felt_t nv = v;
    auto it = out.find(j);
    if (it != out.end()) {
      nv = (felt_t)(it->second ^ v);
      out.erase(it);
    }
    if (nv) out[j] = nv;
  }
  return out;
}

std::vector<int> locations_of(const ErrorPattern &e) {
  std::vector<int> out;
  for (const auto &[j, v] : e) out.push_back(j);
  return out;
}

Poly low_coeffs(const GF &F, const Poly &p, const Poly &q, int window) {
  Poly prod = poly_mul(F, p, q);
  if ((int)prod.size() > window) prod.resize(window);
  poly_trim(prod);
  return prod;
}

}  // namespace

TEST_CASE("evaluation points are consecutive generator powers") {
  GF F(4);
  RSCode code = rs_code(F, 15, 4);
  REQUIRE(code.ell == 2);
  REQUIRE(code.eval_points.size() == 15);
  CHECK(code.eval_points[0] == 1);
  felt_t g = F.generator();
  std::vector<bool> seen(F.q(), false);
  for (int j = 1; j <= 15; ++j) {
    felt_t p = code.eval_points[j - 1];
    CHECK(p == F.pow(g, j - 1));
    CHECK_FALSE(seen[p]);
    seen[p] = true;
  }
  CHECK_THROWS_AS(rs_code(F, 16, 4), std::invalid_argument);
  CHECK_THROWS_AS(rs_code(F, 15, 16), std::invalid_argument);
  CHECK_THROWS_AS(rs_code(F, 0, 1), std::invalid_argument);
}

TEST_CASE("syndrome: empty pattern, one-term sums, linearity") {
  GF F(5);
  RSCode code = rs_code(F, 31, 8);

  CHECK(poly_is_zero(syndrome_compute(F, code, {})));

  std::mt19937_64 rng(101);
  for (int t = 0; t < 50; ++t) {
    int j = 1 + (int)(rng() % code.m);
    felt_t v = (felt_t)(1 + rng() % (F.q() - 1));
    Poly S = syndrome_compute(F, code, {{j, v}});
    S.resize(code.n, 0);
    for (int k = 0; k < code.n; ++k)
      CHECK(S[k] == F.mul(v, F.pow(code.eval_points[j - 1], k)));
  }

  for (int t = 0; t < 200; ++t) {
    ErrorPattern e1 = random_pattern(rng, code.m, (int)(rng() % 5), F.q());
    ErrorPattern e2 = random_pattern(rng, code.m, (int)(rng() % 5), F.q());
    Poly lhs = syndrome_compute(F, code, pattern_xor(e1, e2));
    Poly rhs = poly_add(syndrome_compute(F, code, e1), syndrome_compute(F, code, e2));
    CHECK(lhs == rhs);
  }

  CHECK_THROWS_AS(syndrome_compute(F, code, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(syndrome_compute(F, code, {{32, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(syndrome_compute(F, code, {{3, 0}}), std::invalid_argument);
}

TEST_CASE("key equation: weight-1 closed form") {
  std::mt19937_64 rng(202);
  for (int b : {3, 4, 8}) {
    GF F(b);
    int m = (int)F.q() - 1;
    RSCode code = rs_code(F, m, std::min(8, m & ~1));
    for (int t = 0; t < 30; ++t) {
      int j = 1 + (int)(rng() % m);
      felt_t v = (felt_t)(1 + rng() % (F.q() - 1));
      Poly S = syndrome_compute(F, code, {{j, v}});
      for (RsMode mode : {RsMode::Explicit, RsMode::Implicit}) {
        KeyEquation ke = solve_key_equation(F, S, code.ell, mode);
        REQUIRE(poly_deg(ke.sigma) == 1);
        CHECK(ke.sigma[0] == 1);
        CHECK(poly_eval(F, ke.sigma, F.inv(code.eval_points[j - 1])) == 0);
        CHECK(ke.omega == Poly{v});
      }
    }
  }
}

TEST_CASE("key equation: congruence, degree caps, cross-mode equality") {
  GF F(4);
  int m = 15;
  std::mt19937_64 rng(303);
  for (int t = 0; t < 1000; ++t) {
    int n = 2 * (1 + (int)(rng() % 5));
    RSCode code = rs_code(F, m, n);
    int wt = (int)(rng() % (code.ell + 1));
    ErrorPattern e = random_pattern(rng, m, wt, F.q());
    Poly S = syndrome_compute(F, code, e);

    KeyEquation ex = solve_key_equation(F, S, code.ell, RsMode::Explicit);
    KeyEquation im = solve_key_equation(F, S, code.ell, RsMode::Implicit);

    CHECK(ex.sigma == im.sigma);
    CHECK(ex.omega == im.omega);
    CHECK(poly_deg(ex.sigma) <= code.ell);
    CHECK(poly_deg(ex.omega) < code.ell);
    REQUIRE_FALSE(ex.sigma.empty());
    CHECK(ex.sigma[0] == 1);
    // sigma * S = Omega mod z^(2 ell)
    CHECK(low_coeffs(F, ex.sigma, S, 2 * code.ell) == ex.omega);
    if (im.have_dialog) {
      CHECK(im.dialog.fit_ok);
      CHECK(im.dialog.peak_live <= im.dialog.budget);
      CHECK(im.wt_hat == poly_deg(im.sigma));
    }
  }
}

TEST_CASE("chien search returns exactly the planted locations in both modes") {
  GF F(8);
  RSCode code = rs_code(F, 255, 16);
  std::mt19937_64 rng(404);

  KeyEquation trivial = solve_key_equation(F, {}, code.ell, RsMode::Implicit);
  CHECK(chien_search(F, trivial, code).empty());

  for (int t = 0; t < 50; ++t) {
    int wt = (int)(rng() % (code.ell + 1));
    ErrorPattern e = random_pattern(rng, code.m, wt, F.q());
    Poly S = syndrome_compute(F, code, e);
    KeyEquation ex = solve_key_equation(F, S, code.ell, RsMode::Explicit);
    KeyEquation im = solve_key_equation(F, S, code.ell, RsMode::Implicit);
    std::vector<int> re = chien_search(F, ex, code);
    std::vector<int> ri = chien_search(F, im, code);
    CHECK(re == locations_of(e));
    CHECK(ri == re);
  }
}

TEST_CASE("forney reads back the planted values") {
  std::mt19937_64 rng(505);
  for (int b : {4, 8, 10}) {
    GF F(b);
    int m = (int)F.q() - 1;
    RSCode code = rs_code(F, m, std::min(16, m / 2 * 2));
    for (int t = 0; t < 25; ++t) {
      int wt = 1 + (int)(rng() % code.ell);
      ErrorPattern e = random_pattern(rng, m, wt, F.q());
      Poly S = syndrome_compute(F, code, e);
      for (RsMode mode : {RsMode::Explicit, RsMode::Implicit}) {
        KeyEquation ke = solve_key_equation(F, S, code.ell, mode);
        for (const auto &[j, v] : e) CHECK(forney(F, ke, j, code) == v);
      }
    }
  }
}

TEST_CASE("decode round trip: exhaustive tiny codes") {
  {
    GF F(3);
    RSCode code = rs_code(F, 7, 2);
    for (RsMode mode : {RsMode::Explicit, RsMode::Implicit}) {
      DecodeResult r0 = rs_decode(F, code, syndrome_compute(F, code, {}), mode);
      CHECK(r0.ok);
      CHECK(r0.pattern.empty());
      for (int j = 1; j <= 7; ++j)
        for (felt_t v = 1; v < F.q(); ++v) {
          ErrorPattern e = {{j, v}};
          DecodeResult r = rs_decode(F, code, syndrome_compute(F, code, e), mode);
          CHECK(r.ok);
          CHECK(r.pattern == e);
        }
    }
  }
  {
    GF F(4);
    RSCode code = rs_code(F, 15, 4);
    for (int j1 = 1; j1 <= 15; ++j1)
      for (felt_t v1 = 1; v1 < F.q(); ++v1)
        for (int j2 = j1 + 1; j2 <= 15; ++j2)
          for (felt_t v2 = 1; v2 < F.q(); ++v2) {
            ErrorPattern e = {{j1, v1}, {j2, v2}};
            Poly S = syndrome_compute(F, code, e);
            DecodeResult ex = rs_decode(F, code, S, RsMode::Explicit);
            DecodeResult im = rs_decode(F, code, S, RsMode::Implicit);
            CHECK(ex.ok);
            CHECK(ex.pattern == e);
            CHECK(im.ok);
            CHECK(im.pattern == e);
          }
  }
}

TEST_CASE("decode round trip: randomized plant and recover") {
  std::mt19937_64 rng(606);
  const std::pair<int, int> fields[] = {{63, 6}, {255, 8}, {1023, 10}};
  for (auto [m, b] : fields) {
    GF F(b);
    for (int n : {8, 16, 32}) {
      RSCode code = rs_code(F, m, n);
      for (int t = 0; t < 150; ++t) {
        int wt = (int)(rng() % (code.ell + 1));
        ErrorPattern e = random_pattern(rng, m, wt, F.q());
        Poly S = syndrome_compute(F, code, e);
        DecodeResult ex = rs_decode(F, code, S, RsMode::Explicit);
        DecodeResult im = rs_decode(F, code, S, RsMode::Implicit);
        REQUIRE(ex.ok);
        REQUIRE(ex.pattern == e);
        REQUIRE(im.ok);
        REQUIRE(im.pattern == e);
        if (im.key.have_dialog) {
          CHECK(im.key.dialog.fit_ok);
          CHECK(im.key.dialog.peak_live <= im.key.dialog.budget);
        }
      }
    }
  }
}

TEST_CASE("decode is the unique minimum-weight explanation at the radius") {
  GF F(4);
  RSCode code = rs_code(F, 15, 4);
  std::mt19937_64 rng(707);
  for (int t = 0; t < 30; ++t) {
    ErrorPattern e = random_pattern(rng, 15, 2, F.q());
    Poly S = syndrome_compute(F, code, e);
    // brute force over every pattern of weight <= 2 with the same syndrome
    int matches = 0;
    for (int j1 = 1; j1 <= 15; ++j1)
      for (felt_t v1 = 1; v1 < F.q(); ++v1) {
        if (syndrome_compute(F, code, {{j1, v1}}) == S) ++matches;
        for (int j2 = j1 + 1; j2 <= 15; ++j2)
          for (felt_t v2 = 1; v2 < F.q(); ++v2)
            if (syndrome_compute(F, code, {{j1, v1}, {j2, v2}}) == S) ++matches;
      }
    CHECK(matches == 1);
    CHECK(rs_decode(F, code, S, RsMode::Explicit).pattern == e);
    CHECK(rs_decode(F, code, S, RsMode::Implicit).pattern == e);
  }
}

TEST_CASE("beyond-radius syndromes decode consistently with the flag") {
  GF F(5);
  RSCode code = rs_code(F, 31, 8);
  std::mt19937_64 rng(808);
  int flagged = 0;
  for (int t = 0; t < 200; ++t) {
    ErrorPattern e = random_pattern(rng, 31, code.ell + 1, F.q());
    Poly S = syndrome_compute(F, code, e);
    for (RsMode mode : {RsMode::Explicit, RsMode::Implicit}) {
      DecodeResult r = rs_decode(F, code, S, mode);
      if (r.ok) {
        CHECK(syndrome_compute(F, code, r.pattern) == S);
        CHECK(r.pattern != e);  // the planted pattern is outside the radius
      } else {
        ++flagged;
      }
    }
  }
  CHECK(flagged > 0);
}

TEST_CASE("ledger windows at the reference block") {
  GF F(8);
  RSCode code = rs_code(F, 255, 32);
  std::mt19937_64 rng(909);
  ErrorPattern e = random_pattern(rng, 255, 16, F.q());
  Poly S = syndrome_compute(F, code, e);

  const std::uint64_t m = 255, n = 32;

  CostLedger ex;
  DecodeResult rex = rs_decode(F, code, S, RsMode::Explicit, &ex);
  REQUIRE(rex.ok);
  CHECK(ex.qq_mult >= 3 * n * n);
  CHECK(ex.qq_mult <= 3 * n * n + 20 * n);
  CHECK(ex.qc_mult >= m * n - m * n / 10);
  CHECK(ex.qc_mult <= m * n + m * n / 10);
  CHECK(ex.gf_inverse >= m);
  CHECK(ex.gf_inverse <= m + 2 * n);

  CostLedger im;
  DecodeResult rim = rs_decode(F, code, S, RsMode::Implicit, &im);
  REQUIRE(rim.ok);
  std::uint64_t center = 2 * m * n + n * n;
  CHECK(im.qq_mult >= center - 20 * (m + n));
  CHECK(im.qq_mult <= center + 20 * (m + n));
  CHECK(im.qc_mult >= m * n / 2 - m * n / 20);
  CHECK(im.qc_mult <= m * n / 2 + m * n / 20);
  CHECK(im.gf_inverse == m + n);

  // mode ordering on a second block: the dialog pipeline buys its space
  // savings with qq work, the explicit pipeline pays in qc sweeps
  GF F6(6);
  RSCode c6 = rs_code(F6, 63, 16);
  ErrorPattern e6 = random_pattern(rng, 63, 8, F6.q());
  Poly S6 = syndrome_compute(F6, c6, e6);
  CostLedger ex6, im6;
  REQUIRE(rs_decode(F6, c6, S6, RsMode::Explicit, &ex6).ok);
  REQUIRE(rs_decode(F6, c6, S6, RsMode::Implicit, &im6).ok);
  CHECK(im6.qq_mult > ex6.qq_mult);
  CHECK(ex6.qc_mult > im6.qc_mult);
}

TEST_CASE("leading-order ratios hold as the block grows") {
  std::mt19937_64 rng(1010);
  const std::tuple<int, int, int> blocks[] = {{63, 6, 16}, {63, 6, 32}, {255, 8, 32}};
  for (auto [m, b, n] : blocks) {
    GF F(b);
    RSCode code = rs_code(F, m, n);
    ErrorPattern e = random_pattern(rng, m, code.ell, F.q());
    Poly S = syndrome_compute(F, code, e);
    CostLedger ex, im;
    REQUIRE(rs_decode(F, code, S, RsMode::Explicit, &ex).ok);
    REQUIRE(rs_decode(F, code, S, RsMode::Implicit, &im).ok);
    double rex = (double)ex.qq_mult / ((double)n * n);
    double rim = (double)im.qq_mult / (2.0 * m * n + (double)n * n);
    CHECK(rex > 2.4);
    CHECK(rex < 3.6);
    CHECK(rim > 0.8);
    CHECK(rim < 1.2);
  }
}

TEST_CASE("decoder rejects malformed inputs") {
  GF F(4);
  RSCode code = rs_code(F, 15, 4);
  Poly big(5, 0);
  big[4] = 1;
  CHECK_THROWS_AS(rs_decode(F, code, big, RsMode::Explicit), std::invalid_argument);
  CHECK_THROWS_AS(solve_key_equation(F, Poly{1, 1, 1, 1, 1}, 2, RsMode::Explicit),
                  std::invalid_argument);
  KeyEquation ke = solve_key_equation(F, Poly{1, 1}, 2, RsMode::Explicit);
  CHECK_THROWS_AS(forney(F, ke, 0, code), std::invalid_argument);
  CHECK_THROWS_AS(forney(F, ke, 16, code), std::invalid_argument);
}
