#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "opiw/poly.hpp"

using namespace opiw;

namespace {

Poly random_poly(std::mt19937_64 &rng, const GF &F, int max_deg, bool nonzero = false) {
  std::uniform_int_distribution<int> dd(nonzero ? 0 : -1, max_deg);
  int d = dd(rng);
  Poly p;
  if (d < 0) return p;
  p.resize(d + 1);
  for (int i = 0; i <= d; ++i) p[i] = (felt_t)(rng() % F.q());
  if (p[d] == 0) p[d] = 1;
  return p;
}

felt_t pow_gamma(const GF &F, felt_t g, unsigned e) {
  felt_t acc = 1, base = g;
  while (e) {
    if (e & 1) acc = F.mul(acc, base);
    base = F.sqr(base);
    e >>= 1;
  }
  return acc;
}

}  // namespace

TEST_CASE("poly_add is coefficientwise xor, canonical") {
  GF F(4);
  std::mt19937_64 rng(1);
  for (int it = 0; it < 200; ++it) {
    Poly p = random_poly(rng, F, 8), q = random_poly(rng, F, 8);
    Poly s = poly_add(p, q);
    CHECK(poly_is_zero(poly_add(p, p)));
    CHECK(poly_add(p, Poly{}) == p);
    for (size_t i = 0; i < std::max(p.size(), q.size()); ++i) {
      felt_t want = (felt_t)((i < p.size() ? p[i] : 0) ^ (i < q.size() ? q[i] : 0));
      felt_t got = i < s.size() ? s[i] : 0;
      REQUIRE(got == want);
    }
    CHECK((s.empty() || s.back() != 0));
  }
}

TEST_CASE("poly_mul basics and degree law") {
  GF F(3);
  Poly z{0, 1};
  CHECK(poly_mul(F, z, z) == Poly{0, 0, 1});
  std::mt19937_64 rng(2);
  for (int it = 0; it < 200; ++it) {
    Poly p = random_poly(rng, F, 6);
    CHECK(poly_mul(F, p, Poly{1}) == p);
    Poly q = random_poly(rng, F, 6);
    if (!poly_is_zero(p) && !poly_is_zero(q))
      CHECK(poly_deg(poly_mul(F, p, q)) == poly_deg(p) + poly_deg(q));
  }
}

TEST_CASE("poly_mul agrees with pointwise evaluation") {
  GF F(4);  // q = 16 > 2*6+1 evaluation points available
  std::mt19937_64 rng(3);
  for (int it = 0; it < 300; ++it) {
    Poly p = random_poly(rng, F, 6), q = random_poly(rng, F, 6);
    Poly pq = poly_mul(F, p, q);
    for (felt_t g = 0; g < (felt_t)F.q(); ++g)
      REQUIRE(poly_eval(F, pq, g) == F.mul(poly_eval(F, p, g), poly_eval(F, q, g)));
  }
}

TEST_CASE("poly_divmod examples over GF(2)") {
  GF F(1);
  auto [q, r] = poly_divmod(F, Poly{1, 0, 0, 1}, Poly{1, 1});
  CHECK(q == Poly{1, 1, 1});  // z^3+1 = (z+1)(z^2+z+1)
  CHECK(poly_is_zero(r));
}

TEST_CASE("poly_divmod round trip and edge shapes") {
  GF F(5);
  std::mt19937_64 rng(4);
  for (int it = 0; it < 500; ++it) {
    Poly a = random_poly(rng, F, 12);
    Poly b = random_poly(rng, F, 7, true);
    auto [q, r] = poly_divmod(F, a, b);
    REQUIRE(poly_add(poly_mul(F, b, q), r) == a);
    REQUIRE(poly_deg(r) < poly_deg(b));

    auto [q1, r1] = poly_divmod(F, a, Poly{1});
    CHECK(q1 == a);
    CHECK(poly_is_zero(r1));
  }
  auto [q2, r2] = poly_divmod(F, Poly{3, 1}, Poly{0, 0, 1});
  CHECK(poly_is_zero(q2));
  CHECK(r2 == Poly{3, 1});
  CHECK_THROWS_AS(poly_divmod(F, Poly{1}, Poly{}), std::domain_error);
  CHECK_THROWS_AS(poly_divmod(F, Poly{1}, Poly{0, 0}), std::domain_error);
}

TEST_CASE("poly_eval matches power-sum oracle and charges qc per degree") {
  GF F(6);
  std::mt19937_64 rng(5);
  CHECK(poly_eval(F, Poly{42}, 17) == 42);
  CHECK(poly_eval(F, Poly{7, 9, 3}, 0) == 7);
  for (int it = 0; it < 300; ++it) {
    Poly p = random_poly(rng, F, 9);
    felt_t g = (felt_t)(rng() % F.q());
    felt_t want = 0;
    for (size_t i = 0; i < p.size(); ++i) want ^= F.mul(p[i], pow_gamma(F, g, (unsigned)i));
    REQUIRE(poly_eval(F, p, g) == want);

    CostLedger lg;
    poly_eval(F, p, g, &lg);
    int d = poly_deg(p);
    CHECK(lg.qc_mult == (std::uint64_t)std::max(d, 0));
    CHECK(lg.qq_mult == 0);
  }
}

TEST_CASE("formal derivative in characteristic two") {
  CHECK(poly_is_zero(poly_derivative(Poly{0, 0, 1})));       // (z^2)' = 0
  CHECK(poly_derivative(Poly{0, 1, 0, 1}) == Poly{1, 0, 1});  // (z^3+z)' = z^2+1
  GF F(4);
  std::mt19937_64 rng(6);
  for (int it = 0; it < 300; ++it) {
    Poly p = random_poly(rng, F, 7), q = random_poly(rng, F, 7);
    Poly lhs = poly_derivative(poly_mul(F, p, q));
    Poly rhs = poly_add(poly_mul(F, poly_derivative(p), q), poly_mul(F, p, poly_derivative(q)));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("extended euclid rows satisfy the Bezout identity") {
  std::mt19937_64 rng(7);
  for (int b : {3, 4, 8}) {
    GF F(b);
    for (int it = 0; it < 1000; ++it) {
      Poly A = random_poly(rng, F, 10), B = random_poly(rng, F, 10);
      if (poly_is_zero(A) && poly_is_zero(B)) continue;
      auto rows = classical_eea(F, A, B);
      REQUIRE(rows.size() >= 2);
      REQUIRE(poly_is_zero(rows.back().r));
      for (const EEATriple &t : rows)
        REQUIRE(poly_add(poly_mul(F, A, t.u), poly_mul(F, B, t.v)) == t.r);
      // strict degree decrease past the two seed rows
      for (size_t i = 2; i < rows.size(); ++i)
        REQUIRE(poly_deg(rows[i].r) < poly_deg(rows[i - 1].r));
      // cofactor degree bound used by the decoder cutoffs
      for (size_t i = 2; i < rows.size(); ++i)
        if (!poly_is_zero(rows[i].v))
          REQUIRE(poly_deg(rows[i].v) <= poly_deg(A) - poly_deg(rows[i - 1].r));
    }
  }
}

TEST_CASE("extended euclid computes modular inverses") {
  GF F(4);
  Poly P{1, 1, 0, 0, 1, 1};  // degree-5 modulus; irreducibility not required, only coprimality
  std::mt19937_64 rng(8);
  int done = 0;
  while (done < 200) {
    Poly B = random_poly(rng, F, 4, true);
    auto rows = classical_eea(F, P, B);
    const EEATriple &g = rows[rows.size() - 2];
    if (poly_deg(g.r) != 0) continue;  // not coprime; skip
    // scale v by gcd constant to get a true inverse
    felt_t c = F.inv(g.r[0]);
    Poly v = g.v;
    for (felt_t &x : v) x = F.mul(x, c);
    Poly prod = poly_divmod(F, poly_mul(F, B, v), P).second;
    REQUIRE(prod == Poly{1});
    ++done;
  }
}

TEST_CASE("extended euclid gcd of equal inputs is the input up to a unit") {
  GF F(3);
  Poly A{2, 5, 1};
  auto rows = classical_eea(F, A, A);
  const Poly &g = rows[rows.size() - 2].r;
  REQUIRE(poly_deg(g) == poly_deg(A));
  felt_t c = F.mul(A[poly_deg(A)], F.inv(g[poly_deg(g)]));
  Poly scaled = g;
  for (felt_t &x : scaled) x = F.mul(x, c);
  CHECK(scaled == A);
  CHECK_THROWS_AS(classical_eea(F, Poly{}, Poly{}), std::invalid_argument);
}
