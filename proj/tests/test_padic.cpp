#include <random>
#include <set>

#include "doctest.h"
#include "hecke/error.hpp"
#include "hecke/padic.hpp"
#include "test_helpers.hpp"

using namespace hecke;
using hecke::testing::random_element;
using hecke::testing::zp;

namespace {

// Divisibility oracle: the largest k with a in pi^k O, found by solving
// mult(pi^k) y = a for increasing k.
int brute_lambda_valuation(const RingElement& a) {
  const auto& R = a.ring();
  RingElement pik = R->one();
  int k = 0;
  while (k < R->lambda_precision()) {
    RingElement next = pik * R->uniformizer();
    if (!solve_mod(next.mult_matrix(), a.coords(), R->base()).has_value()) return k;
    pik = next;
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("make_ring validates the residual split") {
  const Int five(5);
  auto base = make_ring(five, 3, zp({0, 1}), 1);
  CHECK(base->is_base());
  CHECK(base->ramification() == 1);
  CHECK(base->residue_degree() == 1);

  // x^2 - 6 = (x-1)(x+1) mod 5: not local.
  CHECK_THROWS_AS(make_ring(five, 3, zp({-6, 0, 1}), 1), Error);
  try {
    make_ring(five, 3, zp({-6, 0, 1}), 1);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("inconsistent split") != std::string::npos);
  }

  auto ram = make_ring(five, 3, zp({-5, 0, 1}), 2);
  CHECK(ram->ramification() == 2);
  CHECK(ram->residue_degree() == 1);
  CHECK(ram->generator().valuation() == Valuation::exact(1, 2));
  CHECK(ram->generator().valuation().normalised() == Rational(1, 2));

  auto unr = make_ring(five, 3, zp({-2, 0, 1}), 1);
  CHECK(unr->residue_degree() == 2);

  // x^2 - 25 is not maximal: Dedekind fails.
  CHECK_THROWS_AS(make_ring(five, 3, zp({-25, 0, 1}), 2), Error);
  // Non-monic and bad e.
  CHECK_THROWS_AS(make_ring(five, 3, zp({-5, 0, 2}), 2), Error);
  CHECK_THROWS_AS(make_ring(five, 3, zp({-5, 0, 1}), 3), Error);
  CHECK_THROWS_AS(make_ring(Int(6), 3, zp({0, 1}), 1), Error);
}

TEST_CASE("valuation examples and ordering") {
  const Int five(5);
  auto base = base_ring(PrimePower(five, 3));
  CHECK(base->from_int(Int(50)).valuation() == Valuation::exact(2, 1));
  CHECK(base->from_int(Int(7)).valuation() == Valuation::exact(0, 1));
  CHECK(base->zero().valuation() == Valuation::at_least(3, 1));
  CHECK(base->zero().valuation().to_string() == ">=3");

  auto ram = make_ring(five, 3, zp({-5, 0, 1}), 2);
  auto x = ram->generator();
  CHECK((x * x * x).valuation() == Valuation::exact(3, 2));
  CHECK((x * x * x).valuation().to_string() == "3/2");
  CHECK(ram->zero().valuation() == Valuation::at_least(6, 2));

  CHECK(Valuation::exact(1, 2) < Valuation::exact(1, 1));
  CHECK(Valuation::exact(2, 2) < Valuation::at_least(1, 1));
  CHECK(Valuation::exact(2, 2).in_units_of(4) == Valuation::exact(4, 4));
}

TEST_CASE("valuations agree with a divisibility oracle") {
  std::mt19937_64 rng(21);
  const Int five(5);
  for (auto R : {base_ring(PrimePower(five, 3)), make_ring(five, 3, zp({-5, 0, 1}), 2),
                 make_ring(five, 2, zp({-2, 0, 1}), 1), make_ring(Int(2), 3, zp({2, 2, 1}), 2)}) {
    for (int trial = 0; trial < 60; ++trial) {
      RingElement a = random_element(rng, R);
      if (trial % 3 == 0) a = a * R->uniformizer();
      if (trial % 5 == 0) a = a * R->uniformizer().pow(2);
      Valuation v = a.valuation();
      const int brute = brute_lambda_valuation(a);
      if (brute >= R->lambda_precision()) {
        CHECK(v.is_at_least());
        CHECK(a.is_zero());
      } else {
        CHECK(v == Valuation::exact(brute, R->ramification()));
      }
    }
  }
}

TEST_CASE("ring axioms, multiplicativity and the ultrametric inequality") {
  std::mt19937_64 rng(22);
  const Int five(5);
  for (auto R : {make_ring(five, 3, zp({-5, 0, 1}), 2), make_ring(five, 3, zp({-2, 0, 1}), 1),
                 make_ring(Int(3), 2, zp({3, 0, 0, 1}), 3)}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto a = random_element(rng, R), b = random_element(rng, R), c = random_element(rng, R);
      CHECK((a + b) * c == a * c + b * c);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      CHECK(a * R->one() == a);
      CHECK((a - a).is_zero());
      const auto va = a.valuation(), vb = b.valuation(), vs = (a + b).valuation();
      CHECK(vs >= std::min(va, vb));
      const auto vp = (a * b).valuation();
      if (va.is_exact() && vb.is_exact() &&
          va.lambda_units() + vb.lambda_units() < R->lambda_precision()) {
        CHECK(vp == Valuation::exact(va.lambda_units() + vb.lambda_units(), R->ramification()));
      }
      if (a.is_unit()) CHECK(a * a.inverse() == R->one());
    }
  }
}

TEST_CASE("quotient exponent") {
  CHECK(quotient_exponent(1, 5) == 5);
  CHECK(quotient_exponent(2, 3) == 5);
  CHECK(quotient_exponent(3, 1) == 1);
  // O/lambda^w surjects onto Z/ell^m exactly when w > e(m-1).
  for (int e = 1; e <= 4; ++e)
    for (int m = 1; m <= 5; ++m) {
      const int w = quotient_exponent(e, m);
      CHECK(w > e * (m - 1));
      CHECK(w - 1 <= e * (m - 1));
    }
}

TEST_CASE("hensel lift of x^2 - 6 over Z/5^6 matches exhaustive search") {
  const Int five(5);
  PrimePower pp(five, 6);
  auto R = base_ring(pp);
  RingPoly f = lift_poly(zp({-6, 0, 1}), R);
  auto cert = bezout_certificate(f);
  auto lifted = hensel_lift_root(f, R->from_int(Int(1)), cert);

  std::set<long> roots;
  for (long a = 0; a < 15625; ++a)
    if ((a * a - 6) % 15625 == 0) roots.insert(a);
  REQUIRE(roots.size() == 2);
  const long root = lifted.root.coords()[0].get_si();
  CHECK(roots.count(root) == 1);
  CHECK(root % 5 == 1);
  CHECK(eval(f, lifted.root).is_zero());

  // Quadratic convergence: residual valuations at least double until the cap.
  REQUIRE(lifted.residuals.size() >= 2);
  CHECK(lifted.residuals.back().is_at_least());
  for (std::size_t i = 1; i < lifted.residuals.size(); ++i) {
    const auto prev = lifted.residuals[i - 1], cur = lifted.residuals[i];
    if (cur.is_exact()) CHECK(cur.lambda_units() >= 2 * prev.lambda_units());
  }
  // Step bound ceil(log2(eN/r)) + 1 with r = 1, eN = 6.
  CHECK(lifted.residuals.size() - 1 <= 4);
}

TEST_CASE("hensel lifting rejects bad inputs") {
  const Int five(5);
  auto R = base_ring(PrimePower(five, 4));
  RingPoly f = lift_poly(zp({-6, 0, 1}), R);
  auto cert = bezout_certificate(f);
  // a0 = 2 is not a root mod 5.
  CHECK_THROWS_AS(hensel_lift_root(f, R->from_int(Int(2)), cert), Error);
  // Broken certificate.
  BezoutCertificate bad = cert;
  bad.b[0] = bad.b[0] + R->one();
  CHECK_THROWS_AS(hensel_lift_root(f, R->from_int(Int(1)), bad), Error);
  // x^2 has repeated roots: no certificate.
  CHECK_THROWS_AS(bezout_certificate(lift_poly(zp({0, 0, 1}), R)), Error);
}

TEST_CASE("hensel lift in a ramified ring") {
  // Root of y^2 - 5 - x y inside Z_5[x]/(x^2-5): y = x (1 + ...) ... use
  // y^2 - y - 5 = 0, roots are 0 and 1 mod lambda; lift the one near 1.
  const Int five(5);
  auto R = make_ring(five, 4, zp({-5, 0, 1}), 2);
  RingPoly f = {R->from_int(Int(-5)), R->from_int(Int(-1)), R->one()};
  auto cert = bezout_certificate(f);
  auto lifted = hensel_lift_root(f, R->one(), cert);
  CHECK(eval(f, lifted.root).is_zero());
  CHECK((lifted.root - R->one()).valuation() >= Valuation::exact(1, 2));
}
