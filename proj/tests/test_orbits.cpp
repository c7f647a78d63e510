
#include <memory>
#include <random>

#include "doctest.h"

#include "hecke/orbits.hpp"
#include "hecke/qell.hpp"
#include "test_helpers.hpp"

using namespace hecke;
using namespace hecke::testing;

namespace {

bool is_root(const ZPoly& f, const RingElement& x) {
  const RingRef& R = x.ring();
  RingElement acc = R->zero();
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + R->from_int(f[i]);
  return acc.is_zero();
}

std::shared_ptr<const HeckeSpace> shared(HeckeSpace s) {
  validate(s);
  return std::make_shared<const HeckeSpace>(std::move(s));
}

}  // namespace

TEST_CASE("factor_qell: split, unramified, ramified, inseparable") {
  const PrimePower p5(Int(5), 6);

  auto split = factor_qell(zp({-6, 0, 1}), p5);
  REQUIRE(split.size() == 2);
  for (const auto& piece : split) {
    CHECK(piece.resolved);
    CHECK(piece.degree == 1);
    CHECK(is_root(zp({-6, 0, 1}), piece.root));
  }

  auto unram = factor_qell(zp({-2, 0, 1}), p5);
  REQUIRE(unram.size() == 1);
  CHECK(unram[0].resolved);
  CHECK(unram[0].ring->residue_degree() == 2);
  CHECK(unram[0].ring->ramification() == 1);
  CHECK(is_root(zp({-2, 0, 1}), unram[0].root));

  auto eis = factor_qell(zp({-5, 0, 1}), p5);
  REQUIRE(eis.size() == 1);
  CHECK(eis[0].resolved);
  CHECK(eis[0].ring->ramification() == 2);
  CHECK(is_root(zp({-5, 0, 1}), eis[0].root));

  auto scaled = factor_qell(zp({-125, 0, 1}), PrimePower(Int(5), 10));
  REQUIRE(scaled.size() == 1);
  CHECK(scaled[0].resolved);
  CHECK(scaled[0].ring->ramification() == 2);
  CHECK(is_root(zp({-125, 0, 1}), scaled[0].root));

  auto rep = factor_qell(zp({1, -2, 1}), p5);
  REQUIRE(rep.size() == 1);
  CHECK_FALSE(rep[0].resolved);
  CHECK(rep[0].degree == 2);
}

TEST_CASE("factor_qell: close roots need precision") {
  const ZPoly f = zpoly::mul_exact(zp({-1, 1}), zp({-126, 1}));
  bool all_resolved = true;
  for (const auto& piece : factor_qell(f, PrimePower(Int(5), 3))) all_resolved = all_resolved && piece.resolved;
  CHECK_FALSE(all_resolved);

  auto pieces = factor_qell(f, PrimePower(Int(5), 24));
  REQUIRE(pieces.size() == 2);
  std::set<Int> roots;
  for (const auto& piece : pieces) {
    REQUIRE(piece.resolved);
    REQUIRE(piece.degree == 1);
    roots.insert(piece.root.coords()[0]);
    CHECK(piece.ring->precision() >= 6);
  }
  const Int m = pieces[0].ring->base().modulus();
  CHECK(roots == std::set<Int>{Int(1) % m, Int(126) % m});
}

TEST_CASE("factor_qell: random products of distinct linear factors") {
  std::mt19937_64 rng(11);
  for (long ell : {2L, 3L, 5L, 7L}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 3);
      std::set<long> rs;
      while (static_cast<int>(rs.size()) < n) rs.insert(static_cast<long>(rng() % 200));
      ZPoly f = zp({1});
      for (long r : rs) f = zpoly::mul_exact(f, zp({-r, 1}));
      const PrimePower pp(Int(ell), 40);
      auto pieces = factor_qell(f, pp);
      int total = 0;
      for (const auto& piece : pieces) {
        total += piece.degree;
        REQUIRE(piece.resolved);
        CHECK(is_root(f, piece.root));
      }
      CHECK(total == n);
      CHECK(pieces.size() == rs.size());
    }
  }
}

TEST_CASE("ell_adic_orbits: trivial and constructed examples") {
  SUBCASE("d = 1") {
    auto s = shared(space_of({mat({{-2}}), mat({{-1}}), mat({{2}})}));
    auto orbits = ell_adic_orbits(s, Int(5), 4);
    REQUIRE(orbits.size() == 1);
    CHECK(orbits[0].rank() == 1);
    CHECK(orbits[0].basis_indices == std::vector<int>{1});
    CHECK(orbits[0].dual.at(2)[0] == Int(625 - 2));
    CHECK(orbits[0].dual.at(4)[0] == Int(2));
    auto forms = qell_orbits(orbits[0]);
    REQUIRE(forms.size() == 1);
    CHECK(forms[0].coefficients[1].coords()[0] == Int(623));
    CHECK(forms[0].attained_precision == 4);
  }
  SUBCASE("congruent mod ell, not mod ell^2") {
    auto s = shared(diagonal_space({{1, 3}, {6, 8}}, IntMatrix::identity(2), IntMatrix::identity(2)));
    auto orbits = ell_adic_orbits(s, Int(5), 6);
    REQUIRE(orbits.size() == 1);
    CHECK(orbits[0].rank() == 2);
    CHECK(orbits[0].basis_indices == std::vector<int>{1, 2});
  }
  SUBCASE("distinct fingerprints") {
    auto s = shared(diagonal_space({{1, 3}, {2, 8}}, IntMatrix::identity(2), IntMatrix::identity(2)));
    auto orbits = ell_adic_orbits(s, Int(5), 6);
    REQUIRE(orbits.size() == 2);
    CHECK(orbits[0].rank() == 1);
    CHECK(orbits[1].rank() == 1);
    CHECK(fingerprint_less(orbits[0].fingerprint, orbits[1].fingerprint));
    CHECK(orbits[0].dual.at(2)[0] == 2);
    CHECK(orbits[1].dual.at(2)[0] == 1);
  }
  SUBCASE("x^2 - 6 over 5^6 as a whole space") {
    auto s = shared(space_of({companion({-6, 0, 1})}));
    auto orbits = ell_adic_orbits(s, Int(5), 6);
    REQUIRE(orbits.size() == 2);
    for (const auto& o : orbits) {
      auto forms = qell_orbits(o);
      REQUIRE(forms.size() == 1);
      CHECK(forms[0].resolved);
      CHECK(is_root(zp({-6, 0, 1}), forms[0].coefficients[1]));
    }
  }
}

TEST_CASE("qell_orbits: eigenvalues 1 and 1 + 5^3 separate after escalation") {
  auto s = shared(space_of({companion({126, -127, 1})}));
  auto orbits = ell_adic_orbits(s, Int(5), 6);
  REQUIRE(orbits.size() == 1);
  REQUIRE(orbits[0].rank() == 2);
  auto forms = qell_orbits(orbits[0]);
  REQUIRE(forms.size() == 2);
  std::set<Int> b2;
  for (const auto& f : forms) {
    REQUIRE(f.resolved);
    CHECK(f.rank == 1);
    CHECK(f.attained_precision == 6);
    CHECK(f.working_precision > 6);
    CHECK(f.coefficients[0].coords()[0] == 1);
    b2.insert(f.coefficients[1].coords()[0]);
  }
  CHECK(b2 == std::set<Int>{Int(1), Int(126)});
  const RingElement diff = forms[0].coefficients[1] - forms[1].coefficients[0 + 1].ring()->from_coords(
                                                          forms[1].coefficients[1].coords());
  CHECK(diff.valuation().lambda_units() == 3);
  CHECK(eigenform_fingerprint(forms[0]) == eigenform_fingerprint(forms[1]));
  CHECK(eigenform_coefficients(forms[0], 2).size() == 2);
  CHECK_THROWS(eigenform_coefficients(forms[0], 3));
}

TEST_CASE("qell_orbits: conjugate pair in an unramified quadratic ring") {
  // Two eigenforms exchanged by Galois: char poly x^2 - 2 is irreducible mod 5.
  auto s = shared(space_of({mat({{0, 2}, {1, 0}}), mat({{1, 4}, {2, 1}})}));
  auto orbits = ell_adic_orbits(s, Int(5), 5);
  REQUIRE(orbits.size() == 1);
  auto forms = qell_orbits(orbits[0]);
  REQUIRE(forms.size() == 1);
  CHECK(forms[0].rank == 2);
  CHECK(forms[0].ring->residue_degree() == 2);
  CHECK(is_root(zp({-2, 0, 1}), forms[0].coefficients[1]));
}

TEST_CASE("properties: partition, echelonisation, fingerprints, reconstruction") {
  std::mt19937_64 rng(2024);
  for (long ell : {2L, 3L, 5L, 7L}) {
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t d = 1 + rng() % 4;
      const std::size_t labels = 4;
      std::vector<std::vector<long>> systems;
      while (systems.size() < d) {
        std::vector<long> sys(labels);
        for (auto& x : sys) x = static_cast<long>(rng() % 60);
        // Keep systems distinct over Q.
        bool dup = false;
        for (const auto& t : systems) dup = dup || t == sys;
        if (!dup) systems.push_back(sys);
      }
      auto [p, q] = random_unimodular(rng, d, 6);
      auto s = shared(diagonal_space(systems, p, q));
      const int N = 4;
      auto orbits = ell_adic_orbits(s, Int(ell), N);
      std::size_t total = 0;
      for (const auto& o : orbits) {
        total += o.rank();
        for (std::size_t j = 0; j < o.rank(); ++j)
          for (std::size_t i = 0; i < o.rank(); ++i)
            CHECK(o.dual.at(o.basis_indices[j])[i] == (i == j ? 1 : 0));
        auto forms = qell_orbits(o, QellOptions{128});
        std::size_t sum = 0;
        for (const auto& f : forms) {
          sum += f.rank;
          REQUIRE(f.resolved);
          CHECK(f.coefficients[0] == f.ring->one());
          CHECK(eigenform_fingerprint(f) == o.fingerprint);
          // Each eigenform matches one of the planted systems.
          const Int m = f.ring->base().modulus();
          bool found = false;
          for (const auto& sys : systems) {
            bool ok = true;
            for (std::size_t n = 0; n < labels; ++n) {
              const IntVector c = f.coefficients[n + 1].coords();
              ok = ok && c[0] == Int(sys[n]) % m;
            }
            found = found || ok;
          }
          CHECK(found);
        }
        CHECK(sum == o.rank());
      }
      CHECK(total == d);
    }
  }
}
