#include <memory>
#include <random>

#include "doctest.h"
#include "hecke/congruence.hpp"
#include "hecke/error.hpp"
#include "test_helpers.hpp"

using namespace hecke;
using namespace hecke::testing;

namespace {

std::shared_ptr<const HeckeSpace> shared(HeckeSpace s) {
  validate(s);
  return std::make_shared<const HeckeSpace>(std::move(s));
}

std::vector<RingElement> lift(const std::vector<Int>& xs, const RingRef& R) {
  std::vector<RingElement> out;
  for (const auto& x : xs) out.push_back(R->from_int(x));
  return out;
}

PadicEigenform synthetic(const RingRef& R, std::vector<RingElement> coeffs) {
  PadicEigenform f;
  f.index = 1;
  f.rank = static_cast<std::size_t>(R->degree());
  f.ring = R;
  f.coefficients = std::move(coeffs);
  f.attained_precision = R->precision();
  f.working_precision = R->precision();
  return f;
}

// Systems A, B congruent mod 5 (not mod 25) and C in another residue class.
const std::vector<long> A = {1, 3, 7, 2, 4, 11};
const std::vector<long> B = {6, 8, 12, 7, 9, 16};
const std::vector<long> C = {2, 4, 9, 3, 0, 1};

std::vector<Int> series(const std::vector<long>& sys) {
  std::vector<Int> out{Int(1)};
  for (long x : sys) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("compared indices") {
  CHECK(compared_indices(Int(5), 12, {IndexPolicy::Coprime, {11}}) ==
        std::vector<int>{1, 2, 3, 4, 6, 7, 8, 9, 12});
  CHECK(compared_indices(Int(5), 4, {IndexPolicy::All, {11}}) == std::vector<int>{1, 2, 3, 4});
  CHECK(compared_indices(Int(2), 7, {IndexPolicy::Coprime, {3}}) == std::vector<int>{1, 5, 7});
}

TEST_CASE("weak congruence: members, planted defects, errors") {
  auto [p, q] = random_unimodular(*std::make_unique<std::mt19937_64>(5), 3, 5);
  auto s = shared(diagonal_space({A, B, C}, p, q));
  const int N = 6;
  auto orbits = ell_adic_orbits(s, Int(5), N);
  REQUIRE(orbits.size() == 2);
  const EllAdicOrbit& big = orbits[0].rank() == 2 ? orbits[0] : orbits[1];
  REQUIRE(big.rank() == 2);
  const RingRef Z = base_ring(PrimePower(Int(5), N));
  const CompareOptions all{IndexPolicy::All, {}};

  SUBCASE("columns of the dual table") {
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<Int> col;
      for (int n = 1; n <= s->bound; ++n) col.push_back(big.dual.at(n)[i]);
      auto rec = congruence_exponent_weak(lift(col, Z), big, s->bound, all);
      CHECK(rec.exponent.is_at_least());
      CHECK(rec.exponent.lambda_units() == N);
    }
    for (const auto& sys : {A, B}) {
      auto rec = congruence_exponent_weak(lift(series(sys), Z), big, s->bound, all);
      CHECK(rec.exponent == Valuation::at_least(N, 1));
    }
  }
  SUBCASE("f1 + 5^t u C") {
    for (int t = 0; t < N; ++t) {
      std::vector<Int> g;
      const auto a = series(A), c = series(C);
      for (std::size_t n = 0; n < a.size(); ++n) g.push_back(a[n] + ipow(Int(5), t) * 3 * c[n]);
      auto rec = congruence_exponent_weak(lift(g, Z), big, s->bound, all);
      CHECK(rec.exponent == Valuation::exact(t, 1));
      CHECK(rec.breakdown.size() == static_cast<std::size_t>(s->bound));
    }
  }
  SUBCASE("ramified coefficient ring") {
    const RingRef R = make_ring(Int(5), N, zp({-5, 0, 1}), 2);
    for (int t = 0; t < 2 * N; ++t) {
      std::vector<RingElement> g;
      const auto a = series(A), c = series(C);
      for (std::size_t n = 0; n < a.size(); ++n)
        g.push_back(R->from_int(a[n]) + R->uniformizer().pow(static_cast<unsigned long>(t)) * R->from_int(c[n]));
      auto rec = congruence_exponent_weak(g, big, s->bound, all);
      CHECK(rec.exponent == Valuation::exact(t, 2));
    }
  }
  SUBCASE("monotone in the bound") {
    std::vector<Int> g;
    const auto a = series(A), c = series(C);
    for (std::size_t n = 0; n < a.size(); ++n) g.push_back(a[n] + 25 * c[n]);
    Valuation prev = Valuation::at_least(N, 1);
    for (int bound = 2; bound <= s->bound; ++bound) {
      auto rec = congruence_exponent_weak(lift(g, Z), big, bound, all);
      CHECK(rec.exponent <= prev);
      prev = rec.exponent;
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(congruence_exponent_weak(lift(series(A), Z), big, s->bound + 1, all), Error);
    const RingRef Z3 = base_ring(PrimePower(Int(3), 4));
    CHECK_THROWS_AS(congruence_exponent_weak(lift(series(A), Z3), big, s->bound, all), Error);
  }
}

TEST_CASE("strong congruence: eigenvalues 1 and 1 + 5^3") {
  auto s = shared(space_of({companion({126, -127, 1})}));
  auto orbits = ell_adic_orbits(s, Int(5), 6);
  REQUIRE(orbits.size() == 1);
  auto forms = qell_orbits(orbits[0]);
  REQUIRE(forms.size() == 2);
  const CompareOptions all{IndexPolicy::All, {}};
  for (const auto& f : forms) {
    CHECK(congruence_exponent_weak(f.coefficients, orbits[0], 2, all).exponent == Valuation::at_least(6, 1));
    CHECK(congruence_exponent_strong(f, f, 2, all).exponent == Valuation::at_least(6, 1));
  }
  auto fg = congruence_exponent_strong(forms[0], forms[1], 2, all);
  auto gf = congruence_exponent_strong(forms[1], forms[0], 2, all);
  CHECK(fg.exponent == Valuation::exact(3, 1));
  CHECK(gf.exponent == fg.exponent);
  CHECK(fg.breakdown.at(2) == Valuation::exact(3, 1));
}

TEST_CASE("strong congruence: base ring against a ramified ring") {
  const int N = 6;
  const RingRef Z = base_ring(PrimePower(Int(5), N));
  const RingRef R = make_ring(Int(5), N, zp({-5, 0, 1}), 2);
  std::mt19937_64 rng(3);
  std::vector<RingElement> fc, gc;
  for (int n = 1; n <= 8; ++n) {
    const Int a = n == 1 ? Int(1) : Int(static_cast<unsigned long>(rng() % 15625));
    fc.push_back(Z->from_int(a));
    RingElement b = R->from_int(a);
    if (n == 4) b = b + R->uniformizer().pow(5) * R->from_int(2);
    gc.push_back(b);
  }
  auto f = synthetic(Z, fc);
  auto g = synthetic(R, gc);
  auto rec = congruence_exponent_strong(f, g, 8, {IndexPolicy::All, {}});
  CHECK(rec.exponent == Valuation::exact(5, 2));
  CHECK(rec.exponent.normalised() == Rational(5, 2));
  CHECK(congruence_exponent_strong(g, f, 8, {IndexPolicy::All, {}}).exponent == rec.exponent);
}

TEST_CASE("strong congruence: Galois conjugates match under some embedding") {
  const int N = 5;
  for (auto [poly, e] : {std::pair{zp({-2, 0, 1}), 1}, std::pair{zp({-5, 0, 1}), 2}}) {
    const RingRef R = make_ring(Int(5), N, poly, e);
    std::mt19937_64 rng(17);
    for (int t = 0; t < e * N; ++t) {
      std::vector<RingElement> fc, gc;
      for (int n = 1; n <= 6; ++n) {
        RingElement a = n == 1 ? R->one() : random_element(rng, R);
        if (n == 2) a = R->generator() + R->from_int(Int(3));
        // Conjugate: x -> -x.
        RingElement c = R->from_coords({a.coords()[0], -a.coords()[1]});
        if (n == 5) c = c + R->uniformizer().pow(static_cast<unsigned long>(t));
        fc.push_back(a);
        gc.push_back(c);
      }
      auto f = synthetic(R, fc), g = synthetic(R, gc);
      auto rec = congruence_exponent_strong(f, g, 6, {IndexPolicy::All, {}});
      CHECK(rec.exponent.lambda_units() * 1 == t * rec.exponent.ramification() / e);
      CHECK(rec.exponent.is_exact());
      CHECK(congruence_exponent_strong(g, f, 6, {IndexPolicy::All, {}}).exponent == rec.exponent);
      CHECK(congruence_exponent_strong(f, f, 6, {IndexPolicy::All, {}}).exponent.is_at_least());
    }
  }
}

TEST_CASE("level-raising witnesses") {
  const int N = 4;
  const RingRef Z = base_ring(PrimePower(Int(5), N));
  SUBCASE("a_p = p + 1") {
    std::vector<Int> a;
    for (int n = 1; n <= 60; ++n) a.emplace_back(n + 1);
    auto f = synthetic(Z, lift(a, Z));
    for (int m = 1; m <= N; ++m) {
      auto rep = level_raising_witnesses(f, 11, m, 2, 60);
      CHECK(rep.primes_scanned == primes_in_range(2, 59).size() - 2);
      std::size_t plus = 0;
      for (const auto& w : rep.witnesses) {
        if (w.sign == 1) ++plus;
        else CHECK(valuation_capped(Int(2 * (w.p + 1)), Int(5), N) >= m);
      }
      CHECK(plus == rep.primes_scanned);
      CHECK(rep.density() == 1);
    }
  }
  SUBCASE("a_p = 0") {
    auto f = synthetic(Z, lift(std::vector<Int>(200, Int(0)), Z));
    for (int m = 1; m <= 3; ++m) {
      auto rep = level_raising_witnesses(f, 1, m, 2, 200);
      std::vector<std::int64_t> expected;
      for (auto p : primes_in_range(2, 199))
        if (p != 5 && valuation_capped(Int(p + 1), Int(5), N) >= m) expected.push_back(p);
      std::vector<std::int64_t> got;
      for (const auto& w : rep.witnesses) got.push_back(w.p);
      got.erase(std::unique(got.begin(), got.end()), got.end());
      CHECK(got == expected);
    }
  }
  SUBCASE("level 11, ell = 5") {
    auto s = std::make_shared<const HeckeSpace>(level11_space(100));
    auto orbits = ell_adic_orbits(s, Int(5), 3);
    REQUIRE(orbits.size() == 1);
    auto forms = qell_orbits(orbits[0]);
    REQUIRE(forms.size() == 1);
    auto rep = level_raising_witnesses(forms[0], 11, 1, 2, 100);
    CHECK_FALSE(rep.witnesses.empty());
    const auto a = level11_coefficients(100);
    for (const auto& w : rep.witnesses) {
      CHECK(w.p != 5);
      CHECK(w.p != 11);
      CHECK(mod(a[static_cast<std::size_t>(w.p - 1)] - w.sign * (w.p + 1), Int(5)) == 0);
    }
    CHECK_THROWS_AS(level_raising_witnesses(forms[0], 11, 1, 2, 200), Error);
    CHECK_THROWS_AS(level_raising_witnesses(forms[0], 11, 4, 2, 50), Error);
  }
}
