#include <algorithm>
#include <random>

#include "doctest.h"
#include "hecke/artinian.hpp"
#include "hecke/error.hpp"
#include "test_helpers.hpp"

using namespace hecke;
using namespace hecke::testing;

namespace {

CommutingMatrixAlgebra single(const std::vector<long>& f, const PrimePower& pp) {
  return CommutingMatrixAlgebra(pp, f.size() - 1, {{2, companion(f)}});
}

void check_complete(const IdempotentSet& s, std::size_t d, const PrimePower& pp) {
  IntMatrix sum(d, d);
  for (std::size_t i = 0; i < s.idempotents.size(); ++i) {
    const auto& e = s.idempotents[i];
    CHECK(mul_mod(e, e, pp) == reduce(e, pp));
    for (std::size_t j = 0; j < s.idempotents.size(); ++j)
      if (i != j) CHECK(is_zero_mod(mul_mod(e, s.idempotents[j], pp), pp));
    sum = add_mod(sum, e, pp);
  }
  CHECK(sum == IntMatrix::identity(d));
}

}  // namespace

TEST_CASE("decompose_mod_ell examples") {
  PrimePower f5(Int(5), 1);
  CHECK(decompose_mod_ell(single({-6, 0, 1}, f5)).idempotents.size() == 2);
  CHECK(decompose_mod_ell(CommutingMatrixAlgebra(f5, 3, {})).idempotents.size() == 1);
  CHECK(decompose_mod_ell(single({0, 0, 1}, f5)).idempotents.size() == 1);
  // x^2 - 2 is irreducible mod 5: a field, one piece.
  CHECK(decompose_mod_ell(single({-2, 0, 1}, f5)).idempotents.size() == 1);
}

TEST_CASE("non-commuting generators are rejected") {
  PrimePower pp(Int(3), 2);
  CHECK_THROWS_AS(CommutingMatrixAlgebra(pp, 2, {{2, mat({{1, 1}, {0, 1}})}, {3, mat({{1, 0}, {1, 1}})}}), Error);
}

TEST_CASE("generator splitting alone is not enough: F_9 tensor F_9") {
  // Two commuting generators each generating F_9 over F_3, with the algebra
  // F_9 (x) F_9 = F_9 x F_9. Neither generator alone separates the two
  // maximal ideals.
  PrimePower pp(Int(3), 2);
  const IntMatrix c = companion({1, 0, 1});  // x^2 + 1, irreducible mod 3
  IntMatrix a(4, 4), b(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        a(2 * i + k, 2 * j + k) = c(i, j);  // c (x) 1
        b(2 * k + i, 2 * k + j) = c(i, j);  // 1 (x) c
      }
  CommutingMatrixAlgebra alg(pp, 4, {{2, a}, {3, b}});
  auto s = decompose_mod_ell(alg);
  CHECK(s.idempotents.size() == 2);
  auto factors = local_factors(alg);
  REQUIRE(factors.size() == 2);
  for (const auto& f : factors) {
    CHECK(f.rank == 2);
    CHECK(f.residue_degree == 2);
  }
}

TEST_CASE("lift_idempotent fixed points and the x^2 - 6 example") {
  PrimePower pp(Int(5), 3);
  auto alg = single({-6, 0, 1}, pp);
  CHECK(lift_idempotent(IntMatrix(2, 2), alg) == IntMatrix(2, 2));
  CHECK(lift_idempotent(IntMatrix::identity(2), alg) == IntMatrix::identity(2));
  CHECK_THROWS_AS(lift_idempotent(mat({{2, 0}, {0, 0}}), alg), Error);

  auto residual = decompose_mod_ell(alg);
  auto lifted = lift_idempotents(residual, alg);
  check_complete(lifted, 2, pp);
  CHECK(idempotent_closure(lifted.idempotents, pp) == brute_idempotents({-6, 0, 1}, 125));
  CHECK(brute_idempotents({-6, 0, 1}, 125).size() == 4);
  // Deterministic: bit-identical on repetition.
  CHECK(lift_idempotents(residual, alg).idempotents == lifted.idempotents);
}

TEST_CASE("lifting defects vanish mod ell^(2^n)") {
  std::mt19937_64 rng(31);
  for (long ell : {2L, 3L, 5L, 7L}) {
    PrimePower pp(Int(ell), 8);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<long> f(4);
      for (auto& c : f) c = static_cast<long>(rng() % 50) - 25;
      f[3] = 1;
      auto alg = single(f, pp);
      for (const auto& e0 : decompose_mod_ell(alg).idempotents) {
        auto tr = lift_idempotent_traced(e0, alg);
        for (std::size_t n = 0; n < tr.defects.size(); ++n)
          CHECK(tr.defects[n] >= std::min(8, 1 << n));
        CHECK(tr.defects.back() == 8);
        CHECK(reduce(tr.idempotent, pp.with_precision(1)) == reduce(e0, pp.with_precision(1)));
      }
    }
  }
}

TEST_CASE("block-diagonal algebra: idempotents are the block indicators") {
  PrimePower pp(Int(3), 4);
  const IntMatrix b1 = companion({1, 0, 1}), b2 = mat({{2}}), b3 = companion({1, -2, 1});
  const IntMatrix c1 = add_mod(mul_mod(b1, b1, pp), b1, pp), c2 = mat({{7}}), c3 = mul_mod(b3, b3, pp);
  CommutingMatrixAlgebra alg(pp, 5, {{2, block_diag({b1, b2, b3})}, {3, block_diag({c1, c2, c3})}});
  auto factors = local_factors(alg);
  REQUIRE(factors.size() == 3);
  std::vector<IntMatrix> expect = {
      block_diag({IntMatrix::identity(2), IntMatrix(1, 1), IntMatrix(2, 2)}),
      block_diag({IntMatrix(2, 2), IntMatrix::identity(1), IntMatrix(2, 2)}),
      block_diag({IntMatrix(2, 2), IntMatrix(1, 1), IntMatrix::identity(2)}),
  };
  for (const auto& f : factors) {
    CHECK(std::find(expect.begin(), expect.end(), f.idempotent) != expect.end());
    const int want = f.rank == 1 ? 1 : (f.idempotent == expect[0] ? 2 : 1);
    CHECK(f.residue_degree == want);
  }
}

TEST_CASE("local factor projections and residual locality") {
  std::mt19937_64 rng(32);
  for (long ell : {2L, 3L, 5L}) {
    PrimePower pp(Int(ell), 5);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<long> f(6);
      for (auto& c : f) c = static_cast<long>(rng() % 40) - 20;
      f[5] = 1;
      const IntMatrix t = companion(f);
      CommutingMatrixAlgebra alg(pp, 5, {{2, t}, {3, mul_mod(t, t, pp)}});
      auto factors = local_factors(alg);
      std::size_t total = 0;
      for (const auto& fac : factors) {
        total += fac.rank;
        CHECK(project(fac, IntMatrix::identity(5), pp) == IntMatrix::identity(fac.rank));
        CHECK(commute_mod(fac.projected.at(2), fac.projected.at(3), pp));
        // T U = U M on the image lattice.
        CHECK(mul_mod(t, fac.basis, pp) == mul_mod(fac.basis, fac.projected.at(2), pp));
        CommutingMatrixAlgebra sub(pp, fac.rank, fac.projected);
        CHECK(decompose_mod_ell(sub).idempotents.size() == 1);
      }
      CHECK(total == 5);
    }
  }
}

TEST_CASE("residually indistinguishable roots give one local factor") {
  PrimePower pp(Int(5), 6);
  // (x-1)(x-1-125) = x^2 - 127 x + 126
  auto alg = single({126, -127, 1}, pp);
  auto factors = local_factors(alg);
  REQUIRE(factors.size() == 1);
  CHECK(factors[0].rank == 2);
  CHECK(basis_indices(factors[0], pp) == std::vector<int>{1, 2});
}

TEST_CASE("randomized generator order gives the same idempotents") {
  std::mt19937_64 rng(33);
  PrimePower pp(Int(3), 4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<long> f(5);
    for (auto& c : f) c = static_cast<long>(rng() % 30) - 15;
    f[4] = 1;
    const IntMatrix t = companion(f);
    const IntMatrix u = add_mod(mul_mod(t, t, pp), scale_mod(Int(2), t, pp), pp);
    const IntMatrix w = mul_mod(u, t, pp);
    CommutingMatrixAlgebra a1(pp, 4, {{2, t}, {3, u}, {5, w}});
    CommutingMatrixAlgebra a2(pp, 4, {{2, w}, {3, t}, {5, u}});
    CHECK(lift_idempotents(decompose_mod_ell(a1), a1).idempotents ==
          lift_idempotents(decompose_mod_ell(a2), a2).idempotents);
  }
}

TEST_CASE("basis indices") {
  PrimePower pp(Int(5), 3);
  {
    CommutingMatrixAlgebra alg(pp, 1, {{1, mat({{1}})}, {2, mat({{3}})}});
    auto fs = local_factors(alg);
    CHECK(basis_indices(fs[0], pp) == std::vector<int>{1});
  }
  {
    // T2, T3 scalar mod 5, T5 not: greedy selection skips 2 and 3.
    CommutingMatrixAlgebra alg(pp, 2,
                               {{1, IntMatrix::identity(2)},
                                {2, mat({{2, 5}, {0, 2}})},
                                {3, mat({{3, 0}, {0, 3}})},
                                {5, mat({{1, 1}, {0, 1}})}});
    auto fs = local_factors(alg);
    REQUIRE(fs.size() == 1);
    CHECK(basis_indices(fs[0], pp) == std::vector<int>{1, 5});
  }
  {
    // T2 = 2 + 5N generates Z_5[5N], a free algebra of rank 2.
    CommutingMatrixAlgebra alg(pp, 2, {{2, mat({{2, 5}, {0, 2}})}, {3, mat({{3, 0}, {0, 3}})}});
    auto fs = local_factors(alg);
    CHECK(basis_indices(fs[0], pp) == std::vector<int>{1, 2});
    CHECK(span_defect(fs[0], pp) == 1);
  }
  {
    // Only scalars stored: insufficient labels.
    CommutingMatrixAlgebra alg(pp, 2, {{2, mat({{2, 0}, {0, 2}})}, {3, mat({{3, 0}, {0, 3}})}});
    auto fs = local_factors(alg);
    CHECK_THROWS_AS(basis_indices(fs[0], pp), Error);
  }
}

TEST_CASE("exhaustive idempotent search agrees on small single-generator algebras") {
  std::mt19937_64 rng(34);
  struct Case {
    long ell;
    int N;
    int deg;
  };
  for (Case c : {Case{2, 3, 3}, Case{3, 2, 3}, Case{3, 3, 2}, Case{5, 2, 2}, Case{7, 1, 3}, Case{2, 5, 2}}) {
    PrimePower pp(Int(c.ell), c.N);
    const long m = pp.modulus().get_si();
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<long> f(static_cast<std::size_t>(c.deg) + 1);
      for (auto& x : f) x = static_cast<long>(rng() % static_cast<unsigned long>(m));
      f.back() = 1;
      auto alg = single(f, pp);
      auto lifted = lift_idempotents(decompose_mod_ell(alg), alg);
      check_complete(lifted, static_cast<std::size_t>(c.deg), pp);
      CHECK(idempotent_closure(lifted.idempotents, pp) == brute_idempotents(f, m));
    }
  }
}
