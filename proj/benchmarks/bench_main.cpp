#include <benchmark/benchmark.h>

#include <filesystem>
#include <memory>
#include <random>

#include "hecke/artinian.hpp"
#include "hecke/congruence.hpp"
#include "hecke/orbits.hpp"
#include "hecke/store.hpp"
#include "hecke/sweep.hpp"

using namespace hecke;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, long bound) {
  IntMatrix m(n, n);
  for (auto& x : m.data()) x = static_cast<long>(rng() % static_cast<unsigned long>(2 * bound + 1)) - bound;
  return m;
}

IntMatrix companion(const std::vector<long>& f) {
  const std::size_t d = f.size() - 1;
  IntMatrix c(d, d);
  for (std::size_t i = 1; i < d; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = -f[i];
  return c;
}

void BM_SmithForm(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const PrimePower pp(Int(5), 20);
  const IntMatrix a = random_matrix(rng, n, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(smith_form(a, pp));
}
BENCHMARK(BM_SmithForm)->Arg(8)->Arg(16)->Arg(32);

void BM_IdempotentLifting(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto d = static_cast<std::size_t>(state.range(0));
  std::vector<long> f(d + 1);
  for (auto& c : f) c = static_cast<long>(rng() % 40) - 20;
  f.back() = 1;
  const PrimePower pp(Int(3), static_cast<int>(state.range(1)));
  const IntMatrix t = companion(f);
  const CommutingMatrixAlgebra alg(pp, d, {{2, t}, {3, t * t}});
  const auto residual = decompose_mod_ell(alg);
  for (auto _ : state) benchmark::DoNotOptimize(lift_idempotents(residual, alg));
}
BENCHMARK(BM_IdempotentLifting)->Args({6, 8})->Args({6, 64})->Args({12, 64});

void BM_Level11Orbits(benchmark::State& state) {
  auto s = std::make_shared<const HeckeSpace>(level11_space(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    auto orbits = ell_adic_orbits(s, Int(5), 8);
    benchmark::DoNotOptimize(qell_orbits(orbits.front()));
  }
}
BENCHMARK(BM_Level11Orbits)->Arg(100)->Arg(1000);

void BM_QuadraticOrbits(benchmark::State& state) {
  // Two Galois-conjugate pairs glued mod 5.
  HeckeSpace s;
  s.dim = 4;
  const IntMatrix t2 = companion({-6, 0, 1}), t3 = companion({-11, 0, 1});
  IntMatrix a(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      a(i, j) = t2(i, j);
      a(i + 2, j + 2) = t3(i, j);
    }
  const IntMatrix b = a * a + a;
  s.matrices = {{1, IntMatrix::identity(4)}, {2, a}, {3, b}};
  s.bound = 3;
  auto shared = std::make_shared<const HeckeSpace>(s);
  for (auto _ : state)
    for (const auto& o : ell_adic_orbits(shared, Int(5), static_cast<int>(state.range(0))))
      benchmark::DoNotOptimize(qell_orbits(o));
}
BENCHMARK(BM_QuadraticOrbits)->Arg(4)->Arg(16);

void BM_StrongCongruence(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const RingRef R = make_ring(Int(5), N, ZPoly{Int(-5), Int(0), Int(1)}, 2);
  const RingRef S = make_ring(Int(5), N, ZPoly{Int(-2), Int(0), Int(1)}, 1);
  auto make = [](const RingRef& ring, unsigned seed) {
    std::mt19937_64 rng(seed);
    PadicEigenform f;
    f.index = 1;
    f.rank = 2;
    f.ring = ring;
    f.attained_precision = f.working_precision = ring->precision();
    for (int n = 1; n <= 30; ++n)
      f.coefficients.push_back(n == 1 ? ring->one()
                                      : ring->from_coords({Int(static_cast<long>(rng() % 1000)),
                                                           Int(static_cast<long>(rng() % 1000))}));
    return f;
  };
  const auto f = make(R, 1), g = make(S, 2);
  for (auto _ : state) benchmark::DoNotOptimize(congruence_exponent_strong(f, g, 30, {IndexPolicy::All, {}}));
}
BENCHMARK(BM_StrongCongruence)->Arg(4)->Arg(12);

void BM_SweepRerun(benchmark::State& state) {
  const auto root = std::filesystem::temp_directory_path() / "hecke-bench-sweep";
  std::filesystem::remove_all(root);
  Store store = Store::open(root, true);
  const auto a = level11_space(60);
  for (int w : {2, 4, 6, 8}) {
    HeckeSpace s = a;
    s.weight = w;
    for (auto& [n, m] : s.matrices)
      if (n > 1) m(0, 0) += 5 * w;
    for (const auto& k : store.ingest(s)) store.decompose(k, 5, 6);
  }
  const auto pairs = strong_pairs(store, 5);
  congruence_sweep(store, pairs, {4, std::nullopt, IndexPolicy::Coprime});
  for (auto _ : state) benchmark::DoNotOptimize(congruence_sweep(store, pairs, {4, std::nullopt, IndexPolicy::Coprime}));
  std::filesystem::remove_all(root);
}
BENCHMARK(BM_SweepRerun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
