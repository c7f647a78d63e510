// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>

#include "corpus.hpp"
#include "hecke/artinian.hpp"
#include "hecke/fpoly.hpp"
#include "hecke/orbits.hpp"

using namespace hecke;
using namespace hecke::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string failure;

  void check(bool cond, const std::string& what) {
    if (cond || !ok) {
      ok = ok && cond;
      return;
    }
    ok = false;
    failure = what;
  }
};

std::shared_ptr<const HeckeSpace> shared(HeckeSpace s) {
  validate(s);
  return std::make_shared<const HeckeSpace>(std::move(s));
}

std::vector<long> random_monic(std::mt19937_64& rng, int deg, long lo, long hi) {
  std::vector<long> f(static_cast<std::size_t>(deg) + 1);
  for (auto& c : f) c = lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
  f.back() = 1;
  return f;
}

// ---------------------------------------------------------------------------

Outcome idempotent_lifting() {
  Outcome o;
  std::mt19937_64 rng(101);
  int algebras = 0, idempotents = 0;
  for (long ell : {2L, 3L, 5L, 7L})
    for (int k = 0; k < 50; ++k) {
      const int d = 1 + static_cast<int>(rng() % 6);
      const int N = 1 + static_cast<int>(rng() % 8);
      const PrimePower pp(Int(ell), N);
      auto [P, Pinv] = random_unimodular(rng, static_cast<std::size_t>(d), 6);
      const IntMatrix t = P * companion(random_monic(rng, d, -20, 20)) * Pinv;
      const IntMatrix id = IntMatrix::identity(static_cast<std::size_t>(d));
      const IntMatrix t3 = t * t + Int(static_cast<long>(rng() % 7)) * t;
      const IntMatrix t5 = t * t * t - t + Int(static_cast<long>(rng() % 5)) * id;
      const CommutingMatrixAlgebra alg(pp, static_cast<std::size_t>(d), {{2, t}, {3, t3}, {5, t5}});

      const auto residual = decompose_mod_ell(alg);
      // T_2 generates: maximal ideals are the distinct irreducible factors of its charpoly mod ell.
      const auto oracle = factor(charpoly_mod_p(t, ell)).size();
      o.check(residual.idempotents.size() == oracle, "maximal ideal count differs from factorisation of T_2");

      std::vector<IntMatrix> lifted;
      for (const auto& e0 : residual.idempotents) {
        const auto tr = lift_idempotent_traced(e0, alg);
        for (std::size_t n = 0; n < tr.defects.size(); ++n)
          o.check(tr.defects[n] >= std::min(N, 1 << std::min<std::size_t>(n, 20)), "defect after n steps below 2^n");
        o.check(mul_mod(tr.idempotent, tr.idempotent, pp) == reduce(tr.idempotent, pp), "e^2 != e mod ell^N");
        o.check(reduce(tr.idempotent, pp.with_precision(1)) == reduce(e0, pp.with_precision(1)), "lift changed e mod ell");
        lifted.push_back(tr.idempotent);
      }
      IntMatrix sum(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < lifted.size(); ++i) {
        sum = add_mod(sum, lifted[i], pp);
        for (std::size_t j = 0; j < lifted.size(); ++j)
          if (i != j) o.check(is_zero_mod(mul_mod(lifted[i], lifted[j], pp), pp), "idempotents not orthogonal");
      }
      o.check(sum == reduce(id, pp), "idempotents do not sum to 1");
      ++algebras;
      idempotents += static_cast<int>(lifted.size());
    }
  o.detail = std::to_string(algebras) + " algebras, " + std::to_string(idempotents) + " idempotents";
  return o;
}

Outcome brute_force_oracle() {
  Outcome o;
  std::mt19937_64 rng(102);
  int algebras = 0, exhaustive_cases = 0;
  const long max_size = 3L * 3 * 3 * 3 * 3 * 9;
  for (long ell : {2L, 3L, 5L, 7L})
    for (int N = 1;; ++N) {
      if (ipow(Int(ell), static_cast<unsigned long>(N)) > max_size) break;
      for (int deg = 1;; ++deg) {
        const Int size = ipow(Int(ell), static_cast<unsigned long>(N * deg));
        if (size > max_size) break;
        const PrimePower pp(Int(ell), N);
        const long m = pp.modulus().get_si();
        // Every monic f when there are at most 256 of them, else a sample.
        const bool exhaustive = size <= 256;
        exhaustive_cases += exhaustive ? 1 : 0;
        const long count = exhaustive ? size.get_si() : 8;
        for (long trial = 0; trial < count; ++trial) {
          std::vector<long> f;
          if (exhaustive) {
            f.assign(static_cast<std::size_t>(deg) + 1, 1);
            long rest = trial;
            for (int i = 0; i < deg; ++i, rest /= m) f[static_cast<std::size_t>(i)] = rest % m;
          } else {
            f = random_monic(rng, deg, 0, m - 1);
          }
          const CommutingMatrixAlgebra alg(pp, static_cast<std::size_t>(deg), {{2, companion(f)}});
          const auto lifted = lift_idempotents(decompose_mod_ell(alg), alg);
          o.check(idempotent_closure(lifted.idempotents, pp) == brute_idempotents(f, m),
                  "idempotent set differs from exhaustive search");
          ++algebras;
        }
      }
    }
  o.detail = std::to_string(algebras) + " single-generator algebras up to 2187 elements, " +
             std::to_string(exhaustive_cases) + " (ell, N, deg) cases exhaustive";
  return o;
}

std::vector<std::shared_ptr<const HeckeSpace>> orbit_corpus() {
  std::vector<std::shared_ptr<const HeckeSpace>> out;
  for (auto& s : corpus_spaces())
    for (auto& q : rational_orbits(s)) out.push_back(shared(std::move(q.space)));
  std::mt19937_64 rng(103);
  for (int k = 0; k < 12; ++k) {
    const std::size_t d = 2 + rng() % 4;
    std::vector<std::vector<long>> systems(d, std::vector<long>(6));
    for (auto& sys : systems)
      for (auto& x : sys) x = static_cast<long>(rng() % 50) - 25;
    // Force residual coincidences between some systems.
    for (std::size_t i = 1; i < d; i += 2)
      for (std::size_t n = 0; n < 6; ++n) systems[i][n] = systems[i - 1][n] + 5 * static_cast<long>(rng() % 3);
    auto [P, Pinv] = random_unimodular(rng, d, 8);
    out.push_back(shared(diagonal_space(systems, P, Pinv)));
  }
  return out;
}

Outcome echelonisation() {
  Outcome o;
  int orbits = 0;
  for (const auto& s : orbit_corpus())
    for (long ell : {2L, 3L, 5L, 7L})
      for (const auto& orb : ell_adic_orbits(s, Int(ell), 4)) {
        const std::size_t r = orb.rank();
        for (std::size_t j = 0; j < r; ++j) {
          const auto& row = orb.dual.at(orb.basis_indices[j]);
          o.check(row.size() == r, "dual row has the wrong length");
          for (std::size_t i = 0; i < r; ++i) o.check(row[i] == (i == j ? 1 : 0), "a_{n_j,i} != delta_ij");
        }
        ++orbits;
      }
  o.detail = std::to_string(orbits) + " orbits";
  return o;
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

Outcome planted_exponents() {
  Outcome o;
  std::mt19937_64 rng(104);
  int pairs = 0;
  const CompareOptions all{IndexPolicy::All, {}};
  const int N = 6;
  const RingRef Z = base_ring(PrimePower(Int(5), N));

  // Weak: A + ell^t u C against the orbit containing A and B.
  const std::vector<long> A = {1, 3, 7, 2, 4, 11}, B = {6, 8, 12, 7, 9, 16}, C = {2, 4, 9, 3, 0, 1};
  auto series = [](const std::vector<long>& sys) {
    std::vector<Int> out{Int(1)};
    for (long x : sys) out.emplace_back(x);
    return out;
  };
  for (int space = 0; space < 8; ++space) {
    auto [P, Pinv] = random_unimodular(rng, 3, 6);
    auto s = shared(diagonal_space({A, B, C}, P, Pinv));
    const auto orbits = ell_adic_orbits(s, Int(5), N);
    const EllAdicOrbit& big = orbits[0].rank() == 2 ? orbits[0] : orbits[1];
    for (int t = 0; t < N; ++t) {
      const long u = 1 + static_cast<long>(rng() % 4);
      std::vector<RingElement> g;
      const auto a = series(A), c = series(C);
      for (std::size_t n = 0; n < a.size(); ++n) g.push_back(Z->from_int(a[n] + ipow(Int(5), t) * u * c[n]));
      o.check(congruence_exponent_weak(g, big, s->bound, all).exponent == Valuation::exact(t, 1),
              "weak planted exponent");
      ++pairs;
    }
    std::vector<RingElement> self;
    for (const auto& x : series(A)) self.push_back(Z->from_int(x));
    o.check(congruence_exponent_weak(self, big, s->bound, all).exponent == Valuation::at_least(N, 1),
            "weak self-congruence is not the at-least sentinel");
    if (space == 0) {
      const RingRef R = make_ring(Int(5), N, zp({-5, 0, 1}), 2);
      for (int t = 0; t < 2 * N; ++t) {
        std::vector<RingElement> g;
        const auto a = series(A), c = series(C);
        for (std::size_t n = 0; n < a.size(); ++n)
          g.push_back(R->from_int(a[n]) + R->uniformizer().pow(static_cast<unsigned long>(t)) * R->from_int(c[n]));
        o.check(congruence_exponent_weak(g, big, s->bound, all).exponent == Valuation::exact(t, 2),
                "weak planted exponent, ramified");
        ++pairs;
      }
    }
  }

  // Strong: Galois conjugates perturbed by lambda^t.
  for (int seed = 0; seed < 2; ++seed)
    for (auto [poly, e] : {std::pair{zp({-2, 0, 1}), 1}, std::pair{zp({-5, 0, 1}), 2}}) {
      const int M = 5;
      const RingRef R = make_ring(Int(5), M, poly, e);
      for (int t = 0; t < e * M; ++t) {
        std::vector<RingElement> fc, gc;
        for (int n = 1; n <= 6; ++n) {
          RingElement a = n == 1 ? R->one() : random_element(rng, R);
          if (n == 2) a = R->generator() + R->from_int(Int(3 + seed));
          RingElement c = R->from_coords({a.coords()[0], -a.coords()[1]});
          if (n == 5) c = c + R->uniformizer().pow(static_cast<unsigned long>(t));
          fc.push_back(a);
          gc.push_back(c);
        }
        const auto f = synthetic(R, fc), g = synthetic(R, gc);
        const auto rec = congruence_exponent_strong(f, g, 6, all);
        o.check(rec.exponent.is_exact() && rec.exponent.normalised() == Rational(t, e), "strong planted exponent");
        o.check(congruence_exponent_strong(f, f, 6, all).exponent.is_at_least(),
                "strong self-congruence is not the at-least sentinel");
        ++pairs;
      }
    }

  // Strong: Z_5 against a ramified ring, defect pi^t at one index.
  const RingRef R = make_ring(Int(5), N, zp({-5, 0, 1}), 2);
  for (int t = 0; t < 2 * N; ++t) {
    std::vector<RingElement> fc, gc;
    for (int n = 1; n <= 8; ++n) {
      const Int a = n == 1 ? Int(1) : Int(static_cast<unsigned long>(rng() % 15625));
      fc.push_back(Z->from_int(a));
      RingElement b = R->from_int(a);
      if (n == 4) b = b + R->uniformizer().pow(static_cast<unsigned long>(t)) * R->from_int(Int(2));
      gc.push_back(b);
    }
    const auto rec = congruence_exponent_strong(synthetic(Z, fc), synthetic(R, gc), 8, all);
    o.check(rec.exponent == Valuation::exact(t, 2), "strong planted exponent, base vs ramified");
    ++pairs;
  }
  o.check(pairs >= 100, "fewer than 100 planted pairs");
  o.detail = std::to_string(pairs) + " planted pairs";
  return o;
}

Outcome level11() {
  Outcome o;
  TempDir dir("accept-l11");
  Store store = Store::open(dir.path(), true);
  const auto keys = store.ingest(level11_space(100));
  o.check(keys.size() == 1, "level 11 should have one Q-orbit");
  for (std::int64_t ell : {2, 3, 5, 7}) {
    const auto d = store.decompose(keys[0], ell, 4);
    o.check(d.orbits.size() == 1 && d.orbits[0].rank == 1, "not a single rank-1 orbit at ell = " + std::to_string(ell));
    o.check(d.eigenforms.size() == 1 && d.eigenforms[0].resolved, "eigenform missing at ell = " + std::to_string(ell));
  }
  const auto f = to_eigenform(store.ql_orbit({11, 2, 1, 5, 1, 1}));
  const auto report = level_raising_witnesses(f, 11, 1, 2, 100);
  o.check(!report.witnesses.empty(), "no witnesses");

  // Independent recount: #E(F_p) for y^2 + y = x^3 - x^2 - 10x - 20.
  std::set<std::pair<std::int64_t, int>> expected, got;
  for (const auto& w : report.witnesses) got.insert({w.p, w.sign});
  for (std::int64_t p = 2; p < 100; ++p) {
    if (!is_prime(Int(static_cast<long>(p))) || p == 5 || p == 11) continue;
    long points = 1;
    for (std::int64_t x = 0; x < p; ++x)
      for (std::int64_t y = 0; y < p; ++y)
        if (((y * y + y - x * x * x + x * x + 10 * x + 20) % p + p) % p == 0) ++points;
    const long ap = static_cast<long>(p) + 1 - points;
    for (int sign : {1, -1})
      if (((ap - sign * (p + 1)) % 5 + 5) % 5 == 0) expected.insert({p, sign});
  }
  o.check(got == expected, "witnesses differ from an independent point count");
  o.detail = std::to_string(report.witnesses.size()) + " witnesses among " + std::to_string(report.primes_scanned) +
             " primes, all re-verified";
  return o;
}

Outcome sweep_equivalence() {
  Outcome o;
  TempDir base("accept-sweep");
  {
    Store store = Store::open(base.path() / "s", true);
    for (const auto& s : corpus_spaces())
      for (const auto& k : store.ingest(s)) store.decompose(k, 5, kCorpusPrecision);
  }
  std::vector<SweepPair> pairs;
  {
    const Store store = Store::open(base.path() / "s");
    auto all = strong_pairs(store, 5);
    o.check(all.size() >= 20, "corpus has fewer than 20 pairs");
    std::mt19937_64 rng(106);
    std::shuffle(all.begin(), all.end(), rng);
    pairs.assign(all.begin(), all.begin() + std::min<std::ptrdiff_t>(20, static_cast<std::ptrdiff_t>(all.size())));
  }
  std::optional<std::multiset<std::string>> reference;
  std::optional<std::map<std::string, std::string>> reference_files;
  for (int workers : {1, 2, 4, 8}) {
    const fs::path root = base.path() / ("w" + std::to_string(workers));
    fs::copy(base.path() / "s", root, fs::copy_options::recursive);
    Store store = Store::open(root);
    const auto r = congruence_sweep(store, pairs, {workers, std::nullopt, IndexPolicy::Coprime});
    std::multiset<std::string> records;
    for (const auto& rec : store.congruences()) records.insert(serialize(rec));
    o.check(records.size() == pairs.size(), "one record per pair expected");
    o.check(r.computed == r.items, "first sweep should compute every item");
    auto files = corpus_snapshot(root / "congruences");
    if (!reference) {
      reference = records;
      reference_files = files;
    }
    o.check(records == *reference, "record multiset differs with " + std::to_string(workers) + " workers");
    o.check(files == *reference_files, "stored files differ with " + std::to_string(workers) + " workers");
    const auto again = congruence_sweep(store, pairs, {workers, std::nullopt, IndexPolicy::Coprime});
    o.check(again.computed == 0, "rerun recomputed items");
    o.check(again.records == r.records, "rerun changed records");
  }
  o.detail = std::to_string(pairs.size()) + " pairs x {1,2,4,8} workers, rerun computed 0";
  return o;
}

Outcome golden_round_trip() {
  Outcome o;
  const fs::path golden_dir = HECKE_GOLDEN_DIR;
  const auto golden = snapshot(golden_dir);
  o.check(!golden.empty(), "no golden files");
  for (const auto& [rel, text] : golden) o.check(reserialize(text) == text, "round trip differs: " + rel);
  TempDir dir("accept-golden");
  Store store = Store::open(dir.path(), true);
  build_corpus_store(store);
  o.check(corpus_snapshot(dir.path()) == golden, "rebuilt corpus store differs from golden files");
  o.detail = std::to_string(golden.size()) + " files";
  return o;
}

Outcome partition_invariants() {
  Outcome o;
  int spaces = 0, eigenforms = 0, unresolved = 0;
  std::vector<HeckeSpace> all = corpus_spaces();
  for (const auto& s : orbit_corpus()) all.push_back(*s);
  for (const auto& space : all) {
    for (long ell : {2L, 3L, 5L, 7L}) {
      std::size_t total = 0;
      for (const auto& q : rational_orbits(space)) {
        auto qs = shared(q.space);
        std::size_t qtotal = 0;
        for (const auto& orb : ell_adic_orbits(qs, Int(ell), 4)) {
          qtotal += orb.rank();
          std::size_t r = 0;
          for (const auto& f : qell_orbits(orb)) {
            r += f.rank;
            ++eigenforms;
            if (!f.resolved) {
              ++unresolved;
              continue;
            }
            o.check(eigenform_fingerprint(f) == orb.fingerprint, "eigenform fingerprint differs from its orbit");
          }
          o.check(r == orb.rank(), "Q_ell-eigenform ranks do not sum to r");
        }
        o.check(qtotal == q.rank, "orbit ranks do not sum to the Q-orbit dimension");
        total += qtotal;
      }
      o.check(total == space.dim, "orbit ranks do not sum to d");
    }
    ++spaces;
  }
  o.detail = std::to_string(spaces) + " spaces x 4 primes, " + std::to_string(eigenforms) + " eigenforms (" +
             std::to_string(unresolved) + " unresolved)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "idempotent lifting law", 30, idempotent_lifting},
      {2, "brute-force oracle equivalence", 60, brute_force_oracle},
      {3, "echelonised dual bases", 5, echelonisation},
      {4, "planted congruence exponents", 30, planted_exponents},
      {5, "level 11 end to end", 30, level11},
      {6, "sweep equivalence and idempotence", 60, sweep_equivalence},
      {7, "golden round trip", 10, golden_round_trip},
      {8, "partition invariants", 10, partition_invariants},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs >= c.limit_s) {
      o.ok = false;
      o.failure = "too slow";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, c.limit_s);
    std::cout << "criterion " << c.number << " " << (o.ok ? "PASS" : "FAIL") << "  " << c.name << ": "
              << (o.ok ? o.detail : o.failure) << " (" << timing << ")" << std::endl;
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
