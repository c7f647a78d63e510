#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hecke/orbits.hpp"
#include "hecke/padic.hpp"

namespace hecke {

enum class CongruenceKind { Weak, Strong };

/// Which coefficient indices enter a comparison.
enum class IndexPolicy {
  Coprime,  // only n coprime to ell * lcm(levels)
  All,
};

std::string to_string(CongruenceKind k);
std::string to_string(IndexPolicy p);
CongruenceKind parse_congruence_kind(const std::string& s);
IndexPolicy parse_index_policy(const std::string& s);

struct CompareOptions {
  IndexPolicy policy = IndexPolicy::Coprime;
  /// Levels of both sides; with Coprime, indices sharing a factor with
  /// ell * lcm(levels) are skipped.
  std::vector<int> levels;
};

/// Indices 1..bound selected by the options.
std::vector<int> compared_indices(const Int& ell, int bound, const CompareOptions& options);

struct CongruenceRecord {
  std::string left;
  std::string right;
  CongruenceKind kind = CongruenceKind::Weak;
  /// Minimum of the breakdown, in lambda-units of the comparison ring.
  Valuation exponent = Valuation::exact(0, 1);
  int sturm_bound_used = 0;
  /// Powers of ell to which both sides were known.
  int precision_used = 0;
  IndexPolicy policy = IndexPolicy::Coprime;
  /// ell * lcm(levels) under the coprime policy, 1 otherwise.
  std::int64_t excluded_modulus = 1;
  std::map<int, Valuation> breakdown;

  friend bool operator==(const CongruenceRecord&, const CongruenceRecord&) = default;
};

/// Minimum of the per-index valuations; an at-least value only when all are.
Valuation min_valuation(const std::map<int, Valuation>& breakdown, int e, int lambda_precision);

/// n-th weak defect h_n = g_n - sum_i g_{n_i} a_{n,i}, with g in a ring of
/// residue characteristic ell; `g` holds g_1, g_2, ...
RingElement weak_defect(const std::vector<RingElement>& g, const EllAdicOrbit& orbit, int n);

CongruenceRecord congruence_exponent_weak(const std::vector<RingElement>& g, const EllAdicOrbit& orbit, int bound,
                                          const CompareOptions& options = {});

/// A ring holding images of the generators of two local rings: one
/// per Q_ell-embedding class of the pair.
struct Embedding {
  RingRef ring;
  RingElement left_generator;
  RingElement right_generator;
};

/// All embedding classes of (a, b) into a common discrete valuation ring,
/// working at `precision`. Throws Computation when the tensor product
/// cannot be separated within the precision cap.
std::vector<Embedding> common_embeddings(const RingRef& a, const RingRef& b, int precision,
                                         int precision_cap = 64);

RingElement embed(const RingElement& x, const RingElement& generator_image);

CongruenceRecord congruence_exponent_strong(const PadicEigenform& f, const PadicEigenform& g, int bound,
                                            const CompareOptions& options = {});

struct Witness {
  std::int64_t p = 0;
  int sign = 1;
  Valuation valuation = Valuation::exact(0, 1);

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct WitnessReport {
  std::string eigenform;
  int m = 1;  // lambda-units
  std::int64_t lo = 2;
  std::int64_t hi = 2;  // primes lo <= p < hi
  std::size_t primes_scanned = 0;
  std::vector<Witness> witnesses;

  /// Distinct witness primes over primes scanned (0 for an empty scan).
  Rational density() const;
};

/// Primes lo <= p < hi coprime to ell * level with a_p = +-(p+1) mod lambda^m.
WitnessReport level_raising_witnesses(const PadicEigenform& f, int level, int m, std::int64_t lo, std::int64_t hi);

}  // namespace hecke
