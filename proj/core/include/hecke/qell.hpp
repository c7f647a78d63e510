#pragma once

#include <vector>

#include "hecke/padic.hpp"
#include "hecke/zp_poly.hpp"

namespace hecke {

/// One factor of a monic polynomial over Q_ell, read from its reduction
/// modulo ell^N.
struct QlPiece {
  bool resolved = false;
  /// Unresolved because more precision could separate it (as opposed to a
  /// repeated or wildly ramified factor this method cannot split).
  bool needs_precision = false;
  int degree = 0;
  /// Resolved: a discrete valuation ring and a root of the input in it.
  RingRef ring;
  RingElement root;
  /// Unresolved: the unseparated factor, monic, modulo ell^precision.
  ZPoly block;
  int precision = 0;
};

/// Split f into Q_ell-irreducible factors as far as the precision allows.
/// Pieces come in a deterministic order.
std::vector<QlPiece> factor_qell(const ZPoly& f, const PrimePower& pp);

}  // namespace hecke
