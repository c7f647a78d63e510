#pragma once

#include <compare>
#include <string>

#include "hecke/integer.hpp"

namespace hecke {

/// The coefficient ring Z/ell^N.
class PrimePower {
 public:
  PrimePower(const Int& ell, int precision);

  const Int& ell() const noexcept { return ell_; }
  int precision() const noexcept { return precision_; }
  /// ell^precision.
  const Int& modulus() const noexcept { return modulus_; }

  Int reduce(const Int& x) const { return mod(x, modulus_); }
  int valuation(const Int& x) const { return valuation_capped(mod(x, modulus_), ell_, precision_); }
  bool is_unit(const Int& x) const { return valuation(x) == 0; }
  Int inverse(const Int& unit) const { return inverse_mod(unit, modulus_); }

  /// Same ell at another precision.
  PrimePower with_precision(int precision) const { return PrimePower(ell_, precision); }

  long ell_long() const { return ell_.get_si(); }

  friend bool operator==(const PrimePower& a, const PrimePower& b) {
    return a.ell_ == b.ell_ && a.precision_ == b.precision_;
  }

  std::string to_string() const;

 private:
  Int ell_;
  int precision_;
  Int modulus_;
};

}  // namespace hecke
