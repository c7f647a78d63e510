#include "hecke/prime_power.hpp"

#include "hecke/error.hpp"

namespace hecke {

PrimePower::PrimePower(const Int& ell, int precision) : ell_(ell), precision_(precision) {
  require(is_prime(ell), "ell = " + ell.get_str() + " is not prime");
  require(precision >= 1, "precision must be >= 1");
  modulus_ = ipow(ell, static_cast<unsigned long>(precision));
}

std::string PrimePower::to_string() const {
  return ell_.get_str() + "^" + std::to_string(precision_);
}

}  // namespace hecke
