#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace hecke {

using Int = mpz_class;
using Rational = mpq_class;

/// ell^k for k >= 0.
Int ipow(const Int& base, unsigned long k);

/// Canonical representative of x in [0, m).
Int mod(const Int& x, const Int& m);

/// Inverse of a unit u modulo m. Throws if gcd(u, m) != 1.
Int inverse_mod(const Int& u, const Int& m);

/// ell-adic valuation of x, capped at `cap`. Zero (mod ell^cap) returns cap.
int valuation_capped(const Int& x, const Int& ell, int cap);

/// Deterministic primality test by trial division; fine for the small
/// primes and levels this library meets.
bool is_prime(const Int& n);
bool is_prime(std::int64_t n);

/// Primes p with lo <= p <= hi, ascending.
std::vector<std::int64_t> primes_in_range(std::int64_t lo, std::int64_t hi);

/// Distinct prime divisors of n > 0, ascending.
std::vector<std::int64_t> prime_divisors(std::int64_t n);

std::string to_string(const Int& x);
Int parse_int(const std::string& text);

}  // namespace hecke
