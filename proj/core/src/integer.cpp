#include "hecke/integer.hpp"

#include "hecke/error.hpp"

namespace hecke {

Int ipow(const Int& base, unsigned long k) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), k);
  return r;
}

Int mod(const Int& x, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int inverse_mod(const Int& u, const Int& m) {
  Int r;
  if (m == 1) return 0;
  if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()) == 0) {
    fail(ErrorKind::Internal, "inverse_mod: " + u.get_str() + " is not a unit mod " + m.get_str());
  }
  return r;
}

int valuation_capped(const Int& x, const Int& ell, int cap) {
  if (x == 0) return cap;
  Int y = x;
  int v = 0;
  while (v < cap && mpz_divisible_p(y.get_mpz_t(), ell.get_mpz_t())) {
    mpz_divexact(y.get_mpz_t(), y.get_mpz_t(), ell.get_mpz_t());
    ++v;
  }
  return v;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (!n.fits_slong_p()) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
  }
  return is_prime(static_cast<std::int64_t>(n.get_si()));
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_in_range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = std::max<std::int64_t>(lo, 2); p <= hi; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  require(n > 0, "prime_divisors: n must be positive");
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string to_string(const Int& x) { return x.get_str(); }

Int parse_int(const std::string& text) {
  Int r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    fail(ErrorKind::InvalidArgument, "not a decimal integer: '" + text + "'");
  }
  return r;
}

}  // namespace hecke
