#include "hecke/fpoly.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke {

namespace {

using i64 = std::int64_t;

i64 mulmod(i64 a, i64 b, i64 p) { return static_cast<i64>((static_cast<__int128>(a) * b) % p); }

i64 norm(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}

i64 powmod_scalar(i64 a, i64 e, i64 p) {
  i64 r = 1 % p;
  a = norm(a, p);
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

i64 inv_scalar(i64 a, i64 p) {
  require(norm(a, p) != 0, "F_p: division by zero");
  return powmod_scalar(a, p - 2, p);
}

void check_same_field(const FpPoly& a, const FpPoly& b) {
  require(a.prime() == b.prime(), "F_p polynomials over different primes");
}

// p-th root of a polynomial whose derivative vanishes: f(x) = g(x^p).
FpPoly pth_root(const FpPoly& f) {
  const i64 p = f.prime();
  std::vector<i64> c;
  for (std::size_t i = 0; i < f.coeffs().size(); i += static_cast<std::size_t>(p)) c.push_back(f.coeffs()[i]);
  return FpPoly(p, c);  // a^p = a in F_p
}

void squarefree_parts(const FpPoly& f, int scale, std::vector<std::pair<FpPoly, int>>& out) {
  const i64 p = f.prime();
  if (f.degree() < 1) return;
  FpPoly d = f.derivative();
  if (d.is_zero()) {
    squarefree_parts(pth_root(f), scale * static_cast<int>(p), out);
    return;
  }
  FpPoly c = gcd(f, d);
  FpPoly w = f / c;
  int i = 1;
  while (!w.is_one()) {
    FpPoly y = gcd(w, c);
    FpPoly fac = w / y;
    if (fac.degree() > 0) out.emplace_back(fac.monic(), i * scale);
    w = y;
    c = c / y;
    ++i;
  }
  if (c.degree() > 0) squarefree_parts(pth_root(c), scale * static_cast<int>(p), out);
}

std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly f) {
  std::vector<std::pair<FpPoly, int>> out;
  const i64 p = f.prime();
  const FpPoly x = FpPoly::x(p);
  FpPoly h = x % f;
  for (int i = 1; 2 * i <= f.degree(); ++i) {
    h = powmod(h, Int(p), f);
    FpPoly g = gcd(f, h - x);
    if (!g.is_one()) {
      out.emplace_back(g, i);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f.monic(), f.degree());
  return out;
}

void equal_degree(const FpPoly& f, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  const i64 p = f.prime();
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  const int n = f.degree();
  Int q = ipow(Int(p), static_cast<unsigned long>(d));
  while (true) {
    std::vector<i64> c(static_cast<std::size_t>(n));
    for (auto& x : c) x = static_cast<i64>(rng() % static_cast<std::uint64_t>(p));
    FpPoly a(p, c);
    if (a.degree() < 1) continue;
    FpPoly b;
    if (p == 2) {
      // Trace map a + a^2 + ... + a^(2^(d-1)).
      FpPoly t = a % f;
      b = t;
      for (int i = 1; i < d; ++i) {
        t = (t * t) % f;
        b = b + t;
      }
    } else {
      b = powmod(a, (q - 1) / 2, f) - FpPoly::constant(p, 1);
    }
    FpPoly g = gcd(f, b);
    if (g.degree() > 0 && g.degree() < n) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace

FpPoly::FpPoly(std::int64_t p, std::vector<std::int64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  require(p >= 2, "F_p: bad prime");
  for (auto& x : c_) x = norm(x, p_);
  trim();
}

FpPoly FpPoly::from_ints(std::int64_t p, const std::vector<Int>& coeffs) {
  std::vector<i64> c;
  c.reserve(coeffs.size());
  for (const auto& x : coeffs) c.push_back(mod(x, Int(p)).get_si());
  return FpPoly(p, c);
}

std::vector<Int> FpPoly::to_ints() const {
  std::vector<Int> out;
  for (auto x : c_) out.emplace_back(static_cast<long>(x));
  return out;
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  i64 inv = inv_scalar(lead(), p_);
  std::vector<i64> c = c_;
  for (auto& x : c) x = mulmod(x, inv, p_);
  return FpPoly(p_, c);
}

FpPoly FpPoly::derivative() const {
  std::vector<i64> c;
  for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(mulmod(c_[i], static_cast<i64>(i) % p_, p_));
  return FpPoly(p_, c);
}

std::int64_t FpPoly::eval(std::int64_t x) const {
  i64 r = 0;
  x = norm(x, p_);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = norm(mulmod(r, x, p_) + *it, p_);
  return r;
}

bool operator<(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  // Compare from the leading coefficient down so the ordering is stable
  // under trimming.
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  }
  return false;
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  check_same_field(a, b);
  std::vector<i64> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return FpPoly(a.p_, c);
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
  check_same_field(a, b);
  std::vector<i64> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return FpPoly(a.p_, c);
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  check_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return FpPoly(a.p_, {});
  std::vector<i64> c(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = (c[i + j] + mulmod(a.c_[i], b.c_[j], a.p_)) % a.p_;
  return FpPoly(a.p_, c);
}

std::string FpPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c_[i];
    } else {
      if (c_[i] != 1) os << c_[i] << '*';
      os << 'x';
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

FpDivMod divmod(const FpPoly& a, const FpPoly& b) {
  check_same_field(a, b);
  require(!b.is_zero(), "F_p polynomial division by zero");
  const i64 p = a.prime();
  std::vector<i64> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {FpPoly(p, {}), a};
  std::vector<i64> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const i64 inv = inv_scalar(b.lead(), p);
  for (int i = a.degree(); i >= db; --i) {
    i64 coef = mulmod(r[static_cast<std::size_t>(i)], inv, p);
    q[static_cast<std::size_t>(i - db)] = coef;
    if (coef == 0) continue;
    for (int j = 0; j <= db; ++j) {
      auto k = static_cast<std::size_t>(i - db + j);
      r[k] = norm(r[k] - mulmod(coef, b.coeffs()[static_cast<std::size_t>(j)], p), p);
    }
  }
  return {FpPoly(p, q), FpPoly(p, r)};
}

FpPoly operator%(const FpPoly& a, const FpPoly& b) { return divmod(a, b).remainder; }
FpPoly operator/(const FpPoly& a, const FpPoly& b) { return divmod(a, b).quotient; }

FpPoly gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

FpBezout extended_gcd(const FpPoly& a, const FpPoly& b) {
  const i64 p = a.prime();
  FpPoly r0 = a, r1 = b;
  FpPoly s0 = FpPoly::constant(p, 1), s1(p, {});
  FpPoly t0(p, {}), t1 = FpPoly::constant(p, 1);
  while (!r1.is_zero()) {
    FpDivMod qr = divmod(r0, r1);
    FpPoly r2 = qr.remainder;
    FpPoly s2 = s0 - qr.quotient * s1;
    FpPoly t2 = t0 - qr.quotient * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  FpPoly inv = FpPoly::constant(p, inv_scalar(r0.lead(), p));
  return {r0 * inv, s0 * inv, t0 * inv};
}

FpPoly powmod(const FpPoly& base, const Int& exponent, const FpPoly& modulus) {
  FpPoly result = FpPoly::constant(base.prime(), 1) % modulus;
  FpPoly b = base % modulus;
  const std::size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
  if (exponent == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = (result * result) % modulus;
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result = (result * b) % modulus;
  }
  return result;
}

std::vector<FpFactor> factor(const FpPoly& f) {
  require(!f.is_zero(), "cannot factor the zero polynomial");
  std::vector<FpFactor> out;
  if (f.degree() == 0) return out;
  std::vector<std::pair<FpPoly, int>> sqf;
  squarefree_parts(f.monic(), 1, sqf);
  std::mt19937_64 rng(0x5eedULL);
  for (const auto& [part, mult] : sqf) {
    for (const auto& [block, d] : distinct_degree(part)) {
      std::vector<FpPoly> pieces;
      equal_degree(block, d, rng, pieces);
      for (auto& piece : pieces) out.push_back({piece, mult});
    }
  }
  std::sort(out.begin(), out.end(), [](const FpFactor& a, const FpFactor& b) {
    if (a.poly == b.poly) return a.multiplicity < b.multiplicity;
    return a.poly < b.poly;
  });
  // Identical irreducibles can arrive from different squarefree layers only
  // through a bug; merge defensively is not needed, but check.
  for (std::size_t i = 1; i < out.size(); ++i) ensure(!(out[i].poly == out[i - 1].poly), "factor: duplicate factor");
  return out;
}

bool is_irreducible(const FpPoly& f) {
  auto fs = factor(f);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

std::vector<std::int64_t> roots(const FpPoly& f) {
  std::vector<i64> out;
  for (const auto& fac : factor(f))
    if (fac.poly.degree() == 1) out.push_back(norm(-fac.poly.coeff(0), f.prime()));
  std::sort(out.begin(), out.end());
  return out;
}

FpPoly radical(const FpPoly& f) {
  FpPoly r = FpPoly::constant(f.prime(), 1);
  for (const auto& fac : factor(f)) r = r * fac.poly;
  return r;
}

FpPoly charpoly_mod_p(const IntMatrix& a, std::int64_t p) {
  require(a.square(), "charpoly: matrix must be square");
  const std::size_t n = a.rows();
  std::vector<std::vector<i64>> h(n, std::vector<i64>(n));
  const Int P(static_cast<long>(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i][j] = mod(a(i, j), P).get_si();
  // Reduce to upper Hessenberg form by similarity transforms.
  for (std::size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
    std::size_t i = m;
    while (i < n && h[i][m - 1] == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[i], h[m]);
      for (std::size_t r = 0; r < n; ++r) std::swap(h[r][i], h[r][m]);
    }
    const i64 tinv = inv_scalar(h[m][m - 1], p);
    for (std::size_t r = m + 1; r < n; ++r) {
      i64 u = mulmod(h[r][m - 1], tinv, p);
      if (u == 0) continue;
      for (std::size_t c = 0; c < n; ++c) h[r][c] = norm(h[r][c] - mulmod(u, h[m][c], p), p);
      for (std::size_t c = 0; c < n; ++c) h[c][m] = norm(h[c][m] + mulmod(u, h[c][r], p), p);
    }
  }
  // Recurrence on leading principal minors.
  std::vector<FpPoly> polys;
  polys.push_back(FpPoly::constant(p, 1));
  const FpPoly x = FpPoly::x(p);
  for (std::size_t m = 1; m <= n; ++m) {
    FpPoly next = (x - FpPoly::constant(p, h[m - 1][m - 1])) * polys[m - 1];
    i64 prod = 1;
    for (std::size_t i = m - 1; i-- > 0;) {
      prod = mulmod(prod, h[i + 1][i], p);
      i64 coef = mulmod(h[i][m - 1], prod, p);
      if (coef != 0) next = next - FpPoly::constant(p, coef) * polys[i];
    }
    polys.push_back(next);
  }
  return polys[n];
}

FpPoly minimal_polynomial_mod_p(const IntMatrix& x, const IntMatrix& unit, std::int64_t p) {
  require(x.square() && unit.rows() == x.rows() && unit.cols() == x.cols(), "minpoly: shape mismatch");
  PrimePower field(Int(static_cast<long>(p)), 1);
  const std::size_t len = x.rows() * x.cols();
  struct Row {
    std::vector<i64> v;
    std::vector<i64> comb;
    std::size_t pivot;
  };
  std::vector<Row> basis;
  IntMatrix power = reduce(unit, field);
  const IntMatrix xr = reduce(x, field);
  for (std::size_t k = 0; k <= len; ++k) {
    std::vector<i64> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = power.data()[i].get_si();
    std::vector<i64> comb(k + 1, 0);
    comb[k] = 1;
    for (const auto& b : basis) {
      i64 f = v[b.pivot];
      if (f == 0) continue;
      for (std::size_t i = 0; i < len; ++i) v[i] = norm(v[i] - mulmod(f, b.v[i], p), p);
      for (std::size_t i = 0; i < b.comb.size(); ++i) comb[i] = norm(comb[i] - mulmod(f, b.comb[i], p), p);
    }
    auto it = std::find_if(v.begin(), v.end(), [](i64 c) { return c != 0; });
    if (it == v.end()) return FpPoly(p, comb);
    std::size_t piv = static_cast<std::size_t>(it - v.begin());
    i64 inv = inv_scalar(v[piv], p);
    for (auto& c : v) c = mulmod(c, inv, p);
    for (auto& c : comb) c = mulmod(c, inv, p);
    basis.push_back({std::move(v), std::move(comb), piv});
    power = mul_mod(power, xr, field);
  }
  fail(ErrorKind::Internal, "minimal polynomial search did not terminate");
}

IntMatrix eval_mod_p(const FpPoly& f, const IntMatrix& x, const IntMatrix& unit) {
  PrimePower field(Int(static_cast<long>(f.prime())), 1);
  IntMatrix result(x.rows(), x.cols());
  for (std::size_t i = f.coeffs().size(); i-- > 0;) {
    result = mul_mod(result, x, field);
    result = add_mod(result, scale_mod(Int(static_cast<long>(f.coeffs()[i])), unit, field), field);
  }
  return result;
}

}  // namespace hecke
