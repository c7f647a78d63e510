#include "hecke/rational.hpp"

#include <algorithm>
#include <numeric>

#include "hecke/error.hpp"
#include "hecke/fpoly.hpp"

namespace hecke {

namespace qpoly {

QPoly trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly from_z(const ZPoly& p) {
  QPoly out;
  for (const auto& c : p) out.emplace_back(c);
  return trim(out);
}

std::optional<ZPoly> to_z(const QPoly& p) {
  ZPoly out;
  for (const auto& c : p) {
    if (c.get_den() != 1) return std::nullopt;
    out.push_back(c.get_num());
  }
  return out;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return trim(out);
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return trim(out);
}

QPoly derivative(const QPoly& p) {
  QPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<long>(i));
  return trim(out);
}

QPoly monic(const QPoly& p) {
  QPoly out = trim(p);
  if (out.empty()) return out;
  const Rational lc = out.back();
  for (auto& c : out) c /= lc;
  return out;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  QPoly r = trim(a);
  const QPoly d = trim(b);
  require(!d.empty(), "qpoly: division by zero");
  if (r.size() < d.size()) return {{}, r};
  QPoly q(r.size() - d.size() + 1, Rational(0));
  while (!r.empty() && r.size() >= d.size()) {
    const std::size_t shift = r.size() - d.size();
    const Rational c = r.back() / d.back();
    q[shift] = c;
    for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
    r = trim(r);
  }
  return {trim(q), r};
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = trim(a), y = trim(b);
  while (!y.empty()) {
    QPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

}  // namespace qpoly

namespace {

bool zpoly_less(const ZPoly& a, const ZPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

Int symmetric(const Int& x, const Int& m) {
  Int r = mod(x, m);
  if (2 * r > m) r -= m;
  return r;
}

// Exact monic division over Z; nullopt when there is a remainder.
std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b) {
  auto [q, r] = qpoly::divmod(qpoly::from_z(a), qpoly::from_z(b));
  if (!r.empty()) return std::nullopt;
  return qpoly::to_z(q);
}

std::vector<ZPoly> factor_squarefree(const ZPoly& f) {
  const int n = zpoly::degree(f);
  if (n <= 1) return {f};
  // Choose a prime keeping f squarefree.
  std::int64_t p = 2;
  for (;; p = p + 1) {
    if (!is_prime(p)) continue;
    FpPoly fb = zpoly::to_fp(f, Int(static_cast<long>(p)));
    if (gcd(fb, fb.derivative()).degree() == 0) break;
  }
  const Int P(static_cast<long>(p));
  FpPoly fb = zpoly::to_fp(f, P);
  auto facs = factor(fb);
  if (facs.size() == 1) return {f};
  // Landau-Mignotte style bound on factor coefficients: 2^n * ||f||_1.
  Int norm1 = 0;
  for (const auto& c : f) norm1 += abs(c);
  Int bound = ipow(Int(2), static_cast<unsigned long>(n) + 1) * norm1;
  int a = 1;
  Int pa = P;
  while (pa <= bound) {
    pa *= P;
    ++a;
  }
  PrimePower pp(P, a);
  std::vector<FpPoly> residual;
  for (const auto& fc : facs) residual.push_back(fc.poly);
  std::vector<ZPoly> lifted = zpoly::hensel_lift(f, residual, pp);
  std::vector<ZPoly> out;
  ZPoly rest = f;
  std::size_t s = 1;
  while (2 * s <= lifted.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      ZPoly cand = {Int(1)};
      for (std::size_t i : idx) cand = zpoly::mul(cand, lifted[i], pp);
      for (auto& c : cand) c = symmetric(c, pp.modulus());
      if (auto q = divide_exact(rest, cand)) {
        out.push_back(cand);
        rest = *q;
        for (std::size_t k = s; k-- > 0;) lifted.erase(lifted.begin() + static_cast<std::ptrdiff_t>(idx[k]));
        found = true;
        break;
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == lifted.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  out.push_back(rest);
  return out;
}

}  // namespace

std::vector<ZFactor> factor_over_q(const ZPoly& f_in) {
  const ZPoly f = zpoly::trim(f_in);
  require(!f.empty() && f.back() == 1, "factor_over_q: polynomial must be monic");
  std::vector<ZFactor> out;
  if (zpoly::degree(f) == 0) return out;
  // Yun's squarefree decomposition.
  QPoly a = qpoly::from_z(f);
  QPoly b = qpoly::derivative(a);
  QPoly c = qpoly::gcd(a, b);
  QPoly w = qpoly::divmod(a, c).first;
  int mult = 1;
  while (qpoly::degree(w) > 0) {
    QPoly y = qpoly::gcd(w, c);
    QPoly z = qpoly::divmod(w, y).first;
    if (qpoly::degree(z) > 0) {
      auto zi = qpoly::to_z(qpoly::monic(z));
      ensure(zi.has_value(), "factor_over_q: non-integral squarefree part");
      for (auto& g : factor_squarefree(*zi)) out.push_back({g, mult});
    }
    w = y;
    c = qpoly::divmod(c, y).first;
    ++mult;
  }
  std::sort(out.begin(), out.end(), [](const ZFactor& x, const ZFactor& y) {
    if (zpoly_less(x.poly, y.poly)) return true;
    if (zpoly_less(y.poly, x.poly)) return false;
    return x.multiplicity < y.multiplicity;
  });
  return out;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = m.data()[i];
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t r = row;
    while (r < a.rows() && a(r, c) == 0) ++r;
    if (r == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(row, j));
    const Rational inv = 1 / a(row, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank_q(const RatMatrix& a) {
  RatMatrix m = a;
  return rref(m).size();
}

QPoly minimal_polynomial_q(const RatMatrix& x, const RatMatrix& unit) {
  require(x.square() && unit.rows() == x.rows(), "minimal_polynomial_q: shape mismatch");
  const std::size_t len = x.rows() * x.cols();
  std::vector<RatMatrix> powers{unit};
  for (std::size_t k = 1; k <= len + 1; ++k) {
    powers.push_back(powers.back() * x);
    // Columns: flattened powers 0..k; look for a dependency with leading 1.
    RatMatrix m(len, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < len; ++i) m(i, j) = powers[j].data()[i];
    std::vector<Rational> rhs(len);
    for (std::size_t i = 0; i < len; ++i) rhs[i] = -powers[k].data()[i];
    if (auto sol = solve_q(m, rhs)) {
      QPoly out(*sol);
      out.emplace_back(1);
      return out;
    }
  }
  fail(ErrorKind::Internal, "minimal_polynomial_q: no dependency found");
}

RatMatrix eval_q(const QPoly& f, const RatMatrix& x, const RatMatrix& unit) {
  RatMatrix out(x.rows(), x.cols());
  for (std::size_t i = f.size(); i-- > 0;) out = out * x + f[i] * unit;
  return out;
}

std::optional<std::vector<Rational>> solve_q(const RatMatrix& a, const std::vector<Rational>& b) {
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  std::vector<Rational> x(a.cols(), Rational(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, a.cols());
  return x;
}

IntMatrix hermite_form(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < n && row < m; ++c) {
    // Euclid on column c among rows >= row.
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = row; i < m; ++i)
        if (a(i, c) != 0 && (best == m || abs(a(i, c)) < abs(a(best, c)))) best = i;
      if (best == m) break;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(best, j), a(row, j));
      bool done = true;
      for (std::size_t i = row + 1; i < m; ++i) {
        if (a(i, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(row, c).get_mpz_t());
        for (std::size_t j = 0; j < n; ++j) a(i, j) -= q * a(row, j);
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(row, c) == 0) continue;
    if (a(row, c) < 0)
      for (std::size_t j = 0; j < n; ++j) a(row, j) = -a(row, j);
    for (std::size_t i = 0; i < row; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(row, c).get_mpz_t());
      if (q != 0)
        for (std::size_t j = 0; j < n; ++j) a(i, j) -= q * a(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  IntMatrix out(row, n);
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, j);
  return out;
}

IntMatrix integer_kernel(const RatMatrix& a) {
  // Row-reduce [A^T | I] with unimodular operations; rows whose A-part
  // vanishes carry a saturated basis of the integer kernel.
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix aug(n, m + n);
  for (std::size_t i = 0; i < m; ++i) {
    Int den = 1;
    for (std::size_t j = 0; j < n; ++j) den = lcm(den, Int(a(i, j).get_den()));
    for (std::size_t j = 0; j < n; ++j) aug(j, i) = Rational(a(i, j) * den).get_num();
  }
  for (std::size_t j = 0; j < n; ++j) aug(j, m + j) = 1;
  IntMatrix h = hermite_form(aug);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < m; ++j) zero = zero && h(i, j) == 0;
    if (zero) rows.push_back(i);
  }
  IntMatrix k(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < n; ++j) k(r, j) = h(rows[r], m + j);
  if (k.rows() == 0) return IntMatrix(n, 0);
  return hermite_form(k).transpose();
}

}  // namespace hecke
