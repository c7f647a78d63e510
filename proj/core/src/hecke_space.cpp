#include "hecke/hecke_space.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke {

const IntMatrix& HeckeSpace::T(int n) const {
  auto it = matrices.find(n);
  require(it != matrices.end(), "space has no T_" + std::to_string(n) + " (bound " + std::to_string(bound) + ")");
  return it->second;
}

void validate(const HeckeSpace& s) {
  require(s.level >= 1, "space: level must be positive");
  require(s.weight >= 1, "space: weight must be positive");
  require(s.dim >= 1, "space: dimension must be positive");
  require(s.bound >= 1, "space: bound must be positive");
  require(s.matrices.size() == static_cast<std::size_t>(s.bound) && s.matrices.begin()->first == 1 &&
              s.matrices.rbegin()->first == s.bound,
          "space: matrices must be T_1 .. T_B");
  for (const auto& [n, m] : s.matrices)
    require(m.rows() == s.dim && m.cols() == s.dim, "space: T_" + std::to_string(n) + " has wrong shape");
  require(s.T(1) == IntMatrix::identity(s.dim), "space: T_1 is not the identity");
  for (auto i = s.matrices.begin(); i != s.matrices.end(); ++i)
    for (auto j = std::next(i); j != s.matrices.end(); ++j)
      require(i->second * j->second == j->second * i->second,
              "space: T_" + std::to_string(i->first) + " and T_" + std::to_string(j->first) + " do not commute");
}

std::vector<std::string> warnings(const HeckeSpace& s) {
  std::vector<std::string> out;
  const int sb = sturm_bound(s.level, s.weight);
  if (s.bound < sb)
    out.push_back("coefficient bound " + std::to_string(s.bound) + " is below the Sturm bound " + std::to_string(sb));
  return out;
}

namespace {

const std::vector<std::string> kMetaKeys = {"eisenstein_dim", "old_dim", "new_dim"};

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::InvalidArgument, "HMAT line " + std::to_string(line) + ": " + what);
}

long parse_long(const std::string& tok, std::size_t line) {
  try {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) parse_error(line, "bad integer '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    parse_error(line, "bad integer '" + tok + "'");
  }
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

}  // namespace

HeckeSpace parse_hmat(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.emplace_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  if (lines.empty() || lines[0] != "HMAT v1") parse_error(1, "expected 'HMAT v1'");
  HeckeSpace s;
  std::map<std::string, std::size_t> seen;
  std::size_t i = 1;
  for (; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    const std::size_t lineno = i + 1;
    if (l.rfind("T ", 0) == 0) break;
    const auto sp = l.find(' ');
    if (sp == std::string::npos) parse_error(lineno, "expected '<key> <value>'");
    const std::string key = l.substr(0, sp), value = l.substr(sp + 1);
    if (seen.count(key)) parse_error(lineno, "duplicate key '" + key + "'");
    seen[key] = lineno;
    if (key == "provenance") {
      s.provenance = value;
      continue;
    }
    if (value.empty() || value.find(' ') != std::string::npos) parse_error(lineno, "bad value for '" + key + "'");
    const long v = parse_long(value, lineno);
    if (key == "level") s.level = static_cast<int>(v);
    else if (key == "weight") s.weight = static_cast<int>(v);
    else if (key == "dim") {
      if (v < 1) parse_error(lineno, "dim must be positive");
      s.dim = static_cast<std::size_t>(v);
    } else if (key == "bound") s.bound = static_cast<int>(v);
    else if (std::find(kMetaKeys.begin(), kMetaKeys.end(), key) != kMetaKeys.end()) s.metadata[key] = v;
    else parse_error(lineno, "unknown key '" + key + "'");
    if ((key == "level" || key == "weight" || key == "bound") && v < 1) parse_error(lineno, key + " must be positive");
  }
  for (const char* k : {"level", "weight", "dim", "bound"})
    if (!seen.count(k)) parse_error(i + 1, std::string("missing header '") + k + "'");
  for (int n = 1; n <= s.bound; ++n) {
    const std::size_t lineno = i + 1;
    if (i >= lines.size()) parse_error(lineno, "missing 'T " + std::to_string(n) + "'");
    if (lines[i] != "T " + std::to_string(n)) parse_error(lineno, "expected 'T " + std::to_string(n) + "'");
    ++i;
    IntMatrix m(s.dim, s.dim);
    for (std::size_t r = 0; r < s.dim; ++r, ++i) {
      if (i >= lines.size()) parse_error(i + 1, "missing matrix row");
      auto toks = split_ws(lines[i]);
      if (toks.size() != s.dim || lines[i] != [&] {
            std::string j;
            for (std::size_t k = 0; k < toks.size(); ++k) j += (k ? " " : "") + toks[k];
            return j;
          }())
        parse_error(i + 1, "expected " + std::to_string(s.dim) + " single-space separated integers");
      for (std::size_t c = 0; c < s.dim; ++c) {
        try {
          m(r, c) = parse_int(toks[c]);
        } catch (const std::exception&) {
          parse_error(i + 1, "bad integer '" + toks[c] + "'");
        }
      }
    }
    s.matrices.emplace(n, std::move(m));
  }
  // A single trailing newline is allowed.
  if (i < lines.size()) parse_error(i + 1, "trailing content");
  try {
    validate(s);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidArgument, std::string("HMAT: ") + e.what());
  }
  return s;
}

std::string format_hmat(const HeckeSpace& s) {
  std::ostringstream out;
  out << "HMAT v1\n";
  out << "level " << s.level << "\nweight " << s.weight << "\ndim " << s.dim << "\nbound " << s.bound << "\n";
  if (!s.provenance.empty()) out << "provenance " << s.provenance << "\n";
  for (const auto& k : kMetaKeys)
    if (auto it = s.metadata.find(k); it != s.metadata.end()) out << k << " " << it->second << "\n";
  for (const auto& [n, m] : s.matrices) {
    out << "T " << n << "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c).get_str();
      out << "\n";
    }
  }
  return out.str();
}

int sturm_bound(int level, int weight) {
  require(level >= 1 && weight >= 1, "sturm_bound: level and weight must be positive");
  Rational v(static_cast<long>(weight) * level, 12);
  for (auto p : prime_divisors(level)) v *= Rational(p + 1, p);
  v.canonicalize();
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return static_cast<int>(q.get_si());
}

std::vector<Int> level11_coefficients(int bound) {
  require(bound >= 1, "level11: bound must be positive");
  const auto primes = primes_in_range(2, bound);
  std::map<std::int64_t, Int> ap;
  for (auto p : primes) {
    if (p == 11) {
      ap[p] = 1;
      continue;
    }
    // Count solutions of y^2 + y = x^3 - x^2 - 10x - 20 over F_p.
    std::vector<long> ycount(static_cast<std::size_t>(p), 0);
    for (std::int64_t y = 0; y < p; ++y) ++ycount[static_cast<std::size_t>((y * y + y) % p)];
    long points = 1;
    for (std::int64_t x = 0; x < p; ++x) {
      std::int64_t rhs = ((x * x % p) * x - x * x - 10 * x - 20) % p;
      if (rhs < 0) rhs += p;
      points += ycount[static_cast<std::size_t>(rhs)];
    }
    ap[p] = Int(static_cast<long>(p + 1 - points));
  }
  std::vector<Int> a(static_cast<std::size_t>(bound) + 1, Int(0));
  a[1] = 1;
  for (int n = 2; n <= bound; ++n) {
    // n = p^k m with p the smallest prime factor.
    int p = 2;
    while (n % p) ++p;
    int pk = 1, k = 0;
    int m = n;
    while (m % p == 0) {
      m /= p;
      pk *= p;
      ++k;
    }
    if (m > 1) {
      a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(pk)] * a[static_cast<std::size_t>(m)];
    } else if (k == 1) {
      a[static_cast<std::size_t>(n)] = ap.at(p);
    } else if (p == 11) {
      a[static_cast<std::size_t>(n)] = 1;
    } else {
      a[static_cast<std::size_t>(n)] = ap.at(p) * a[static_cast<std::size_t>(pk / p)] -
                                       Int(p) * a[static_cast<std::size_t>(pk / p / p)];
    }
  }
  a.erase(a.begin());
  return a;
}

HeckeSpace level11_space(int bound) {
  HeckeSpace s;
  s.level = 11;
  s.weight = 2;
  s.dim = 1;
  s.bound = bound;
  s.provenance = "point counts on y^2+y=x^3-x^2-10x-20";
  const auto a = level11_coefficients(bound);
  for (int n = 1; n <= bound; ++n) {
    IntMatrix m(1, 1);
    m(0, 0) = a[static_cast<std::size_t>(n - 1)];
    s.matrices.emplace(n, m);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Rational orbits.

namespace {

struct QBezout {
  QPoly s, t;
};

// s a + t b = 1 for coprime a, b.
QBezout qxgcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b, s0 = {Rational(1)}, s1 = {}, t0 = {}, t1 = {Rational(1)};
  while (!r1.empty()) {
    auto [q, r] = qpoly::divmod(r0, r1);
    QPoly s2 = qpoly::sub(s0, qpoly::mul(q, s1));
    QPoly t2 = qpoly::sub(t0, qpoly::mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  ensure(r0.size() == 1, "qxgcd: not coprime");
  const Rational inv = 1 / r0[0];
  for (auto& c : s0) c *= inv;
  for (auto& c : t0) c *= inv;
  return {s0, t0};
}

std::vector<RatMatrix> split_q(const RatMatrix& unit, const RatMatrix& x) {
  const QPoly m = minimal_polynomial_q(x, unit);
  auto mz = qpoly::to_z(m);
  ensure(mz.has_value(), "rational_orbits: non-integral minimal polynomial");
  const auto facs = factor_over_q(*mz);
  if (facs.size() <= 1) return {unit};
  std::vector<RatMatrix> out;
  for (const auto& f : facs) {
    QPoly pk = {Rational(1)};
    for (int i = 0; i < f.multiplicity; ++i) pk = qpoly::mul(pk, qpoly::from_z(f.poly));
    const QPoly q = qpoly::divmod(m, pk).first;
    const QBezout bz = qxgcd(q, pk);
    out.push_back(eval_q(qpoly::divmod(qpoly::mul(bz.s, q), m).second, x, unit));
  }
  return out;
}

// Monomial basis of the piece with identity `unit`.
std::vector<RatMatrix> piece_basis(const RatMatrix& unit, const std::vector<RatMatrix>& gens) {
  std::vector<RatMatrix> basis{unit};
  const std::size_t len = unit.data().size();
  auto rank_of = [&](const std::vector<RatMatrix>& bs) {
    RatMatrix m(bs.size(), len);
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = 0; j < len; ++j) m(i, j) = bs[i].data()[j];
    return rank_q(m);
  };
  for (std::size_t next = 0; next < basis.size(); ++next) {
    for (const auto& g : gens) {
      RatMatrix c = g * basis[next];
      basis.push_back(c);
      if (rank_of(basis) < basis.size()) basis.pop_back();
    }
  }
  return basis;
}

Rational trace(const RatMatrix& m) {
  Rational t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// Either certifies the piece as local (returns {unit}) or splits it.
std::vector<RatMatrix> refine_q(const RatMatrix& unit, const std::vector<RatMatrix>& gens) {
  const auto basis = piece_basis(unit, gens);
  const std::size_t k = basis.size();
  RatMatrix form(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) form(i, j) = trace(basis[i] * basis[j]);
  const std::size_t semisimple_dim = rank_q(form);
  if (semisimple_dim <= 1) return {unit};
  for (long c = 1; c <= 64; ++c) {
    RatMatrix t(unit.rows(), unit.cols());
    Rational w = 1;
    for (const auto& g : gens) {
      t = t + w * (g * unit);
      w *= c;
    }
    auto parts = split_q(unit, t);
    if (parts.size() > 1) return parts;
    const QPoly m = minimal_polynomial_q(t, unit);
    auto mz = qpoly::to_z(m);
    const auto facs = factor_over_q(*mz);
    if (static_cast<std::size_t>(qpoly::degree(qpoly::from_z(facs[0].poly))) == semisimple_dim) return {unit};
  }
  fail(ErrorKind::Internal, "rational_orbits: no primitive element found");
}

bool zless(const ZPoly& a, const ZPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

ZPoly charpoly_z(const IntMatrix& m) {
  // Exact integer characteristic polynomial via the rational minimal-free
  // Faddeev-LeVerrier recurrence.
  const std::size_t n = m.rows();
  RatMatrix a = to_rational(m);
  RatMatrix mk = RatMatrix::identity(n);
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  RatMatrix am(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    am = a * mk;
    c[n - k] = -trace(am) / Rational(static_cast<long>(k));
    mk = am + c[n - k] * RatMatrix::identity(n);
  }
  ZPoly out;
  for (const auto& x : c) {
    ensure(x.get_den() == 1, "charpoly_z: non-integral coefficient");
    out.push_back(x.get_num());
  }
  return out;
}

}  // namespace

std::vector<QOrbit> rational_orbits(const HeckeSpace& s) {
  const std::size_t d = s.dim;
  std::vector<RatMatrix> gens;
  for (const auto& [n, m] : s.matrices)
    if (n > 1) gens.push_back(to_rational(m));
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      require(gens[i] * gens[j] == gens[j] * gens[i], "rational_orbits: matrices do not commute");
  std::vector<RatMatrix> pieces{RatMatrix::identity(d)};
  for (const auto& g : gens) {
    std::vector<RatMatrix> next;
    for (const auto& e : pieces) {
      auto parts = split_q(e, g * e);
      next.insert(next.end(), parts.begin(), parts.end());
    }
    pieces = std::move(next);
  }
  std::deque<RatMatrix> queue(pieces.begin(), pieces.end());
  std::vector<RatMatrix> local;
  while (!queue.empty()) {
    RatMatrix e = std::move(queue.front());
    queue.pop_front();
    auto parts = refine_q(e, gens);
    if (parts.size() == 1) local.push_back(std::move(e));
    else queue.insert(queue.end(), parts.begin(), parts.end());
  }
  std::vector<QOrbit> out;
  std::size_t total = 0;
  for (const auto& e : local) {
    QOrbit o;
    o.idempotent = e;
    o.lattice = integer_kernel(RatMatrix::identity(d) - e);
    o.rank = o.lattice.cols();
    total += o.rank;
    // Rows on which the lattice basis is invertible over Q.
    std::vector<std::size_t> rows;
    {
      for (std::size_t i = 0; i < d && rows.size() < o.rank; ++i) {
        RatMatrix trial(rows.size() + 1, o.rank);
        for (std::size_t a = 0; a < rows.size(); ++a)
          for (std::size_t b = 0; b < o.rank; ++b) trial(a, b) = o.lattice(rows[a], b);
        for (std::size_t b = 0; b < o.rank; ++b) trial(rows.size(), b) = o.lattice(i, b);
        if (rank_q(trial) == rows.size() + 1) rows.push_back(i);
      }
    }
    RatMatrix bp(o.rank, o.rank);
    for (std::size_t a = 0; a < o.rank; ++a)
      for (std::size_t b = 0; b < o.rank; ++b) bp(a, b) = o.lattice(rows[a], b);
    o.space.level = s.level;
    o.space.weight = s.weight;
    o.space.dim = o.rank;
    o.space.bound = s.bound;
    o.space.provenance = s.provenance;
    for (const auto& [n, m] : s.matrices) {
      const IntMatrix tb = m * o.lattice;
      IntMatrix proj(o.rank, o.rank);
      for (std::size_t col = 0; col < o.rank; ++col) {
        std::vector<Rational> rhs(o.rank);
        for (std::size_t a = 0; a < o.rank; ++a) rhs[a] = tb(rows[a], col);
        auto x = solve_q(bp, rhs);
        ensure(x.has_value(), "rational_orbits: singular lattice basis");
        for (std::size_t a = 0; a < o.rank; ++a) {
          ensure((*x)[a].get_den() == 1, "rational_orbits: lattice not stable");
          proj(a, col) = (*x)[a].get_num();
        }
      }
      ensure(o.lattice * proj == tb, "rational_orbits: lattice not stable");
      o.space.matrices.emplace(n, std::move(proj));
    }
    out.push_back(std::move(o));
  }
  ensure(total == d, "rational_orbits: ranks do not sum to the dimension");
  std::vector<std::vector<ZPoly>> keys(out.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& [n, m] : out[i].space.matrices)
      if (n > 1) keys[i].push_back(charpoly_z(m));
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out[a].rank != out[b].rank) return out[a].rank < out[b].rank;
    return std::lexicographical_compare(keys[a].begin(), keys[a].end(), keys[b].begin(), keys[b].end(), zless);
  });
  std::vector<QOrbit> sorted;
  for (std::size_t i : order) sorted.push_back(std::move(out[i]));
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i].number = static_cast<int>(i) + 1;
  return sorted;
}

}  // namespace hecke
