#include "hecke/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace hecke {

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row_dst -= f * row_src (mod)
void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f, const PrimePower& pp) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (m(src, j) == 0) continue;
    m(dst, j) = pp.reduce(m(dst, j) - f * m(src, j));
  }
}

void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src, const Int& f, const PrimePower& pp) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, src) == 0) continue;
    m(i, dst) = pp.reduce(m(i, dst) - f * m(i, src));
  }
}

void row_scale(IntMatrix& m, std::size_t r, const Int& f, const PrimePower& pp) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = pp.reduce(m(r, j) * f);
}

Int exact_div(const Int& a, const Int& b) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

IntMatrix reduce(const IntMatrix& a, const PrimePower& pp) {
  IntMatrix r = a;
  for (auto& x : r.data()) x = pp.reduce(x);
  return r;
}

IntMatrix mul_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp) {
  return reduce(a * b, pp);
}

IntMatrix add_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp) {
  return reduce(a + b, pp);
}

IntMatrix sub_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp) {
  return reduce(a - b, pp);
}

IntMatrix scale_mod(const Int& s, const IntMatrix& a, const PrimePower& pp) {
  return reduce(s * a, pp);
}

IntMatrix pow_mod(const IntMatrix& a, unsigned long k, const PrimePower& pp) {
  require(a.square(), "pow_mod: matrix must be square");
  IntMatrix result = IntMatrix::identity(a.rows());
  IntMatrix base = reduce(a, pp);
  while (k > 0) {
    if (k & 1UL) result = mul_mod(result, base, pp);
    k >>= 1;
    if (k > 0) base = mul_mod(base, base, pp);
  }
  return reduce(result, pp);
}

bool commute_mod(const IntMatrix& a, const IntMatrix& b, const PrimePower& pp) {
  return is_zero_mod(a * b - b * a, pp);
}

bool is_zero_mod(const IntMatrix& a, const PrimePower& pp) {
  for (const auto& x : a.data())
    if (pp.reduce(x) != 0) return false;
  return true;
}

int matrix_valuation(const IntMatrix& a, const PrimePower& pp) {
  int v = pp.precision();
  for (const auto& x : a.data()) v = std::min(v, pp.valuation(x));
  return v;
}

SmithForm smith_form(const IntMatrix& a, const PrimePower& pp) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const int N = pp.precision();
  SmithForm sf;
  IntMatrix d = reduce(a, pp);
  sf.P = IntMatrix::identity(m);
  sf.Q = IntMatrix::identity(n);
  const std::size_t steps = std::min(m, n);
  for (std::size_t k = 0; k < steps; ++k) {
    int best = N;
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < m && best > 0; ++i)
      for (std::size_t j = k; j < n; ++j) {
        int v = valuation_capped(d(i, j), pp.ell(), N);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == N) break;
    swap_rows(d, k, bi);
    swap_rows(sf.P, k, bi);
    swap_cols(d, k, bj);
    swap_cols(sf.Q, k, bj);
    const Int lv = ipow(pp.ell(), static_cast<unsigned long>(best));
    const Int unit_inv = pp.inverse(exact_div(d(k, k), lv));
    row_scale(d, k, unit_inv, pp);
    row_scale(sf.P, k, unit_inv, pp);
    for (std::size_t i = k + 1; i < m; ++i) {
      if (d(i, k) == 0) continue;
      Int f = exact_div(d(i, k), lv);
      row_axpy(d, i, k, f, pp);
      row_axpy(sf.P, i, k, f, pp);
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (d(k, j) == 0) continue;
      Int f = exact_div(d(k, j), lv);
      col_axpy(d, j, k, f, pp);
      col_axpy(sf.Q, j, k, f, pp);
    }
    sf.exps.push_back(best);
    ++sf.rank;
  }
  while (sf.exps.size() < steps) sf.exps.push_back(N);
  return sf;
}

BestSolution solve_best_mod(const IntMatrix& a, const IntVector& b, const PrimePower& pp) {
  require(b.size() == a.rows(), "solve: right-hand side has wrong length");
  const int N = pp.precision();
  SmithForm sf = smith_form(a, pp);
  IntVector c = mat_vec_mod(sf.P, b, pp);
  int k = N;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int vc = pp.valuation(c[i]);
    if (i >= sf.rank || vc < sf.exps[i]) k = std::min(k, vc);
  }
  IntVector y(a.cols(), Int(0));
  int loss = 0;
  bool free_component = a.cols() > sf.rank;
  for (std::size_t i = 0; i < sf.rank; ++i) {
    const int vi = sf.exps[i];
    if (vi >= k) {
      free_component = true;
      continue;
    }
    y[i] = exact_div(c[i] - mod(c[i], ipow(pp.ell(), static_cast<unsigned long>(vi))),
                     ipow(pp.ell(), static_cast<unsigned long>(vi)));
    loss = std::max(loss, vi);
  }
  BestSolution out;
  out.x = mat_vec_mod(sf.Q, y, pp);
  out.consistent_precision = k;
  out.determined_precision = free_component ? 0 : k - loss;
  return out;
}

std::optional<IntVector> solve_mod(const IntMatrix& a, const IntVector& b, const PrimePower& pp) {
  BestSolution s = solve_best_mod(a, b, pp);
  if (s.consistent_precision < pp.precision()) return std::nullopt;
  return s.x;
}

IntMatrix kernel_mod(const IntMatrix& a, const PrimePower& pp) {
  const int N = pp.precision();
  SmithForm sf = smith_form(a, pp);
  std::vector<IntVector> gens;
  const std::size_t n = a.cols();
  for (std::size_t i = 0; i < n; ++i) {
    Int scale = 1;
    if (i < sf.rank) {
      if (sf.exps[i] == 0) continue;
      scale = ipow(pp.ell(), static_cast<unsigned long>(N - sf.exps[i]));
    }
    IntVector col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = pp.reduce(sf.Q(r, i) * scale);
    gens.push_back(std::move(col));
  }
  IntMatrix k(n, gens.size());
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t r = 0; r < n; ++r) k(r, j) = gens[j][r];
  return k;
}

IntMatrix howell_form(const IntMatrix& a, const PrimePower& pp) {
  const int N = pp.precision();
  const std::size_t n = a.cols();
  std::vector<IntVector> pool;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    IntVector row(n);
    bool nz = false;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = pp.reduce(a(i, j));
      nz = nz || row[j] != 0;
    }
    if (nz) pool.push_back(std::move(row));
  }
  struct Pivot {
    IntVector row;
    std::size_t col;
    int exp;
  };
  std::vector<Pivot> pivots;
  for (std::size_t c = 0; c < n && !pool.empty(); ++c) {
    int best = N;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      int v = valuation_capped(pool[i][c], pp.ell(), N);
      if (v < best) {
        best = v;
        bi = i;
      }
    }
    if (best == N) continue;
    IntVector piv = std::move(pool[bi]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(bi));
    const Int lv = ipow(pp.ell(), static_cast<unsigned long>(best));
    const Int uinv = pp.inverse(exact_div(piv[c], lv));
    for (auto& x : piv) x = pp.reduce(x * uinv);
    for (auto& row : pool) {
      if (row[c] == 0) continue;
      Int f = exact_div(row[c], lv);
      for (std::size_t j = c; j < n; ++j) row[j] = pp.reduce(row[j] - f * piv[j]);
    }
    if (best > 0) {
      const Int ann = ipow(pp.ell(), static_cast<unsigned long>(N - best));
      IntVector extra(n);
      bool nz = false;
      for (std::size_t j = 0; j < n; ++j) {
        extra[j] = pp.reduce(piv[j] * ann);
        nz = nz || extra[j] != 0;
      }
      if (nz) pool.push_back(std::move(extra));
    }
    std::erase_if(pool, [](const IntVector& r) {
      return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
    });
    pivots.push_back({std::move(piv), c, best});
  }
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const Int lv = ipow(pp.ell(), static_cast<unsigned long>(pivots[i].exp));
    for (std::size_t k = 0; k < i; ++k) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), pivots[k].row[pivots[i].col].get_mpz_t(), lv.get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        pivots[k].row[j] = pp.reduce(pivots[k].row[j] - q * pivots[i].row[j]);
    }
  }
  IntMatrix h(pivots.size(), n);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = pivots[i].row[j];
  return h;
}

IntMatrix inverse_mod(const IntMatrix& a, const PrimePower& pp) {
  require(a.square(), "inverse_mod: matrix must be square");
  const std::size_t n = a.rows();
  IntMatrix m = reduce(a, pp);
  IntMatrix inv = IntMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = n;
    for (std::size_t i = c; i < n; ++i)
      if (pp.is_unit(m(i, c))) {
        p = i;
        break;
      }
    require(p < n, "inverse_mod: matrix is singular mod ell");
    swap_rows(m, c, p);
    swap_rows(inv, c, p);
    Int u = pp.inverse(m(c, c));
    row_scale(m, c, u, pp);
    row_scale(inv, c, u, pp);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      Int f = m(i, c);
      row_axpy(m, i, c, f, pp);
      row_axpy(inv, i, c, f, pp);
    }
  }
  return inv;
}

std::size_t rank_mod_ell(const IntMatrix& a, const PrimePower& pp) {
  PrimePower field = pp.with_precision(1);
  return smith_form(a, field).rank;
}

IntVector mat_vec_mod(const IntMatrix& a, const IntVector& v, const PrimePower& pp) {
  require(a.cols() == v.size(), "mat_vec: dimension mismatch");
  IntVector out(a.rows(), Int(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = pp.reduce(s);
  }
  return out;
}

std::string format_matrix(const IntMatrix& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << a(i, j).get_str();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hecke
