#include "hecke/fp_span.hpp"

#include <algorithm>

#include "hecke/error.hpp"

namespace hecke {

namespace {

using i64 = std::int64_t;

i64 norm(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}

i64 mulmod(i64 a, i64 b, i64 p) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % p);
}

i64 inv(i64 a, i64 p) {
  i64 t = 0, nt = 1, r = p, nr = norm(a, p);
  while (nr != 0) {
    i64 q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  ensure(r == 1, "FpSpan: zero pivot");
  return norm(t, p);
}

}  // namespace

std::vector<i64> FpSpan::reduce(std::vector<i64>& v, std::vector<i64>* comb) const {
  for (const auto& row : rows_) {
    const i64 f = v[row.pivot];
    if (f == 0) continue;
    for (std::size_t i = 0; i < len_; ++i)
      if (row.v[i] != 0) v[i] = norm(v[i] - mulmod(f, row.v[i], p_), p_);
    if (comb) {
      for (std::size_t i = 0; i < row.comb.size(); ++i)
        if (row.comb[i] != 0) (*comb)[i] = norm((*comb)[i] - mulmod(f, row.comb[i], p_), p_);
    }
  }
  return v;
}

bool FpSpan::insert(const std::vector<i64>& input) {
  require(input.size() == len_, "FpSpan: length mismatch");
  std::vector<i64> v(len_);
  for (std::size_t i = 0; i < len_; ++i) v[i] = norm(input[i], p_);
  std::vector<i64> comb(count_ + 1, 0);
  comb[count_] = 1;
  reduce(v, &comb);
  auto it = std::find_if(v.begin(), v.end(), [](i64 c) { return c != 0; });
  if (it == v.end()) return false;
  const std::size_t piv = static_cast<std::size_t>(it - v.begin());
  const i64 s = inv(v[piv], p_);
  for (auto& x : v) x = mulmod(x, s, p_);
  for (auto& x : comb) x = mulmod(x, s, p_);
  for (auto& row : rows_) row.comb.resize(count_ + 1, 0);
  rows_.push_back({std::move(v), std::move(comb), piv});
  ++count_;
  return true;
}

bool FpSpan::contains(const std::vector<i64>& input) const {
  std::vector<i64> v(len_);
  for (std::size_t i = 0; i < len_; ++i) v[i] = norm(input[i], p_);
  reduce(v, nullptr);
  return std::all_of(v.begin(), v.end(), [](i64 c) { return c == 0; });
}

std::optional<std::vector<i64>> FpSpan::coordinates(const std::vector<i64>& input) const {
  std::vector<i64> v(len_);
  for (std::size_t i = 0; i < len_; ++i) v[i] = norm(input[i], p_);
  // v - sum f_k row_k = 0  =>  v = sum f_k row_k = sum f_k comb_k . inserted
  std::vector<i64> coords(count_, 0);
  for (const auto& row : rows_) {
    const i64 f = v[row.pivot];
    if (f == 0) continue;
    for (std::size_t i = 0; i < len_; ++i)
      if (row.v[i] != 0) v[i] = norm(v[i] - mulmod(f, row.v[i], p_), p_);
    for (std::size_t i = 0; i < row.comb.size(); ++i)
      if (row.comb[i] != 0) coords[i] = norm(coords[i] + mulmod(f, row.comb[i], p_), p_);
  }
  if (!std::all_of(v.begin(), v.end(), [](i64 c) { return c == 0; })) return std::nullopt;
  return coords;
}

std::vector<i64> flatten_mod(const IntMatrix& m, i64 p) {
  std::vector<i64> out(m.data().size());
  const Int pp(static_cast<long>(p));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mod(m.data()[i], pp).get_si();
  return out;
}

}  // namespace hecke
