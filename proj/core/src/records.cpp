#include "hecke/records.hpp"

#include <charconv>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke {

std::string to_string(const StoreKey& k) {
  std::string s = std::to_string(k.level) + "." + std::to_string(k.weight) + "." + std::to_string(k.qorbit);
  if (k.ell) s += "." + std::to_string(k.ell);
  if (k.factor) s += "." + std::to_string(k.factor);
  if (k.eigenform) s += "." + std::to_string(k.eigenform);
  return s;
}

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::StoreCorruption, what); }

long parse_long(std::string_view s, const std::string& context) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) bad(context + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

StoreKey parse_key(std::string_view text) {
  std::vector<long> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    const std::string_view part = text.substr(start, dot == std::string_view::npos ? dot : dot - start);
    long v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() || v < 1)
      fail(ErrorKind::InvalidArgument, "malformed key '" + std::string(text) + "'");
    parts.push_back(v);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (parts.size() < 3 || parts.size() > 6)
    fail(ErrorKind::InvalidArgument, "key '" + std::string(text) + "' must have 3 to 6 components");
  StoreKey k;
  k.level = static_cast<int>(parts[0]);
  k.weight = static_cast<int>(parts[1]);
  k.qorbit = static_cast<int>(parts[2]);
  if (parts.size() > 3) k.ell = parts[3];
  if (parts.size() > 4) k.factor = static_cast<int>(parts[4]);
  if (parts.size() > 5) k.eigenform = static_cast<int>(parts[5]);
  return k;
}

namespace {

class Writer {
 public:
  explicit Writer(const std::string& tag) { os_ << tag << '\n'; }
  Writer& put(const std::string& key, const std::string& value) {
    os_ << key << ':';
    if (!value.empty()) os_ << ' ' << value;
    os_ << '\n';
    return *this;
  }
  template <class T>
  Writer& num(const std::string& key, const T& v) {
    return put(key, std::to_string(v));
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

class Reader {
 public:
  Reader(std::string_view text, const std::string& tag) : tag_(tag) {
    std::size_t start = 0;
    int n = 0;
    while (start < text.size()) {
      std::size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) bad(tag + ": missing final newline");
      lines_.emplace_back(++n, std::string(text.substr(start, nl - start)));
      start = nl + 1;
    }
    if (lines_.empty() || lines_.front().second != tag)
      bad("expected header '" + tag + "' on line 1" +
          (lines_.empty() ? std::string() : ", got '" + lines_.front().second + "'"));
    pos_ = 1;
  }

  std::string take(const std::string& key) {
    auto [k, v] = take_any();
    if (k != key) fail_at("expected '" + key + "', got '" + k + "'");
    return v;
  }

  std::pair<std::string, std::string> take_any() {
    if (pos_ >= lines_.size()) bad(tag_ + ": unexpected end of record");
    const std::string& line = lines_[pos_].second;
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) fail_at("expected 'key: value'");
    std::string key = line.substr(0, colon);
    std::string value;
    if (colon + 1 < line.size()) {
      if (line[colon + 1] != ' ' || colon + 2 >= line.size()) fail_at("malformed value separator");
      value = line.substr(colon + 2);
    }
    ++pos_;
    return {key, value};
  }

  bool at(const std::string& key_prefix) const {
    return pos_ < lines_.size() && lines_[pos_].second.rfind(key_prefix, 0) == 0;
  }

  long integer(const std::string& key) { return parse_long(take(key), where()); }

  void finish() {
    if (pos_ != lines_.size()) fail_at("trailing content");
  }

  [[noreturn]] void fail_at(const std::string& what) const {
    const int line = pos_ < lines_.size() ? lines_[pos_].first : static_cast<int>(lines_.size());
    bad(tag_ + " line " + std::to_string(line) + ": " + what);
  }

  std::string where() const {
    return tag_ + " line " + std::to_string(pos_ <= lines_.size() ? lines_[pos_ - 1].first : 0);
  }

 private:
  std::string tag_;
  std::vector<std::pair<int, std::string>> lines_;
  std::size_t pos_ = 0;
};

std::string join_ints(const IntVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i].get_str();
  }
  return s;
}

IntVector split_ints(const std::string& s, const std::string& context) {
  IntVector out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t sp = s.find(' ', start);
    if (sp == std::string::npos) sp = s.size();
    const std::string tok = s.substr(start, sp - start);
    Int v;
    if (tok.empty() || v.set_str(tok, 10) != 0 || v.get_str() != tok)
      bad(context + ": bad integer '" + tok + "'");
    out.push_back(v);
    start = sp + 1;
  }
  return out;
}

std::string poly_string(const ZPoly& p) { return zpoly::to_string(p); }

ZPoly parse_poly(const std::string& s, const std::string& context) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') bad(context + ": expected [c0,c1,...]");
  std::string inner = s.substr(1, s.size() - 2);
  for (auto& c : inner)
    if (c == ',') c = ' ';
  if (inner.find("  ") != std::string::npos || (!inner.empty() && (inner.front() == ' ' || inner.back() == ' ')))
    bad(context + ": malformed list");
  return split_ints(inner, context);
}

std::string val_string(const Valuation& v) {
  return (v.is_at_least() ? ">=" : "") + std::to_string(v.lambda_units());
}

Valuation parse_val(const std::string& s, int e, const std::string& context) {
  if (s.rfind(">=", 0) == 0) return Valuation::at_least(static_cast<int>(parse_long(s.substr(2), context)), e);
  return Valuation::exact(static_cast<int>(parse_long(s, context)), e);
}

std::string rat_string(const Valuation& v) {
  return (v.is_at_least() ? ">=" : "") + v.normalised().get_str();
}

IntMatrix matrix_from_rows(Reader& r, std::size_t rows, std::size_t cols, const std::string& key) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    IntVector row = split_ints(r.take(key), r.where());
    if (row.size() != cols) r.fail_at("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
  }
  return m;
}

void matrix_rows(Writer& w, const IntMatrix& m, const std::string& key) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    IntVector row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    w.put(key, join_ints(row));
  }
}

StoreKey key_of(Reader& r, int depth) {
  StoreKey k;
  try {
    k = parse_key(r.take("key"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::StoreCorruption) throw;
    r.fail_at(e.what());
  }
  if (k.depth() != depth) r.fail_at("key has depth " + std::to_string(k.depth()) + ", expected " + std::to_string(depth));
  return k;
}

int checked_size(long v, Reader& r) {
  if (v < 0 || v > 100000000) r.fail_at("count out of range");
  return static_cast<int>(v);
}

}  // namespace

std::string record_tag(std::string_view text) {
  const std::size_t nl = text.find('\n');
  return std::string(text.substr(0, nl));
}

// SPACE v1

std::string serialize(const SpaceRecord& r) {
  Writer w("SPACE v1");
  w.num("level", r.level).num("weight", r.weight).num("dim", r.dim).num("bound", r.bound);
  w.num("sturm_bound", r.sturm_bound);
  for (const auto& [k, v] : r.metadata) w.put("meta " + k, std::to_string(v));
  w.num("qorbits", r.qorbits).put("provenance", r.provenance).put("hmat_sha256", r.hmat_sha256);
  return w.str();
}

SpaceRecord parse_space_record(std::string_view text) {
  Reader r(text, "SPACE v1");
  SpaceRecord s;
  s.level = static_cast<int>(r.integer("level"));
  s.weight = static_cast<int>(r.integer("weight"));
  s.dim = static_cast<std::size_t>(checked_size(r.integer("dim"), r));
  s.bound = static_cast<int>(r.integer("bound"));
  s.sturm_bound = static_cast<int>(r.integer("sturm_bound"));
  while (r.at("meta ")) {
    auto [k, v] = r.take_any();
    s.metadata.emplace(k.substr(5), parse_long(v, r.where()));
  }
  s.qorbits = static_cast<int>(r.integer("qorbits"));
  s.provenance = r.take("provenance");
  s.hmat_sha256 = r.take("hmat_sha256");
  r.finish();
  return s;
}

// QORBIT v1

std::string serialize(const QOrbitRecord& r) {
  Writer w("QORBIT v1");
  w.put("key", to_string(r.key)).num("rank", r.rank).put("hmat_sha256", r.hmat_sha256);
  return w.str();
}

QOrbitRecord parse_qorbit_record(std::string_view text) {
  Reader r(text, "QORBIT v1");
  QOrbitRecord q;
  q.key = key_of(r, 3);
  q.rank = static_cast<std::size_t>(checked_size(r.integer("rank"), r));
  q.hmat_sha256 = r.take("hmat_sha256");
  r.finish();
  return q;
}

// LATTICE v1

std::string serialize(const LatticeRecord& r) {
  Writer w("LATTICE v1");
  w.put("key", to_string(r.key)).num("rows", r.basis.rows()).num("cols", r.basis.cols());
  matrix_rows(w, r.basis, "row");
  return w.str();
}

LatticeRecord parse_lattice_record(std::string_view text) {
  Reader r(text, "LATTICE v1");
  LatticeRecord l;
  l.key = key_of(r, 3);
  const auto rows = static_cast<std::size_t>(checked_size(r.integer("rows"), r));
  const auto cols = static_cast<std::size_t>(checked_size(r.integer("cols"), r));
  l.basis = matrix_from_rows(r, rows, cols, "row");
  r.finish();
  return l;
}

// IDEM v1

std::string serialize(const IdempotentRecord& r) {
  Writer w("IDEM v1");
  const std::size_t d = r.idempotents.empty() ? 0 : r.idempotents.front().rows();
  w.put("key", to_string(r.key)).num("precision", r.precision).num("dim", d).num("count", r.idempotents.size());
  for (std::size_t i = 0; i < r.idempotents.size(); ++i) w.put("idempotent " + std::to_string(i + 1), join_ints(r.idempotents[i].data()));
  return w.str();
}

IdempotentRecord parse_idempotent_record(std::string_view text) {
  Reader r(text, "IDEM v1");
  IdempotentRecord rec;
  rec.key = key_of(r, 4);
  rec.precision = static_cast<int>(r.integer("precision"));
  const auto d = static_cast<std::size_t>(checked_size(r.integer("dim"), r));
  const int count = checked_size(r.integer("count"), r);
  for (int i = 1; i <= count; ++i) {
    IntVector v = split_ints(r.take("idempotent " + std::to_string(i)), r.where());
    if (v.size() != d * d) r.fail_at("idempotent has the wrong number of entries");
    IntMatrix m(d, d);
    m.data() = std::move(v);
    rec.idempotents.push_back(std::move(m));
  }
  r.finish();
  return rec;
}

// ORBIT v1

std::string serialize(const FlOrbitRecord& r) {
  Writer w("ORBIT v1");
  w.put("key", to_string(r.key)).num("precision", r.precision).num("rank", r.rank);
  w.num("residue_degree", r.residue_degree);
  IntVector idx;
  for (int n : r.basis_indices) idx.emplace_back(n);
  w.put("basis_indices", join_ints(idx));
  std::string fp;
  for (std::size_t i = 0; i < r.fingerprint.size(); ++i) {
    if (i) fp += ';';
    fp += poly_string(r.fingerprint[i]);
  }
  w.put("fingerprint", fp);
  w.num("basis_rows", r.basis.rows());
  matrix_rows(w, r.basis, "basis");
  w.num("dual_count", r.dual.size());
  for (const auto& [n, a] : r.dual) w.put("dual " + std::to_string(n), join_ints(a));
  return w.str();
}

FlOrbitRecord parse_fl_orbit_record(std::string_view text) {
  Reader r(text, "ORBIT v1");
  FlOrbitRecord o;
  o.key = key_of(r, 5);
  o.precision = static_cast<int>(r.integer("precision"));
  o.rank = static_cast<std::size_t>(checked_size(r.integer("rank"), r));
  o.residue_degree = static_cast<int>(r.integer("residue_degree"));
  for (const auto& x : split_ints(r.take("basis_indices"), r.where())) o.basis_indices.push_back(static_cast<int>(x.get_si()));
  if (o.basis_indices.size() != o.rank) r.fail_at("basis_indices does not match the rank");
  const std::string fp = r.take("fingerprint");
  std::size_t start = 0;
  while (start < fp.size()) {
    std::size_t semi = fp.find(';', start);
    if (semi == std::string::npos) semi = fp.size();
    o.fingerprint.push_back(parse_poly(fp.substr(start, semi - start), r.where()));
    start = semi + 1;
  }
  const auto rows = static_cast<std::size_t>(checked_size(r.integer("basis_rows"), r));
  o.basis = matrix_from_rows(r, rows, o.rank, "basis");
  const int count = checked_size(r.integer("dual_count"), r);
  for (int n = 1; n <= count; ++n) {
    IntVector a = split_ints(r.take("dual " + std::to_string(n)), r.where());
    if (a.size() != o.rank) r.fail_at("dual row has the wrong length");
    o.dual.emplace(n, std::move(a));
  }
  r.finish();
  return o;
}

// EIGF v1

std::string serialize(const QlOrbitRecord& r) {
  Writer w("EIGF v1");
  w.put("key", to_string(r.key)).put("status", r.resolved ? "resolved" : "unresolved").num("rank", r.rank);
  w.num("precision", r.precision).num("working_precision", r.working_precision);
  if (r.resolved) {
    w.put("ring_poly", poly_string(r.ring_poly)).num("ring_e", r.ring_e).num("ring_f", r.ring_f);
    w.put("ring_hash", r.ring_hash);
  }
  w.put("defining_poly", poly_string(r.defining_poly)).put("generic", join_ints(r.generic));
  if (r.resolved) {
    w.num("coefficients", r.coefficients.size());
    for (std::size_t n = 0; n < r.coefficients.size(); ++n)
      w.put("b " + std::to_string(n + 1), poly_string(r.coefficients[n]));
  }
  return w.str();
}

QlOrbitRecord parse_ql_orbit_record(std::string_view text) {
  Reader r(text, "EIGF v1");
  QlOrbitRecord q;
  q.key = key_of(r, 6);
  const std::string status = r.take("status");
  if (status != "resolved" && status != "unresolved") r.fail_at("bad status '" + status + "'");
  q.resolved = status == "resolved";
  q.rank = static_cast<std::size_t>(checked_size(r.integer("rank"), r));
  q.precision = static_cast<int>(r.integer("precision"));
  q.working_precision = static_cast<int>(r.integer("working_precision"));
  if (q.resolved) {
    q.ring_poly = parse_poly(r.take("ring_poly"), r.where());
    q.ring_e = static_cast<int>(r.integer("ring_e"));
    q.ring_f = static_cast<int>(r.integer("ring_f"));
    q.ring_hash = r.take("ring_hash");
  }
  q.defining_poly = parse_poly(r.take("defining_poly"), r.where());
  q.generic = split_ints(r.take("generic"), r.where());
  if (q.resolved) {
    const int count = checked_size(r.integer("coefficients"), r);
    for (int n = 1; n <= count; ++n) q.coefficients.push_back(parse_poly(r.take("b " + std::to_string(n)), r.where()));
  }
  r.finish();
  return q;
}

// POLY v1

std::string serialize(const PolyRecord& r) {
  Writer w("POLY v1");
  w.put("key", to_string(r.key)).put("status", r.resolved ? "resolved" : "unresolved");
  w.num("precision", r.precision).put("ring_hash", r.ring_hash).num("prime_bound", r.prime_bound);
  w.num("count", r.polys.size());
  for (const auto& [p, poly] : r.polys) w.put("T " + std::to_string(p), poly_string(poly));
  return w.str();
}

PolyRecord parse_poly_record(std::string_view text) {
  Reader r(text, "POLY v1");
  PolyRecord p;
  p.key = key_of(r, 6);
  const std::string status = r.take("status");
  if (status != "resolved" && status != "unresolved") r.fail_at("bad status '" + status + "'");
  p.resolved = status == "resolved";
  p.precision = static_cast<int>(r.integer("precision"));
  p.ring_hash = r.take("ring_hash");
  p.prime_bound = static_cast<int>(r.integer("prime_bound"));
  const int count = checked_size(r.integer("count"), r);
  for (int i = 0; i < count; ++i) {
    auto [k, v] = r.take_any();
    if (k.rfind("T ", 0) != 0) r.fail_at("expected 'T p'");
    p.polys.emplace_back(parse_long(k.substr(2), r.where()), parse_poly(v, r.where()));
  }
  r.finish();
  return p;
}

// CONG v1

std::string serialize(const CongruenceRecord& r) {
  Writer w("CONG v1");
  w.put("left", r.left).put("right", r.right).put("kind", to_string(r.kind));
  w.put("exponent_lambda", val_string(r.exponent)).num("ramification", r.exponent.ramification());
  w.put("exponent_normalised", rat_string(r.exponent));
  w.num("sturm_bound_used", r.sturm_bound_used).num("precision_used", r.precision_used);
  w.put("index_policy", to_string(r.policy)).num("excluded_modulus", r.excluded_modulus);
  w.num("defects", r.breakdown.size());
  for (const auto& [n, v] : r.breakdown) w.put("defect " + std::to_string(n), val_string(v));
  return w.str();
}

CongruenceRecord parse_congruence_record(std::string_view text) {
  Reader r(text, "CONG v1");
  CongruenceRecord c;
  c.left = r.take("left");
  c.right = r.take("right");
  try {
    c.kind = parse_congruence_kind(r.take("kind"));
  } catch (const Error& e) {
    r.fail_at(e.what());
  }
  const std::string exp = r.take("exponent_lambda");
  const int e = static_cast<int>(r.integer("ramification"));
  if (e < 1) r.fail_at("ramification must be positive");
  c.exponent = parse_val(exp, e, r.where());
  if (r.take("exponent_normalised") != rat_string(c.exponent)) r.fail_at("normalised exponent inconsistent");
  c.sturm_bound_used = static_cast<int>(r.integer("sturm_bound_used"));
  c.precision_used = static_cast<int>(r.integer("precision_used"));
  try {
    c.policy = parse_index_policy(r.take("index_policy"));
  } catch (const Error& err) {
    r.fail_at(err.what());
  }
  c.excluded_modulus = r.integer("excluded_modulus");
  const int count = checked_size(r.integer("defects"), r);
  for (int i = 0; i < count; ++i) {
    auto [k, v] = r.take_any();
    if (k.rfind("defect ", 0) != 0) r.fail_at("expected 'defect n'");
    c.breakdown.emplace(static_cast<int>(parse_long(k.substr(7), r.where())), parse_val(v, e, r.where()));
  }
  r.finish();
  return c;
}

// WITNESS v1

std::string serialize(const WitnessReport& r) {
  Writer w("WITNESS v1");
  const int e = r.witnesses.empty() ? 1 : r.witnesses.front().valuation.ramification();
  w.put("eigenform", r.eigenform).num("m", r.m).num("lo", r.lo).num("hi", r.hi);
  w.num("primes_scanned", r.primes_scanned).num("ramification", e).put("density", r.density().get_str());
  w.num("count", r.witnesses.size());
  for (const auto& x : r.witnesses)
    w.put("witness " + std::to_string(x.p), std::string(x.sign > 0 ? "+" : "-") + " " + val_string(x.valuation));
  return w.str();
}

WitnessReport parse_witness_report(std::string_view text) {
  Reader r(text, "WITNESS v1");
  WitnessReport w;
  w.eigenform = r.take("eigenform");
  w.m = static_cast<int>(r.integer("m"));
  w.lo = r.integer("lo");
  w.hi = r.integer("hi");
  w.primes_scanned = static_cast<std::size_t>(checked_size(r.integer("primes_scanned"), r));
  const int e = static_cast<int>(r.integer("ramification"));
  const std::string density = r.take("density");
  const int count = checked_size(r.integer("count"), r);
  for (int i = 0; i < count; ++i) {
    auto [k, v] = r.take_any();
    if (k.rfind("witness ", 0) != 0 || v.size() < 3 || (v[0] != '+' && v[0] != '-') || v[1] != ' ')
      r.fail_at("expected 'witness p: +|- valuation'");
    w.witnesses.push_back(Witness{parse_long(k.substr(8), r.where()), v[0] == '+' ? 1 : -1, parse_val(v.substr(2), e, r.where())});
  }
  if (w.density().get_str() != density) r.fail_at("density inconsistent with the witness list");
  r.finish();
  return w;
}

// Conversions.

FlOrbitRecord make_fl_orbit_record(const StoreKey& key, const EllAdicOrbit& o) {
  FlOrbitRecord r;
  r.key = key;
  r.precision = o.pp.precision();
  r.rank = o.rank();
  r.residue_degree = o.factor.residue_degree;
  r.basis_indices = o.basis_indices;
  for (const auto& f : o.fingerprint) r.fingerprint.push_back(zpoly::from_fp(f));
  r.basis = reduce(o.factor.basis, o.pp);
  r.dual = o.dual;
  return r;
}

QlOrbitRecord make_ql_orbit_record(const StoreKey& key, const PadicEigenform& f) {
  QlOrbitRecord r;
  r.key = key;
  r.resolved = f.resolved;
  r.rank = f.rank;
  r.precision = f.attained_precision;
  r.working_precision = f.working_precision;
  if (f.resolved) {
    r.ring_poly = f.ring->defining_poly();
    r.ring_e = f.ring->ramification();
    r.ring_f = f.ring->residue_degree();
    r.ring_hash = f.ring->poly_hash();
    for (const auto& b : f.coefficients) r.coefficients.push_back(b.coords());
  }
  r.defining_poly = f.defining_poly;
  r.generic = f.generic;
  return r;
}

PadicEigenform to_eigenform(const QlOrbitRecord& r) {
  require(r.resolved, "eigenform " + to_string(r.key) + " is unresolved");
  PadicEigenform f;
  f.index = r.key.eigenform;
  f.resolved = true;
  f.rank = r.rank;
  f.attained_precision = r.precision;
  f.working_precision = r.working_precision;
  f.ring = make_ring(Int(static_cast<long>(r.key.ell)), r.precision, r.ring_poly, r.ring_e);
  if (f.ring->poly_hash() != r.ring_hash || f.ring->residue_degree() != r.ring_f)
    bad("eigenform " + to_string(r.key) + ": ring data inconsistent with its hash");
  for (const auto& c : r.coefficients) {
    if (c.size() > static_cast<std::size_t>(f.ring->degree())) bad("eigenform " + to_string(r.key) + ": coefficient too long");
    f.coefficients.push_back(f.ring->from_coords(c));
  }
  f.defining_poly = r.defining_poly;
  f.generic = r.generic;
  return f;
}

EllAdicOrbit to_orbit(const FlOrbitRecord& r, std::shared_ptr<const HeckeSpace> space) {
  EllAdicOrbit o;
  o.space = std::move(space);
  o.pp = PrimePower(Int(static_cast<long>(r.key.ell)), r.precision);
  o.factor_pp = o.pp;
  o.index = r.key.factor;
  o.factor.rank = r.rank;
  o.factor.basis = r.basis;
  o.factor.residue_degree = r.residue_degree;
  o.basis_indices = r.basis_indices;
  o.dual = r.dual;
  for (const auto& p : r.fingerprint) o.fingerprint.push_back(FpPoly::from_ints(r.key.ell, p));
  return o;
}

}  // namespace hecke
