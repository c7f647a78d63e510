#include "hecke/sweep.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "hecke/error.hpp"
#include "hecke/hash.hpp"

namespace hecke {

namespace {

// What a worker needs for one pair; built lazily per thread.
struct PairContext {
  bool strong = false;
  PadicEigenform left;
  PadicEigenform right;
  EllAdicOrbit orbit;
  std::vector<Embedding> embeddings;
  int precision = 0;
  int bound = 0;
  std::vector<int> indices;
  CompareOptions compare;
};

struct Token {
  int e = 1;
  int lambda_precision = 0;
  Valuation v = Valuation::exact(0, 1);
};

std::string encode(const std::vector<Token>& ts) {
  std::string s;
  for (const auto& t : ts) {
    if (!s.empty()) s += ' ';
    s += std::to_string(t.e) + "," + std::to_string(t.lambda_precision) + "," + (t.v.is_at_least() ? ">=" : "") +
         std::to_string(t.v.lambda_units());
  }
  return s + "\n";
}

std::vector<Token> decode(const std::string& text, const std::string& id) {
  std::vector<Token> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    int e = 0, lp = 0, v = 0;
    bool at_least = false;
    const auto c1 = tok.find(','), c2 = tok.find(',', c1 + 1);
    try {
      if (c1 == std::string::npos || c2 == std::string::npos) throw std::invalid_argument("separator");
      e = std::stoi(tok.substr(0, c1));
      lp = std::stoi(tok.substr(c1 + 1, c2 - c1 - 1));
      std::string vs = tok.substr(c2 + 1);
      if (vs.rfind(">=", 0) == 0) {
        at_least = true;
        vs = vs.substr(2);
      }
      v = std::stoi(vs);
    } catch (const std::exception&) {
      fail(ErrorKind::StoreCorruption, "claim result " + id + " is malformed");
    }
    out.push_back({e, lp, at_least ? Valuation::at_least(v, e) : Valuation::exact(v, e)});
  }
  if (out.empty()) fail(ErrorKind::StoreCorruption, "claim result " + id + " is empty");
  return out;
}

PairContext build_context(const Store& store, const SweepPair& p, const SweepOptions& options) {
  PairContext c;
  require(p.left.depth() == 6, "sweep: left side must be an eigenform key, got " + to_string(p.left));
  require(p.right.depth() == 5 || p.right.depth() == 6,
          "sweep: right side must be an orbit or eigenform key, got " + to_string(p.right));
  require(p.left.ell == p.right.ell, "sweep: residue characteristics differ in " + to_string(p.left) + " / " +
                                         to_string(p.right));
  c.left = to_eigenform(store.ql_orbit(p.left));
  c.strong = p.right.depth() == 6;
  c.compare.policy = options.policy;
  c.compare.levels = {p.left.level, p.right.level};
  int available = static_cast<int>(c.left.coefficients.size());
  if (c.strong) {
    c.right = to_eigenform(store.ql_orbit(p.right));
    available = std::min(available, static_cast<int>(c.right.coefficients.size()));
    c.precision = std::min(c.left.ring->precision(), c.right.ring->precision());
  } else {
    c.orbit = to_orbit(store.fl_orbit(p.right), store.qorbit_space(p.right));
    available = std::min(available, c.orbit.space->bound);
    c.precision = std::min(c.left.ring->precision(), c.orbit.pp.precision());
  }
  c.bound = options.bound.value_or(available);
  require(c.bound >= 1 && c.bound <= available, "sweep: bound " + std::to_string(c.bound) + " exceeds the " +
                                                    std::to_string(available) + " coefficients available for " +
                                                    to_string(p.left) + " / " + to_string(p.right));
  c.indices = compared_indices(c.left.ring->ell(), c.bound, c.compare);
  return c;
}

std::vector<Token> evaluate(PairContext& c, int n) {
  if (!c.strong) {
    const RingElement h = weak_defect(c.left.coefficients, c.orbit, n);
    return {{h.ring()->ramification(), h.ring()->lambda_precision(), h.valuation()}};
  }
  if (c.embeddings.empty()) c.embeddings = common_embeddings(c.left.ring, c.right.ring, c.precision);
  std::vector<Token> out;
  const auto k = static_cast<std::size_t>(n - 1);
  for (const auto& emb : c.embeddings) {
    const RingElement x = c.left.ring->from_coords(c.left.coefficients[k].coords());
    const RingElement y = c.right.ring->from_coords(c.right.coefficients[k].coords());
    const RingElement d = embed(x, emb.left_generator) - embed(y, emb.right_generator);
    out.push_back({emb.ring->ramification(), emb.ring->lambda_precision(), d.valuation()});
  }
  return out;
}

std::string item_id(const SweepPair& p, const PairContext& c, int n) {
  return short_hash(to_string(p.left) + "|" + to_string(p.right) + "|" + std::to_string(n) + "|" +
                        std::to_string(c.bound) + "|" + std::to_string(c.precision) + "|" + to_string(c.compare.policy),
                    32);
}

CongruenceRecord assemble(const SweepPair& p, const PairContext& c, const std::map<int, std::vector<Token>>& results) {
  CongruenceRecord best;
  bool have = false;
  const std::size_t ways = results.empty() ? 1 : results.begin()->second.size();
  for (std::size_t j = 0; j < ways; ++j) {
    CongruenceRecord rec;
    rec.left = to_string(p.left);
    rec.right = to_string(p.right);
    rec.kind = c.strong ? CongruenceKind::Strong : CongruenceKind::Weak;
    rec.sturm_bound_used = c.bound;
    rec.policy = c.compare.policy;
    rec.excluded_modulus = 1;
    if (c.compare.policy == IndexPolicy::Coprime) {
      rec.excluded_modulus = c.left.ring->ell().get_si();
      for (int level : c.compare.levels) rec.excluded_modulus = std::lcm(rec.excluded_modulus, std::int64_t{level});
    }
    int e = c.left.ring->ramification(), lp = c.left.ring->lambda_precision();
    for (const auto& [n, ts] : results) {
      if (ts.size() != ways) fail(ErrorKind::StoreCorruption, "claim results for " + rec.left + " disagree in shape");
      e = ts[j].e;
      lp = ts[j].lambda_precision;
      rec.breakdown.emplace(n, ts[j].v);
    }
    rec.precision_used = lp / e;
    rec.exponent = min_valuation(rec.breakdown, e, lp);
    if (!have || best.exponent < rec.exponent) {
      best = std::move(rec);
      have = true;
    }
  }
  return best;
}

}  // namespace

SweepResult congruence_sweep(Store& store, const std::vector<SweepPair>& pairs, const SweepOptions& options) {
  require(options.workers >= 1, "sweep: at least one worker is needed");
  struct Item {
    std::size_t pair;
    int n;
    std::string id;
  };
  std::vector<PairContext> contexts;
  std::vector<Item> items;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    contexts.push_back(build_context(store, pairs[i], options));
    for (int n : contexts.back().indices) items.push_back({i, n, item_id(pairs[i], contexts.back(), n)});
  }

  std::vector<std::optional<std::vector<Token>>> results(items.size());
  std::atomic<std::size_t> next{0}, computed{0}, reused{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    std::map<std::size_t, PairContext> local;
    std::vector<std::size_t> busy;
    auto run = [&](std::size_t k) -> bool {
      const Item& it = items[k];
      switch (store.claim(it.id)) {
        case Store::Claim::Done:
          results[k] = decode(*store.result(it.id), it.id);
          ++reused;
          return true;
        case Store::Claim::Busy:
          return false;
        case Store::Claim::Won: {
          auto found = local.find(it.pair);
          if (found == local.end()) found = local.emplace(it.pair, contexts[it.pair]).first;
          auto tokens = evaluate(found->second, it.n);
          store.publish(it.id, encode(tokens));
          results[k] = std::move(tokens);
          ++computed;
          return true;
        }
      }
      return false;
    };
    try {
      for (std::size_t k; (k = next.fetch_add(1)) < items.size();)
        if (!run(k)) busy.push_back(k);
      // Items held by other processes: wait for their result or a stale claim.
      while (!busy.empty()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        std::vector<std::size_t> still;
        for (std::size_t k : busy)
          if (!run(k)) still.push_back(k);
        busy.swap(still);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = items.size();
    }
  };

  std::vector<std::thread> threads;
  for (int w = 1; w < options.workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  SweepResult out;
  out.items = items.size();
  out.computed = computed;
  out.reused = reused;
  std::vector<std::map<int, std::vector<Token>>> per_pair(pairs.size());
  for (std::size_t k = 0; k < items.size(); ++k) per_pair[items[k].pair].emplace(items[k].n, *results[k]);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.records.push_back(assemble(pairs[i], contexts[i], per_pair[i]));
    store.record_congruence(out.records.back());
  }
  return out;
}

std::vector<SweepPair> strong_pairs(const Store& store, std::int64_t ell, const std::vector<int>& levels,
                                    const std::vector<int>& weights) {
  auto wanted = [](const std::vector<int>& xs, int x) {
    return xs.empty() || std::find(xs.begin(), xs.end(), x) != xs.end();
  };
  std::vector<StoreKey> forms;
  for (const auto& q : store.qorbit_keys()) {
    if (!wanted(levels, q.level) || !wanted(weights, q.weight) || !store.has_ell_data(q, ell)) continue;
    for (const auto& f : store.ql_orbits({q.level, q.weight, q.qorbit, ell}))
      if (f.resolved) forms.push_back(f.key);
  }
  std::vector<SweepPair> out;
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = i + 1; j < forms.size(); ++j) out.push_back({forms[i], forms[j]});
  return out;
}

}  // namespace hecke
