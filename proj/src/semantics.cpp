#include "lbiq/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbiq {

int FiniteModel::tuple_index(const std::vector<int>& args) const {
  int idx = 0;
  for (int a : args) idx = idx * nu() + a;
  return idx;
}

std::vector<int> FiniteModel::tuple_of(int index, int arity) const {
  std::vector<int> out(arity);
  for (int i = arity - 1; i >= 0; --i) {
    out[i] = index % nu();
    index /= nu();
  }
  return out;
}

int FiniteModel::tuple_count(int arity) const {
  int n = 1;
  for (int i = 0; i < arity; ++i) n *= nu();
  return n;
}

namespace {

std::string tuple_text(const FiniteModel& m, const std::vector<int>& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += m.universe[t[i]];
  }
  return out + ")";
}

bool all_in(const FiniteModel& m, int w, const std::vector<int>& t) {
  for (int a : t)
    if (!m.dom[w][a]) return false;
  return true;
}

}  // namespace

ModelCheck check_model(const FiniteModel& m, Variant v) {
  auto fail = [](std::string s) { return ModelCheck{false, std::move(s)}; };
  const int W = m.nw(), U = m.nu();
  if (W == 0) return fail("no worlds");
  if (U == 0) return fail("empty universe");
  if (static_cast<int>(m.leq.size()) != W || static_cast<int>(m.dom.size()) != W)
    return fail("table sizes do not match the world count");
  for (int w = 0; w < W; ++w)
    if (!m.leq[w][w]) return fail("reflexivity: not " + m.worlds[w] + " <= " + m.worlds[w]);
  for (int a = 0; a < W; ++a)
    for (int b = 0; b < W; ++b)
      for (int c = 0; c < W; ++c)
        if (m.leq[a][b] && m.leq[b][c] && !m.leq[a][c])
          return fail("transitivity: " + m.worlds[a] + " <= " + m.worlds[b] + " <= " + m.worlds[c]);
  for (int w = 0; w < W; ++w) {
    if (std::none_of(m.dom[w].begin(), m.dom[w].end(), [](char c) { return c; }))
      return fail("empty domain at " + m.worlds[w]);
  }
  for (int w = 0; w < W; ++w)
    for (int u = 0; u < W; ++u)
      for (int a = 0; a < U; ++a) {
        if (m.leq[w][u] && m.dom[w][a] && !m.dom[u][a])
          return fail("increasing domains: " + m.universe[a] + " in D(" + m.worlds[w] + ") but not D(" +
                      m.worlds[u] + ")");
        if (v == Variant::CD && m.dom[w][a] != m.dom[u][a])
          return fail("constant domains: D(" + m.worlds[w] + ") != D(" + m.worlds[u] + ")");
      }
  for (const auto& [f, n] : m.fun_arity) {
    auto it = m.fun.find(f);
    if (it == m.fun.end() || static_cast<int>(it->second.size()) != m.tuple_count(n))
      return fail("function table for " + f + " is incomplete");
    for (int idx = 0; idx < m.tuple_count(n); ++idx) {
      int val = it->second[idx];
      if (val < 0 || val >= U) return fail("function " + f + " leaves the universe");
      auto args = m.tuple_of(idx, n);
      for (int w = 0; w < W; ++w) {
        bool in = all_in(m, w, args), out = m.dom[w][val];
        if (n == 0 && !out) return fail("C1: constant " + f + " not in D(" + m.worlds[w] + ")");
        if (n > 0 && in != out)
          return fail("C2: " + f + tuple_text(m, args) + " at " + m.worlds[w]);
      }
    }
  }
  for (const auto& [p, n] : m.pred_arity) {
    auto it = m.pred.find(p);
    if (it == m.pred.end() || static_cast<int>(it->second.size()) != W)
      return fail("predicate table for " + p + " is incomplete");
    for (int w = 0; w < W; ++w) {
      if (static_cast<int>(it->second[w].size()) != m.tuple_count(n))
        return fail("predicate table for " + p + " is incomplete");
      for (int idx = 0; idx < m.tuple_count(n); ++idx) {
        if (!it->second[w][idx]) continue;
        auto args = m.tuple_of(idx, n);
        if (!all_in(m, w, args))
          return fail("I_P(" + m.worlds[w] + "," + p + ") not within D^n: " + tuple_text(m, args));
        for (int u = 0; u < W; ++u)
          if (m.leq[w][u] && !it->second[u][idx])
            return fail("monotonicity: " + p + tuple_text(m, args) + " at " + m.worlds[w] + " but not at " +
                        m.worlds[u]);
      }
    }
  }
  return {};
}

namespace {

// Bound variables shadow the base assignment; the innermost binding is at the back.
struct Env {
  const Assignment* base;
  std::vector<std::pair<const std::string*, int>> local;

  int lookup(const std::string& x) const {
    for (auto it = local.rbegin(); it != local.rend(); ++it)
      if (*it->first == x) return it->second;
    auto f = base->find(x);
    return f == base->end() ? 0 : f->second;
  }
};

int eval_t(const FiniteModel& m, const Env& env, const Term& t) {
  if (t.is_var) return env.lookup(t.name);
  auto it = m.fun.find(t.name);
  if (it == m.fun.end()) throw std::invalid_argument("model does not interpret function " + t.name);
  int idx = 0;
  for (const auto& a : t.args) idx = idx * m.nu() + eval_t(m, env, a);
  return it->second[idx];
}

bool eval_f(const FiniteModel& m, int w, Env& env, const FormulaNode& f) {
  switch (f.kind) {
    case Kind::Bot: return false;
    case Kind::Top: return true;
    case Kind::Atom: {
      auto it = m.pred.find(f.name);
      if (it == m.pred.end()) return false;
      int idx = 0;
      for (const auto& a : f.args) idx = idx * m.nu() + eval_t(m, env, a);
      return it->second[w][idx];
    }
    case Kind::And: return eval_f(m, w, env, *f.lhs) && eval_f(m, w, env, *f.rhs);
    case Kind::Or: return eval_f(m, w, env, *f.lhs) || eval_f(m, w, env, *f.rhs);
    case Kind::Impl:
      for (int u = 0; u < m.nw(); ++u)
        if (m.leq[w][u] && eval_f(m, u, env, *f.lhs) && !eval_f(m, u, env, *f.rhs)) return false;
      return true;
    case Kind::Excl:
      for (int u = 0; u < m.nw(); ++u)
        if (m.leq[u][w] && eval_f(m, u, env, *f.lhs) && !eval_f(m, u, env, *f.rhs)) return true;
      return false;
    case Kind::Exists: {
      env.local.emplace_back(&f.name, 0);
      bool found = false;
      for (int a = 0; a < m.nu() && !found; ++a) {
        if (!m.dom[w][a]) continue;
        env.local.back().second = a;
        found = eval_f(m, w, env, *f.lhs);
      }
      env.local.pop_back();
      return found;
    }
    case Kind::Forall: {
      env.local.emplace_back(&f.name, 0);
      bool all = true;
      for (int u = 0; u < m.nw() && all; ++u) {
        if (!m.leq[w][u]) continue;
        for (int a = 0; a < m.nu() && all; ++a) {
          if (!m.dom[u][a]) continue;
          env.local.back().second = a;
          all = eval_f(m, u, env, *f.lhs);
        }
      }
      env.local.pop_back();
      return all;
    }
  }
  return false;
}

// Sequent evaluation against label indices already resolved to worlds.
struct CompiledSequent {
  std::vector<std::pair<int, int>> rel;    // label index pairs
  std::vector<std::pair<int, std::string>> dom;
  std::vector<std::pair<int, const FormulaNode*>> gamma, delta;
  std::vector<Label> labels;
  std::vector<std::string> vars;
};

CompiledSequent compile(const Sequent& s) {
  CompiledSequent c;
  auto ls = lbiq::labels(s);
  c.labels.assign(ls.begin(), ls.end());
  auto idx = [&](const Label& l) {
    return static_cast<int>(std::lower_bound(c.labels.begin(), c.labels.end(), l) - c.labels.begin());
  };
  for (const auto& r : s.R) c.rel.emplace_back(idx(r.from), idx(r.to));
  for (const auto& d : s.T) c.dom.emplace_back(idx(d.label), d.var);
  for (const auto& g : s.G) c.gamma.emplace_back(idx(g.label), g.f.get());
  for (const auto& d : s.D) c.delta.emplace_back(idx(d.label), d.f.get());
  auto vs = lbiq::vars(s);
  c.vars.assign(vs.begin(), vs.end());
  return c;
}

bool satisfied(const FiniteModel& m, const CompiledSequent& c, const std::vector<int>& iota, const Assignment& a) {
  for (const auto& [x, y] : c.rel)
    if (!m.leq[iota[x]][iota[y]]) return true;
  for (const auto& [l, x] : c.dom) {
    auto it = a.find(x);
    int val = it == a.end() ? 0 : it->second;
    if (!m.dom[iota[l]][val]) return true;
  }
  Env env{&a, {}};
  for (const auto& [l, f] : c.gamma)
    if (!eval_f(m, iota[l], env, *f)) return true;
  for (const auto& [l, f] : c.delta)
    if (eval_f(m, iota[l], env, *f)) return true;
  return false;
}

// Calls visit(iota) for every label map respecting R; stops when visit returns true.
template <class Visit>
bool for_each_iota(const FiniteModel& m, const CompiledSequent& c, Visit&& visit) {
  const int n = static_cast<int>(c.labels.size());
  std::vector<int> iota(n, 0);
  std::vector<std::vector<std::pair<int, int>>> checks(n);  // edges whose later endpoint is i
  for (const auto& [x, y] : c.rel) checks[std::max(x, y)].emplace_back(x, y);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return visit(iota);
    for (int w = 0; w < m.nw(); ++w) {
      iota[i] = w;
      bool ok = true;
      for (const auto& [x, y] : checks[i])
        if (!m.leq[iota[x]][iota[y]]) {
          ok = false;
          break;
        }
      if (ok && rec(i + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

std::optional<Falsifier> falsify_compiled(const FiniteModel& m, const CompiledSequent& c) {
  std::optional<Falsifier> out;
  const int k = static_cast<int>(c.vars.size());
  for_each_iota(m, c, [&](const std::vector<int>& iota) {
    std::vector<int> vals(k, 0);
    Assignment a;
    for (const auto& x : c.vars) a[x] = 0;
    while (true) {
      for (int i = 0; i < k; ++i) a[c.vars[i]] = vals[i];
      if (!satisfied(m, c, iota, a)) {
        Falsifier f;
        for (std::size_t i = 0; i < c.labels.size(); ++i) f.iota[c.labels[i]] = iota[i];
        f.alpha = a;
        out = std::move(f);
        return true;
      }
      int i = 0;
      while (i < k && ++vals[i] == m.nu()) vals[i++] = 0;
      if (i == k) return false;
    }
  });
  return out;
}

}  // namespace

int eval_term(const FiniteModel& m, const Assignment& a, const Term& t) {
  Env env{&a, {}};
  return eval_t(m, env, t);
}

bool eval_formula(const FiniteModel& m, int w, const Assignment& a, const Formula& f) {
  Env env{&a, {}};
  return eval_f(m, w, env, *f);
}

bool eval_sequent(const FiniteModel& m, const Interpretation& i, const Assignment& a, const Sequent& s) {
  auto c = compile(s);
  std::vector<int> iota(c.labels.size());
  for (std::size_t k = 0; k < c.labels.size(); ++k) {
    auto it = i.find(c.labels[k]);
    if (it == i.end()) throw std::invalid_argument("interpretation misses label " + c.labels[k]);
    iota[k] = it->second;
  }
  return satisfied(m, c, iota, a);
}

std::optional<Falsifier> falsify(const FiniteModel& m, const Sequent& s) {
  return falsify_compiled(m, compile(s));
}

const std::vector<std::vector<std::vector<char>>>& preorders(int n) {
  static std::map<int, std::vector<std::vector<std::vector<char>>>> cache;
#pragma omp critical(lbiq_preorders)
  {
    if (!cache.count(n)) {
      std::vector<std::pair<int, int>> off;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (a != b) off.emplace_back(a, b);
      std::vector<std::vector<std::vector<char>>> out;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << off.size()); ++mask) {
        std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
        for (int a = 0; a < n; ++a) r[a][a] = 1;
        for (std::size_t i = 0; i < off.size(); ++i)
          if (mask >> i & 1) r[off[i].first][off[i].second] = 1;
        bool trans = true;
        for (int a = 0; a < n && trans; ++a)
          for (int b = 0; b < n && trans; ++b)
            for (int c = 0; c < n && trans; ++c)
              if (r[a][b] && r[b][c] && !r[a][c]) trans = false;
        if (trans) out.push_back(std::move(r));
      }
      cache[n] = std::move(out);
    }
  }
  return cache.at(n);
}

namespace {

// A frame fixes everything except the predicate tables. The predicate tables are a mixed-radix
// number: one digit per (predicate, tuple), choosing an up-set of the worlds where the tuple lies
// in the domain.
struct Frame {
  FiniteModel base;
  std::vector<std::pair<std::string, int>> digit_slot;  // predicate, tuple index
  std::vector<std::vector<int>> digit_options;          // world bitmasks
  std::uint64_t combos = 1;
};

std::vector<std::vector<std::vector<char>>> domain_choices(int W, int U, const std::vector<std::vector<char>>& leq,
                                                           Variant v) {
  std::vector<std::vector<std::vector<char>>> out;
  const int subsets = (1 << U) - 1;
  std::vector<int> pick(W, 1);
  while (true) {
    std::vector<std::vector<char>> d(W, std::vector<char>(U, 0));
    for (int w = 0; w < W; ++w)
      for (int a = 0; a < U; ++a) d[w][a] = (pick[w] >> a) & 1;
    bool ok = true;
    for (int w = 0; w < W && ok; ++w)
      for (int u = 0; u < W && ok; ++u) {
        if (v == Variant::CD && pick[w] != pick[u]) ok = false;
        if (leq[w][u] && (pick[w] & ~pick[u])) ok = false;
      }
    if (ok) out.push_back(std::move(d));
    int i = 0;
    while (i < W && ++pick[i] > subsets) pick[i++] = 1;
    if (i == W) break;
  }
  return out;
}

bool fun_ok(const FiniteModel& m, int n, const std::vector<int>& table) {
  for (int idx = 0; idx < static_cast<int>(table.size()); ++idx) {
    auto args = m.tuple_of(idx, n);
    for (int w = 0; w < m.nw(); ++w) {
      bool out = m.dom[w][table[idx]];
      if (n == 0 ? !out : all_in(m, w, args) != out) return false;
    }
  }
  return true;
}

// All C1/C2-respecting tables for each function symbol, in lexicographic order.
std::vector<std::vector<std::vector<int>>> fun_choices(const FiniteModel& m, const Signature& sig) {
  std::vector<std::vector<std::vector<int>>> out;
  for (const auto& [f, n] : sig.functions) {
    const int len = m.tuple_count(n);
    std::vector<std::vector<int>> ok;
    std::vector<int> t(len, 0);
    while (true) {
      if (fun_ok(m, n, t)) ok.push_back(t);
      int i = len - 1;
      while (i >= 0 && ++t[i] == m.nu()) t[i--] = 0;
      if (i < 0) break;
    }
    out.push_back(std::move(ok));
  }
  return out;
}

void finish_frame(Frame& fr, const Signature& sig) {
  const FiniteModel& m = fr.base;
  for (const auto& [p, n] : sig.predicates) {
    for (int idx = 0; idx < m.tuple_count(n); ++idx) {
      auto args = m.tuple_of(idx, n);
      int support = 0;
      for (int w = 0; w < m.nw(); ++w)
        if (all_in(m, w, args)) support |= 1 << w;
      std::vector<int> opts;
      for (int s = 0; s < (1 << m.nw()); ++s) {
        if ((s & support) != s) continue;
        bool up = true;
        for (int w = 0; w < m.nw() && up; ++w)
          for (int u = 0; u < m.nw() && up; ++u)
            if ((s >> w & 1) && m.leq[w][u] && !(s >> u & 1)) up = false;
        if (up) opts.push_back(s);
      }
      fr.digit_slot.emplace_back(p, idx);
      fr.combos *= opts.size();
      fr.digit_options.push_back(std::move(opts));
    }
  }
}

template <class Emit>
void for_each_frame(const Signature& sig, Bounds b, Variant v, Emit&& emit) {
  for (int W = 1; W <= b.worlds; ++W)
    for (int U = 1; U <= b.universe; ++U)
      for (const auto& leq : preorders(W))
        for (auto& dom : domain_choices(W, U, leq, v)) {
          FiniteModel m;
          for (int w = 0; w < W; ++w) m.worlds.push_back("w" + std::to_string(w));
          for (int a = 0; a < U; ++a) m.universe.push_back("e" + std::to_string(a));
          m.leq = leq;
          m.dom = dom;
          m.fun_arity = sig.functions;
          m.pred_arity = sig.predicates;
          auto choices = fun_choices(m, sig);
          if (std::any_of(choices.begin(), choices.end(), [](const auto& c) { return c.empty(); })) continue;
          std::vector<std::size_t> pick(choices.size(), 0);
          while (true) {
            Frame fr;
            fr.base = m;
            std::size_t k = 0;
            for (const auto& [f, n] : sig.functions) fr.base.fun[f] = choices[k][pick[k]], ++k;
            for (const auto& [p, n] : sig.predicates)
              fr.base.pred[p] = std::vector<std::vector<char>>(W, std::vector<char>(fr.base.tuple_count(n), 0));
            finish_frame(fr, sig);
            if (emit(fr)) return;
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
            if (i == pick.size()) break;
          }
        }
}

void decode(const Frame& fr, std::uint64_t index, FiniteModel& m) {
  for (std::size_t d = 0; d < fr.digit_options.size(); ++d) {
    const auto& opts = fr.digit_options[d];
    int mask = opts[index % opts.size()];
    index /= opts.size();
    auto& table = m.pred[fr.digit_slot[d].first];
    for (int w = 0; w < m.nw(); ++w) table[w][fr.digit_slot[d].second] = (mask >> w) & 1;
  }
}

Signature search_signature(const Sequent& s) {
  return signature_of(s);
}

std::optional<Countermodel> search(const Sequent& s, Bounds b, Variant v, int jobs) {
  const auto sig = search_signature(s);
  const auto cs = compile(s);
  std::optional<Countermodel> result;
  for_each_frame(sig, b, v, [&](const Frame& fr) {
    constexpr std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best{none};
    const auto total = static_cast<std::int64_t>(fr.combos);
    if (jobs <= 1) {
      FiniteModel m = fr.base;
      for (std::int64_t i = 0; i < total; ++i) {
        decode(fr, static_cast<std::uint64_t>(i), m);
        if (falsify_compiled(m, cs)) {
          best = static_cast<std::uint64_t>(i);
          break;
        }
      }
    } else {
#pragma omp parallel num_threads(jobs)
      {
        FiniteModel m = fr.base;
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < total; ++i) {
          auto idx = static_cast<std::uint64_t>(i);
          if (idx >= best.load(std::memory_order_relaxed)) continue;
          decode(fr, idx, m);
          if (falsify_compiled(m, cs)) {
            auto cur = best.load();
            while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
            }
          }
        }
      }
    }
    if (best.load() == none) return false;
    Countermodel cm;
    cm.model = fr.base;
    decode(fr, best.load(), cm.model);
    auto f = falsify_compiled(cm.model, cs);
    cm.iota = f->iota;
    cm.alpha = f->alpha;
    result = std::move(cm);
    return true;
  });
  return result;
}

}  // namespace

std::optional<Countermodel> find_countermodel(const Sequent& s, Bounds b, Variant v, int jobs) {
  return search(s, b, v, std::max(1, jobs));
}

std::optional<Countermodel> find_countermodel_serial(const Sequent& s, Bounds b, Variant v) {
  return search(s, b, v, 1);
}

std::uint64_t count_models(const Signature& sig, Bounds b, Variant v) {
  std::uint64_t n = 0;
  for_each_frame(sig, b, v, [&](const Frame& fr) {
    n += fr.combos;
    return false;
  });
  return n;
}

FiniteModel random_model(const Signature& sig, Variant v, int max_w, int max_u, std::mt19937_64& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int attempt = 0;; ++attempt) {
    FiniteModel m;
    const int W = uni(1, max_w), U = uni(1, max_u);
    for (int w = 0; w < W; ++w) m.worlds.push_back("w" + std::to_string(w));
    for (int a = 0; a < U; ++a) m.universe.push_back("e" + std::to_string(a));
    const auto& orders = preorders(W);
    m.leq = orders[uni(0, static_cast<int>(orders.size()) - 1)];
    m.dom.assign(W, std::vector<char>(U, 0));
    if (v == Variant::CD) {
      std::vector<char> d(U, 0);
      for (int a = 0; a < U; ++a) d[a] = uni(0, 1);
      d[uni(0, U - 1)] = 1;
      m.dom.assign(W, d);
    } else {
      std::vector<std::vector<char>> d0(W, std::vector<char>(U, 0));
      for (int w = 0; w < W; ++w) {
        for (int a = 0; a < U; ++a) d0[w][a] = uni(0, 2) == 0;
        if (std::none_of(d0[w].begin(), d0[w].end(), [](char c) { return c; })) d0[w][uni(0, U - 1)] = 1;
      }
      for (int u = 0; u < W; ++u)
        for (int w = 0; w < W; ++w)
          if (m.leq[w][u])
            for (int a = 0; a < U; ++a) m.dom[u][a] |= d0[w][a];
    }
    if (attempt >= 100) m.dom.assign(W, std::vector<char>(U, 1));
    std::vector<int> common;
    for (int a = 0; a < U; ++a) {
      bool all = true;
      for (int w = 0; w < W; ++w) all = all && m.dom[w][a];
      if (all) common.push_back(a);
    }
    if (common.empty() && !sig.constants().empty()) {
      int e = uni(0, U - 1);
      for (int w = 0; w < W; ++w) m.dom[w][e] = 1;
      common.push_back(e);
    }
    m.fun_arity = sig.functions;
    m.pred_arity = sig.predicates;
    bool ok = true;
    for (const auto& [f, n] : sig.functions) {
      std::vector<int> table(m.tuple_count(n));
      if (n == 0) {
        table[0] = common[uni(0, static_cast<int>(common.size()) - 1)];
      } else {
        bool found = false;
        for (int tries = 0; tries < 50 && !found; ++tries) {
          for (auto& x : table) x = uni(0, U - 1);
          found = fun_ok(m, n, table);
        }
        if (!found && n == 1) {
          for (int a = 0; a < U; ++a) table[a] = a;
          found = true;
        }
        if (!found) {
          auto all_full = [&] {
            for (const auto& d : m.dom)
              for (char c : d)
                if (!c) return false;
            return true;
          }();
          if (!all_full) {
            ok = false;
            break;
          }
          for (auto& x : table) x = uni(0, U - 1);
        }
      }
      m.fun[f] = std::move(table);
    }
    if (!ok) continue;
    for (const auto& [p, n] : sig.predicates) {
      const int len = m.tuple_count(n);
      std::vector<std::vector<char>> i0(W, std::vector<char>(len, 0));
      for (int w = 0; w < W; ++w)
        for (int idx = 0; idx < len; ++idx)
          if (all_in(m, w, m.tuple_of(idx, n))) i0[w][idx] = uni(0, 1);
      std::vector<std::vector<char>> table(W, std::vector<char>(len, 0));
      for (int u = 0; u < W; ++u)
        for (int w = 0; w < W; ++w)
          if (m.leq[w][u])
            for (int idx = 0; idx < len; ++idx) table[u][idx] |= i0[w][idx];
      m.pred[p] = std::move(table);
    }
    return m;
  }
}

std::string to_string(const FiniteModel& m) {
  std::ostringstream out;
  auto elem = [](int a) { return "e" + std::to_string(a); };
  out << "worlds:";
  for (const auto& w : m.worlds) out << ' ' << w;
  out << "\norder:";
  bool first = true;
  for (int w = 0; w < m.nw(); ++w)
    for (int u = 0; u < m.nw(); ++u)
      if (w != u && m.leq[w][u]) {
        out << (first ? " " : ", ") << m.worlds[w] << "<=" << m.worlds[u];
        first = false;
      }
  out << "\nuniverse:";
  for (int a = 0; a < m.nu(); ++a) out << ' ' << elem(a);
  out << '\n';
  for (int a = 0; a < m.nu(); ++a)
    if (m.universe[a] != elem(a)) out << "element " << elem(a) << " = " << m.universe[a] << '\n';
  for (int w = 0; w < m.nw(); ++w) {
    out << "domain " << m.worlds[w] << ":";
    for (int a = 0; a < m.nu(); ++a)
      if (m.dom[w][a]) out << ' ' << elem(a);
    out << '\n';
  }
  auto tuple = [&](int idx, int n) {
    std::string s;
    auto t = m.tuple_of(idx, n);
    for (int i = 0; i < n; ++i) s += (i ? "," : "") + elem(t[i]);
    return s;
  };
  for (const auto& [f, n] : m.fun_arity) {
    out << "fun " << f << "/" << n << ":";
    const auto& table = m.fun.at(f);
    for (int idx = 0; idx < m.tuple_count(n); ++idx)
      out << (idx ? ", " : " ") << tuple(idx, n) << "->" << elem(table[idx]);
    out << '\n';
  }
  for (const auto& [p, n] : m.pred_arity) {
    const auto& table = m.pred.at(p);
    for (int w = 0; w < m.nw(); ++w) {
      out << "pred " << p << "/" << n << " @ " << m.worlds[w] << ":";
      for (int idx = 0; idx < m.tuple_count(n); ++idx)
        if (table[w][idx]) out << ' ' << (n == 0 ? std::string("()") : tuple(idx, n));
      out << '\n';
    }
  }
  return out.str();
}

std::string to_string(const Countermodel& c, const Sequent& s) {
  std::ostringstream out;
  out << to_string(c.model);
  out << "iota:";
  bool first = true;
  for (const auto& [l, w] : c.iota) {
    out << (first ? " " : ", ") << l << "->" << c.model.worlds[w];
    first = false;
  }
  out << "\nalpha:";
  first = true;
  for (const auto& x : vars(s)) {
    auto it = c.alpha.find(x);
    out << (first ? " " : ", ") << x << "->e" << (it == c.alpha.end() ? 0 : it->second);
    first = false;
  }
  out << '\n';
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

FiniteModel parse_model(std::string_view text) {
  FiniteModel m;
  std::map<std::string, int> world_index, elem_index;
  auto world = [&](const std::string& w) {
    auto it = world_index.find(w);
    if (it == world_index.end()) throw std::invalid_argument("unknown world " + w);
    return it->second;
  };
  auto elem = [&](const std::string& e) {
    auto it = elem_index.find(e);
    if (it == elem_index.end()) throw std::invalid_argument("unknown element " + e);
    return it->second;
  };
  auto parse_tuple = [&](const std::string& t) {
    std::vector<int> out;
    if (t == "()" || t.empty()) return out;
    for (const auto& e : split(t, ',')) out.push_back(elem(trim(e)));
    return out;
  };
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      if (line.rfind("element ", 0) == 0) {
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": bad element");
        m.universe[elem(trim(line.substr(8, eq - 8)))] = trim(line.substr(eq + 1));
        continue;
      }
      throw std::invalid_argument("line " + std::to_string(lineno) + ": missing ':'");
    }
    std::string head = trim(line.substr(0, colon)), body = trim(line.substr(colon + 1));
    auto hw = words(head);
    if (head == "worlds") {
      for (const auto& w : words(body)) {
        world_index[w] = m.nw();
        m.worlds.push_back(w);
      }
      m.leq.assign(m.nw(), std::vector<char>(m.nw(), 0));
      for (int w = 0; w < m.nw(); ++w) m.leq[w][w] = 1;
    } else if (head == "order") {
      for (auto pair : split(body, ',')) {
        pair = trim(pair);
        if (pair.empty()) continue;
        auto le = pair.find("<=");
        if (le == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": bad order pair");
        m.leq[world(trim(pair.substr(0, le)))][world(trim(pair.substr(le + 2)))] = 1;
      }
    } else if (head == "universe") {
      for (const auto& e : words(body)) {
        elem_index[e] = m.nu();
        m.universe.push_back(e);
      }
      m.dom.assign(m.nw(), std::vector<char>(m.nu(), 0));
    } else if (hw.size() == 2 && hw[0] == "domain") {
      int w = world(hw[1]);
      for (const auto& e : words(body)) m.dom[w][elem(e)] = 1;
    } else if (hw.size() == 2 && hw[0] == "fun") {
      auto slash = hw[1].find('/');
      std::string f = hw[1].substr(0, slash);
      int n = std::stoi(hw[1].substr(slash + 1));
      m.fun_arity[f] = n;
      std::vector<int> table(m.tuple_count(n), 0);
      for (auto entry : split(body, ',')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        auto arrow = entry.find("->");
        if (arrow == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": bad entry");
        table[m.tuple_index(parse_tuple(trim(entry.substr(0, arrow))))] = elem(trim(entry.substr(arrow + 2)));
      }
      m.fun[f] = std::move(table);
    } else if (hw.size() == 4 && hw[0] == "pred" && hw[2] == "@") {
      auto slash = hw[1].find('/');
      std::string p = hw[1].substr(0, slash);
      int n = std::stoi(hw[1].substr(slash + 1));
      m.pred_arity[p] = n;
      auto& table = m.pred[p];
      if (table.empty()) table.assign(m.nw(), std::vector<char>(m.tuple_count(n), 0));
      int w = world(hw[3]);
      for (const auto& t : words(body)) table[w][m.tuple_index(parse_tuple(t))] = 1;
    } else if (head == "iota" || head == "alpha") {
      continue;
    } else {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown entry '" + head + "'");
    }
  }
  return m;
}

}  // namespace lbiq
