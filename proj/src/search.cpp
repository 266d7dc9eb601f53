#include "lbiq/search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lbiq/transform.hpp"

namespace lbiq {

const char* status_name(Status s) {
  switch (s) {
    case Status::Proved: return "proved";
    case Status::Refuted: return "refuted";
    case Status::Exhausted: return "exhausted";
  }
  return "?";
}

namespace {

int term_rank(const Term& t) {
  if (t.is_var) return 1;
  return t.args.empty() ? 0 : 2;
}

}  // namespace

bool term_less(const Term& a, const Term& b) {
  int da = a.depth(), db = b.depth();
  if (da != db) return da < db;
  int ra = term_rank(a), rb = term_rank(b);
  if (ra != rb) return ra < rb;
  if (a.name != b.name) return a.name < b.name;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (term_less(a.args[i], b.args[i])) return true;
    if (term_less(b.args[i], a.args[i])) return false;
  }
  return false;
}

Sequent goal_of(const Formula& phi, const Label& w) {
  Sequent s;
  for (const auto& x : free_vars(phi)) s.add_dom(w, x);
  s.add(Side::Right, LFormula(w, phi));
  return s;
}

namespace {

// Terms of depth <= d over atoms and the non-constant functions of sig, in term order.
std::vector<Term> term_universe(std::vector<Term> atoms, const Signature& sig, int d) {
  std::sort(atoms.begin(), atoms.end(), term_less);
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::vector<Term> all = atoms;
  std::vector<Term> prev_layer = atoms;
  for (int k = 1; k <= d; ++k) {
    std::vector<Term> layer;
    for (const auto& [f, n] : sig.functions) {
      if (n == 0) continue;
      std::vector<std::size_t> pick(n, 0);
      while (true) {
        std::vector<Term> args;
        int maxd = -1;
        for (int i = 0; i < n; ++i) {
          args.push_back(all[pick[i]]);
          maxd = std::max(maxd, all[pick[i]].depth());
        }
        if (maxd == k - 1) layer.push_back(Term::app(f, args));
        int i = n - 1;
        while (i >= 0 && ++pick[i] == all.size()) pick[i--] = 0;
        if (i < 0) break;
      }
    }
    std::sort(layer.begin(), layer.end(), term_less);
    if (layer.empty()) break;
    all.insert(all.end(), layer.begin(), layer.end());
    prev_layer = std::move(layer);
  }
  return all;
}

enum Step { kDs, kOrL, kOrR, kAndL, kAndR, kImplL, kImplR, kExclL, kExclR, kExL, kExR, kAllL, kAllR, kSteps };

struct Ctx {
  SearchConfig cfg;
  Signature sig;  // goal signature, with a default constant when it has none
  std::vector<Term> constants;
};

struct State {
  Sequent s;
  std::set<std::string> keys;
  std::vector<std::string> history;
  int round = 1;
  int step = -1;
  std::vector<RuleInstance> pending;
  std::size_t next = 0;
  bool progressed = false;
};

struct Result {
  Status status = Status::Exhausted;
  std::optional<Proof> proof;
  std::optional<Branch> branch;
  std::size_t nodes = 0;
  int rounds = 0;
  std::string reason;
};

std::string inst_key(const RuleInstance& in) {
  std::string k = rule_name(in.rule);
  k += "|" + in.principal->label + "|" + in.principal->key;
  switch (in.rule) {
    case Rule::implL:
    case Rule::exclR: k += "|" + in.label; break;
    case Rule::forallL: k += "|" + in.label + "|" + to_string(*in.term); break;
    case Rule::existsR: k += "|" + to_string(*in.term); break;
    default: break;
  }
  return k;
}

std::vector<Term> atoms_at(const Ctx& ctx, const Sequent& s, const Label& u) {
  std::vector<Term> atoms = ctx.constants;
  std::set<std::string> vs = ctx.cfg.variant == Variant::CD ? vars(s) : available_vars(s, u);
  for (const auto& x : vs) atoms.push_back(Term::var(x));
  return atoms;
}

std::optional<Term> next_term(const Ctx& ctx, const State& st, const Label& target, const std::string& prefix) {
  for (const auto& t : term_universe(atoms_at(ctx, st.s, target), ctx.sig, ctx.cfg.max_term_depth))
    if (!st.keys.count(prefix + to_string(t))) return t;
  return std::nullopt;
}

std::vector<RuleInstance> candidates(const Ctx& ctx, const State& st, int step) {
  std::vector<RuleInstance> out;
  const Sequent& s = st.s;
  const bool intu = ctx.cfg.intuitionistic_only;
  auto distinct = [](const std::vector<LFormula>& xs) {
    std::vector<LFormula> u;
    for (const auto& x : xs)
      if (u.empty() || !(u.back() == x)) u.push_back(x);
    return u;
  };
  const auto G = distinct(s.G), D = distinct(s.D);
  auto each = [&](const std::vector<LFormula>& side, Kind k, Rule r) {
    for (const auto& lf : side)
      if (lf.f->kind == k) out.push_back({r, lf, "", "", std::nullopt});
  };
  switch (step) {
    case kDs:
      if (ctx.cfg.variant != Variant::ID || intu) break;
      for (const auto& g : G) {
        if (g.f->kind != Kind::Atom) continue;
        auto ys = vt(g.f->args);
        if (std::any_of(ys.begin(), ys.end(), [&](const std::string& y) { return s.count_dom(g.label, y) == 0; }))
          out.push_back({Rule::ds, g, "", "", std::nullopt});
      }
      break;
    case kOrL: each(G, Kind::Or, Rule::orL); break;
    case kOrR: each(D, Kind::Or, Rule::orR); break;
    case kAndL: each(G, Kind::And, Rule::andL); break;
    case kAndR: each(D, Kind::And, Rule::andR); break;
    case kImplR: each(D, Kind::Impl, Rule::implR); break;
    case kExL: each(G, Kind::Exists, Rule::existsL); break;
    case kAllR: each(D, Kind::Forall, Rule::forallR); break;
    case kExclL:
      if (!intu) each(G, Kind::Excl, Rule::exclL);
      break;
    case kImplL: {
      Reach reach(s);
      for (const auto& g : G)
        if (g.f->kind == Kind::Impl)
          for (const auto& u : reach.from(g.label)) out.push_back({Rule::implL, g, u, "", std::nullopt});
      break;
    }
    case kExclR: {
      if (intu) break;
      Reach reach(s);
      for (const auto& d : D)
        if (d.f->kind == Kind::Excl)
          for (const auto& w : reach.to(d.label)) out.push_back({Rule::exclR, d, w, "", std::nullopt});
      break;
    }
    case kExR:
      for (const auto& d : D) {
        if (d.f->kind != Kind::Exists) continue;
        RuleInstance in{Rule::existsR, d, "", "", std::nullopt};
        in.term = Term::var("_");
        std::string prefix = inst_key(in);
        prefix.resize(prefix.size() - 1);
        if (auto t = next_term(ctx, st, d.label, prefix)) {
          in.term = *t;
          out.push_back(in);
        }
      }
      break;
    case kAllL: {
      Reach reach(s);
      for (const auto& g : G) {
        if (g.f->kind != Kind::Forall) continue;
        for (const auto& u : reach.from(g.label)) {
          RuleInstance in{Rule::forallL, g, u, "", Term::var("_")};
          std::string prefix = inst_key(in);
          prefix.resize(prefix.size() - 1);
          if (auto t = next_term(ctx, st, u, prefix)) {
            in.term = *t;
            out.push_back(in);
          }
        }
      }
      break;
    }
    default: break;
  }
  return out;
}

Proof wrap(std::vector<std::pair<Sequent, RuleInstance>>& chain, Proof top) {
  while (!chain.empty()) {
    Proof p;
    p.concl = std::move(chain.back().first);
    p.inst = std::move(chain.back().second);
    p.prem.push_back(std::move(top));
    top = std::move(p);
    chain.pop_back();
  }
  return top;
}

// Every atom of q occurs in s, and every formula of q occurs in s up to persistence: a left
// formula at or below its label, a right formula at or above it.
bool adds_nothing(const Sequent& q, const Sequent& s) {
  auto within = [](const auto& xs, const auto& ys) {
    return std::all_of(xs.begin(), xs.end(),
                       [&](const auto& x) { return std::find(ys.begin(), ys.end(), x) != ys.end(); });
  };
  if (!within(q.R, s.R) || !within(q.T, s.T)) return false;
  std::optional<Reach> reach;
  auto covered = [&](const LFormula& lf, const std::vector<LFormula>& side, bool below) {
    if (std::find(side.begin(), side.end(), lf) != side.end()) return true;
    if (!reach) reach.emplace(s);
    for (const auto& o : side) {
      if (o.key != lf.key) continue;
      if (below ? reach->reachable(o.label, lf.label) : reach->reachable(lf.label, o.label)) return true;
    }
    return false;
  };
  for (const auto& lf : q.G)
    if (!covered(lf, s.G, true)) return false;
  for (const auto& lf : q.D)
    if (!covered(lf, s.D, false)) return false;
  return true;
}

Result run(const Ctx& ctx, State st, std::size_t budget, int split_depth);
std::optional<Proof> bypass(const Sequent& concl, const RuleInstance& in, const Proof& first, Variant v);

Result exhausted_budget(std::size_t budget) {
  Result r;
  r.status = Status::Exhausted;
  r.nodes = budget;
  r.reason = "node budget";
  return r;
}

Result run(const Ctx& ctx, State st, std::size_t budget, int split_depth) {
  std::size_t used = 0;
  std::vector<std::pair<Sequent, RuleInstance>> chain;
  while (true) {
    if (auto ini = find_initial(st.s)) {
      Proof leaf;
      leaf.concl = st.s;
      leaf.inst = *ini;
      Result r;
      r.status = Status::Proved;
      r.proof = wrap(chain, std::move(leaf));
      r.nodes = used;
      r.rounds = st.round;
      return r;
    }
    if (st.next >= st.pending.size()) {
      ++st.step;
      if (st.step == kSteps) {
        if (!st.progressed) {
          Result r;
          r.status = Status::Refuted;
          r.branch = Branch{st.s, st.history, true, true};
          r.nodes = used;
          r.rounds = st.round;
          r.reason = "saturated";
          return r;
        }
        ++st.round;
        st.step = 0;
        st.progressed = false;
        if (st.round > ctx.cfg.max_rounds) {
          Result r;
          r.status = Status::Exhausted;
          r.branch = Branch{st.s, st.history, true, false};
          r.nodes = used;
          r.rounds = ctx.cfg.max_rounds;
          r.reason = "round limit";
          return r;
        }
      }
      st.pending = candidates(ctx, st, st.step);
      st.next = 0;
      continue;
    }
    RuleInstance in = st.pending[st.next++];
    if (!st.s.contains(principal_side(in.rule), *in.principal)) continue;
    const std::string key = inst_key(in);
    if (st.keys.count(key)) continue;
    if (creates_label(in.rule)) in.label = fresh_label(labels(st.s));
    if (creates_var(in.rule)) in.var = fresh_variable(st.s, in.principal->f->name);
    if (used >= budget) return exhausted_budget(budget);
    ++used;
    std::vector<Sequent> prems = premises(st.s, in, ctx.cfg.variant);
    st.keys.insert(key);
    if (std::any_of(prems.begin(), prems.end(), [&](const Sequent& q) { return adds_nothing(q, st.s); })) {
      --used;
      continue;
    }
    st.history.push_back(to_string(in));
    st.progressed = true;
    if (prems.size() == 1) {
      chain.emplace_back(std::move(st.s), in);
      st.s = std::move(prems[0]);
      continue;
    }
    State left = st, right = st;
    left.s = std::move(prems[0]);
    right.s = std::move(prems[1]);
    const std::size_t rest = budget - used;
    Result l, r;
    std::optional<Proof> skip;
    if (ctx.cfg.jobs > 1 && split_depth < 10) {
#pragma omp task shared(l, ctx) firstprivate(left)
      l = run(ctx, std::move(left), rest, split_depth + 1);
#pragma omp task shared(r, ctx) firstprivate(right)
      r = run(ctx, std::move(right), rest, split_depth + 1);
#pragma omp taskwait
      if (l.status == Status::Proved) skip = bypass(st.s, in, *l.proof, ctx.cfg.variant);
      // Reproduce the serial budget split: the right premise only gets what the left one left over.
      if (l.status == Status::Proved && !skip && r.nodes > rest - l.nodes) r = exhausted_budget(rest - l.nodes);
    } else {
      l = run(ctx, std::move(left), rest, split_depth + 1);
      if (l.status == Status::Proved) skip = bypass(st.s, in, *l.proof, ctx.cfg.variant);
      if (l.status == Status::Proved && !skip) r = run(ctx, std::move(right), rest - l.nodes, split_depth + 1);
    }
    if (l.status != Status::Proved) {
      l.nodes += used;
      return l;
    }
    if (skip) {
      Result out;
      out.status = Status::Proved;
      out.proof = wrap(chain, std::move(*skip));
      out.nodes = used + l.nodes;
      out.rounds = l.rounds;
      return out;
    }
    if (r.status != Status::Proved) {
      r.nodes += used + l.nodes;
      return r;
    }
    Proof node;
    node.concl = std::move(st.s);
    node.inst = in;
    node.prem.push_back(std::move(*l.proof));
    node.prem.push_back(std::move(*r.proof));
    Result out;
    out.status = Status::Proved;
    out.proof = wrap(chain, std::move(node));
    out.nodes = used + l.nodes + r.nodes;
    out.rounds = std::max(l.rounds, r.rounds);
    return out;
  }
}

// ---- pruning -------------------------------------------------------------------------------

struct Use {
  std::set<std::string> left, right;  // label|alpha key
  std::set<Label> labels;
  std::set<std::string> dom;  // label|var
};

std::string fkey(const LFormula& lf) { return lf.label + "|" + lf.key; }
std::string dkey(const Label& l, const std::string& x) { return l + "|" + x; }

void use_formula(Use& u, Side side, const LFormula& lf) {
  (side == Side::Left ? u.left : u.right).insert(fkey(lf));
  u.labels.insert(lf.label);
}

void use_path(Use& u, const Sequent& s, const Label& a, const Label& b) {
  Reach r(s);
  for (const auto& l : r.path(a, b)) u.labels.insert(l);
}

void use_availability(Use& u, const Sequent& s, const Term& t, const Label& target, Variant v) {
  if (v == Variant::CD) return;
  Reach r(s);
  for (const auto& y : vt(t)) {
    for (const auto& d : s.T) {
      if (d.var == y && r.reachable(d.label, target)) {
        u.dom.insert(dkey(d.label, y));
        for (const auto& l : r.path(d.label, target)) u.labels.insert(l);
        break;
      }
    }
  }
}

void merge_use(Use& into, const Use& from) {
  into.left.insert(from.left.begin(), from.left.end());
  into.right.insert(from.right.begin(), from.right.end());
  into.labels.insert(from.labels.begin(), from.labels.end());
  into.dom.insert(from.dom.begin(), from.dom.end());
}

struct Aux {
  std::vector<std::pair<Side, LFormula>> formulas;
  std::vector<std::pair<Label, std::string>> doms;
  std::optional<Label> label;  // label created by the rule, attached to anchor
  Label anchor;
};

std::vector<Aux> aux_of(const Proof& p) {
  const RuleInstance& in = p.inst;
  const LFormula& pr = *in.principal;
  const Formula& f = pr.f;
  std::vector<Aux> out;
  switch (in.rule) {
    case Rule::andL:
      out.push_back({{{Side::Left, LFormula(pr.label, f->lhs)}, {Side::Left, LFormula(pr.label, f->rhs)}}, {}, {}, {}});
      break;
    case Rule::orR:
      out.push_back(
          {{{Side::Right, LFormula(pr.label, f->lhs)}, {Side::Right, LFormula(pr.label, f->rhs)}}, {}, {}, {}});
      break;
    case Rule::orL:
      out.push_back({{{Side::Left, LFormula(pr.label, f->lhs)}}, {}, {}, {}});
      out.push_back({{{Side::Left, LFormula(pr.label, f->rhs)}}, {}, {}, {}});
      break;
    case Rule::andR:
      out.push_back({{{Side::Right, LFormula(pr.label, f->lhs)}}, {}, {}, {}});
      out.push_back({{{Side::Right, LFormula(pr.label, f->rhs)}}, {}, {}, {}});
      break;
    case Rule::implL:
    case Rule::exclR:
      out.push_back({{{Side::Right, LFormula(in.label, f->lhs)}}, {}, {}, {}});
      out.push_back({{{Side::Left, LFormula(in.label, f->rhs)}}, {}, {}, {}});
      break;
    case Rule::implR:
    case Rule::exclL:
      out.push_back({{{Side::Left, LFormula(in.label, f->lhs)}, {Side::Right, LFormula(in.label, f->rhs)}},
                     {},
                     in.label,
                     pr.label});
      break;
    case Rule::existsL:
      out.push_back({{{Side::Left, LFormula(pr.label, subst(f->lhs, Term::var(in.var), f->name))}},
                     {{pr.label, in.var}},
                     {},
                     {}});
      break;
    case Rule::existsR:
      out.push_back({{{Side::Right, LFormula(pr.label, subst(f->lhs, *in.term, f->name))}}, {}, {}, {}});
      break;
    case Rule::forallL:
      out.push_back({{{Side::Left, LFormula(in.label, subst(f->lhs, *in.term, f->name))}}, {}, {}, {}});
      break;
    case Rule::forallR:
      out.push_back({{{Side::Right, LFormula(in.label, subst(f->lhs, Term::var(in.var), f->name))}},
                     {{in.label, in.var}},
                     in.label,
                     pr.label});
      break;
    case Rule::ds: {
      Aux a;
      for (const auto& y : vt(f->args)) a.doms.emplace_back(pr.label, y);
      out.push_back(a);
      break;
    }
    default: break;
  }
  return out;
}

bool consumes(Rule r) {
  switch (r) {
    case Rule::andL:
    case Rule::orR:
    case Rule::orL:
    case Rule::andR:
    case Rule::implR:
    case Rule::exclL:
    case Rule::existsL:
    case Rule::forallR: return true;
    default: return false;
  }
}

// Labels on the far side of the edge between anchor and u, over every sequent of q.
std::set<Label> far_component(const Proof& q, const Label& anchor, const Label& u) {
  std::set<Label> comp{u};
  std::vector<const Proof*> stack{&q};
  while (!stack.empty()) {
    const Proof* n = stack.back();
    stack.pop_back();
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& r : n->concl.R) {
        bool cut_edge = (r.from == anchor && r.to == u) || (r.from == u && r.to == anchor);
        if (cut_edge) continue;
        bool a = comp.count(r.from), b = comp.count(r.to);
        if (a == b) continue;
        comp.insert(a ? r.to : r.from);
        grew = true;
      }
    }
    for (const auto& c : n->prem) stack.push_back(&c);
  }
  return comp;
}

Sequent strip(const Sequent& s, const Aux& a, const std::set<Label>& gone) {
  Sequent out;
  for (const auto& r : s.R)
    if (!gone.count(r.from) && !gone.count(r.to)) out.R.push_back(r);
  for (const auto& d : s.T)
    if (!gone.count(d.label)) out.T.push_back(d);
  for (const auto& g : s.G)
    if (!gone.count(g.label)) out.G.push_back(g);
  for (const auto& d : s.D)
    if (!gone.count(d.label)) out.D.push_back(d);
  out.normalize();
  for (const auto& [side, lf] : a.formulas)
    if (!gone.count(lf.label)) out.remove(side, lf);
  for (const auto& [l, x] : a.doms)
    if (!gone.count(l)) out.remove_dom(l, x);
  return out;
}

Proof strip_proof(const Proof& q, const Aux& a, const std::set<Label>& gone) {
  Proof out;
  out.concl = strip(q.concl, a, gone);
  out.inst = q.inst;
  for (const auto& c : q.prem) out.prem.push_back(strip_proof(c, a, gone));
  return out;
}

bool aux_unused(const Aux& a, const Use& u, const std::set<Label>& gone) {
  for (const auto& [side, lf] : a.formulas)
    if ((side == Side::Left ? u.left : u.right).count(fkey(lf))) return false;
  for (const auto& [l, x] : a.doms)
    if (u.dom.count(dkey(l, x))) return false;
  for (const auto& l : gone)
    if (u.labels.count(l)) return false;
  return true;
}

std::pair<Proof, Use> prune(const Proof& p, Variant v) {
  const RuleInstance& in = p.inst;
  Use use;
  if (p.prem.empty()) {
    switch (in.rule) {
      case Rule::ax:
        use_formula(use, Side::Left, *in.principal);
        use_formula(use, Side::Right, LFormula(in.label, in.principal->f));
        use_path(use, p.concl, in.principal->label, in.label);
        break;
      case Rule::botL: use_formula(use, Side::Left, *in.principal); break;
      case Rule::topR: use_formula(use, Side::Right, *in.principal); break;
      default: break;
    }
    return {p, use};
  }
  std::vector<std::pair<Proof, Use>> kids;
  for (const auto& c : p.prem) kids.push_back(prune(c, v));
  auto auxes = aux_of(p);
  for (std::size_t i = 0; i < kids.size() && i < auxes.size(); ++i) {
    const Aux& a = auxes[i];
    std::set<Label> gone;
    if (a.label) gone = far_component(kids[i].first, a.anchor, *a.label);
    if (!aux_unused(a, kids[i].second, gone)) continue;
    Proof q = strip_proof(kids[i].first, a, gone);
    if (consumes(in.rule)) {
      std::vector<LFormula> sigma, pi;
      (principal_side(in.rule) == Side::Left ? sigma : pi).push_back(*in.principal);
      try {
        q = weaken(q, sigma, pi, v);
      } catch (const std::exception&) {
        continue;
      }
    }
    if (!(q.concl == p.concl)) continue;
    return {std::move(q), std::move(kids[i].second)};
  }
  Proof out;
  out.concl = p.concl;
  out.inst = in;
  for (auto& [k, u] : kids) {
    merge_use(use, u);
    out.prem.push_back(std::move(k));
  }
  use_formula(use, principal_side(in.rule), *in.principal);
  switch (in.rule) {
    case Rule::implL: use_path(use, p.concl, in.principal->label, in.label); break;
    case Rule::exclR: use_path(use, p.concl, in.label, in.principal->label); break;
    case Rule::forallL:
      use_path(use, p.concl, in.principal->label, in.label);
      use_availability(use, p.concl, *in.term, in.label, v);
      break;
    case Rule::existsR: use_availability(use, p.concl, *in.term, in.principal->label, v); break;
    default: break;
  }
  return {std::move(out), std::move(use)};
}

// A proof of concl from the first premise's proof when that proof never uses the formulas the
// rule added to it.
std::optional<Proof> bypass(const Sequent& concl, const RuleInstance& in, const Proof& first, Variant v) {
  Proof shell{concl, in, {}};
  auto auxes = aux_of(shell);
  if (auxes.empty() || auxes[0].label) return std::nullopt;
  auto [q, use] = prune(first, v);
  if (!aux_unused(auxes[0], use, {})) return std::nullopt;
  Proof out = strip_proof(q, auxes[0], {});
  if (consumes(in.rule)) {
    std::vector<LFormula> sigma, pi;
    (principal_side(in.rule) == Side::Left ? sigma : pi).push_back(*in.principal);
    try {
      out = weaken(out, sigma, pi, v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (!(out.concl == concl)) return std::nullopt;
  return out;
}

}  // namespace

CandidateModel extract_model(const Branch& b, const Sequent& goal, Variant v, int depth) {
  if (!b.saturated) throw std::invalid_argument("branch is not saturated");
  const Sequent& s = b.current;
  CandidateModel cm;
  cm.depth = depth;
  Signature sig = signature_of(s);
  sig.merge(signature_of(goal));
  std::vector<Term> atoms;
  for (const auto& c : sig.constants()) atoms.push_back(Term::app(c));
  if (atoms.empty()) {
    sig.functions["c0"] = 0;
    atoms.push_back(Term::app("c0"));
  }
  std::set<std::string> vs = vars(s);
  for (const auto& x : vars(goal)) vs.insert(x);
  for (const auto& x : vs) atoms.push_back(Term::var(x));
  const std::vector<Term> terms = term_universe(atoms, sig, depth);
  std::map<std::string, int> index;
  FiniteModel& m = cm.model;
  for (const auto& t : terms) {
    index[to_string(t)] = m.nu();
    m.universe.push_back(to_string(t));
  }
  std::set<Label> ls = labels(s);
  for (const auto& l : labels(goal)) ls.insert(l);
  m.worlds.assign(ls.begin(), ls.end());
  Reach reach(s);
  const int W = m.nw(), U = m.nu();
  m.leq.assign(W, std::vector<char>(W, 0));
  for (int i = 0; i < W; ++i)
    for (int j = 0; j < W; ++j) m.leq[i][j] = i == j || reach.reachable(m.worlds[i], m.worlds[j]);
  m.dom.assign(W, std::vector<char>(U, 0));
  for (int w = 0; w < W; ++w) {
    std::set<std::string> avail;
    if (v != Variant::CD && labels(s).count(m.worlds[w])) avail = available_vars(s, m.worlds[w]);
    for (int a = 0; a < U; ++a) {
      auto ys = vt(terms[a]);
      m.dom[w][a] = v == Variant::CD || std::includes(avail.begin(), avail.end(), ys.begin(), ys.end());
    }
  }
  std::vector<std::string> notes;
  m.fun_arity = sig.functions;
  for (const auto& [f, n] : sig.functions) {
    std::vector<int> table(m.tuple_count(n), 0);
    for (int idx = 0; idx < m.tuple_count(n); ++idx) {
      auto args = m.tuple_of(idx, n);
      std::vector<Term> targs;
      for (int a : args) targs.push_back(terms[a]);
      Term t = Term::app(f, targs);
      auto it = index.find(to_string(t));
      if (it != index.end()) {
        table[idx] = it->second;
        continue;
      }
      // Beyond the truncation depth: reuse the first term with the same variables, which keeps C2.
      auto want = vt(t);
      int pick = -1;
      for (int a = 0; a < U && pick < 0; ++a)
        if (vt(terms[a]) == want) pick = a;
      if (pick < 0) {
        pick = args.empty() ? 0 : args[0];
        notes.push_back("no term with the variables of " + to_string(t) + " within depth");
      }
      table[idx] = pick;
    }
    m.fun[f] = std::move(table);
  }
  m.pred_arity = sig.predicates;
  for (const auto& [p, n] : sig.predicates)
    m.pred[p].assign(W, std::vector<char>(m.tuple_count(n), 0));
  for (const auto& g : s.G) {
    if (g.f->kind != Kind::Atom) continue;
    std::vector<int> args;
    bool inside = true;
    for (const auto& t : g.f->args) {
      auto it = index.find(to_string(t));
      if (it == index.end()) {
        inside = false;
        break;
      }
      args.push_back(it->second);
    }
    if (!inside) continue;
    int idx = m.tuple_index(args);
    for (int u = 0; u < W; ++u) {
      if (!reach.reachable(g.label, m.worlds[u])) continue;
      bool in_dom = std::all_of(args.begin(), args.end(), [&](int a) { return m.dom[u][a]; });
      if (in_dom) m.pred[g.f->name][u][idx] = 1;
    }
  }
  for (int w = 0; w < W; ++w) cm.iota[m.worlds[w]] = w;
  for (const auto& x : vs) cm.alpha[x] = index.at(x);
  ModelCheck mc = check_model(m, v == Variant::CD ? Variant::CD : Variant::ID);
  if (!mc.ok) notes.push_back("truncated model violates " + mc.violation);
  bool falsifies = mc.ok && !eval_sequent(m, cm.iota, cm.alpha, goal);
  if (mc.ok && !falsifies) notes.push_back("truncated model does not falsify the goal");
  cm.verified = mc.ok && falsifies;
  std::string note = "term universe truncated at depth " + std::to_string(depth);
  note += cm.verified ? "; verified to depth " + std::to_string(depth) : "; not verified";
  for (const auto& n : notes) note += "; " + n;
  cm.note = note;
  return cm;
}

SearchOutcome prove(const Sequent& goal, const SearchConfig& cfg) {
  Validation val = validate(goal);
  if (!val.ok) throw std::invalid_argument("invalid goal: " + val.message);
  SearchOutcome out;
  {
    auto ls = labels(goal);
    bool shaped = ls.size() == 1 && goal.R.empty() && goal.G.empty() && goal.D.size() == 1;
    if (!shaped) out.warnings.push_back("goal is not of the form w:x |- w:phi; completeness is not guaranteed");
  }
  if (cfg.intuitionistic_only && cfg.variant != Variant::ID && cfg.variant != Variant::IDNoDs)
    out.warnings.push_back("intuitionistic-only search runs under the increasing-domain rules");
  Ctx ctx{cfg, signature_of(goal), {}};
  if (ctx.cfg.intuitionistic_only) ctx.cfg.variant = Variant::IDNoDs;
  if (ctx.sig.constants().empty()) ctx.sig.functions["c0"] = 0;
  for (const auto& c : ctx.sig.constants()) ctx.constants.push_back(Term::app(c));
  State st;
  st.s = goal;
  Result r;
  if (cfg.jobs > 1) {
#pragma omp parallel num_threads(cfg.jobs)
#pragma omp single
    r = run(ctx, st, cfg.node_budget, 0);
  } else {
    r = run(ctx, st, cfg.node_budget, 0);
  }
  out.stats.nodes = r.nodes;
  out.stats.rounds = r.rounds;
  out.stats.reason = r.reason;
  out.stats.open_branches = r.status == Status::Proved ? 0 : 1;
  if (r.status == Status::Proved) {
    out.status = Status::Proved;
    Proof p = std::move(*r.proof);
    if (cfg.prune) {
      Proof q = prune(p, ctx.cfg.variant).first;
      if (check_proof(q, ctx.cfg.variant).ok) p = std::move(q);
      else out.warnings.push_back("pruned proof failed to check; returning the unpruned proof");
    }
    out.proof = std::move(p);
    return out;
  }
  out.branch = r.branch;
  if (r.status == Status::Refuted) {
    CandidateModel cm = extract_model(*r.branch, goal, ctx.cfg.variant, cfg.max_term_depth);
    if (cm.verified) {
      out.status = Status::Refuted;
    } else {
      out.status = Status::Exhausted;
      out.stats.reason = "saturated branch without a verified model";
    }
    out.model = std::move(cm);
    return out;
  }
  out.status = Status::Exhausted;
  return out;
}

std::string stats_record(const SearchOutcome& o) {
  std::ostringstream out;
  out << "status=" << status_name(o.status) << " nodes=" << o.stats.nodes << " rounds=" << o.stats.rounds
      << " open_branches=" << o.stats.open_branches;
  if (o.branch) out << " branch_applications=" << o.branch->history.size();
  if (!o.stats.reason.empty()) {
    std::string reason = o.stats.reason;
    std::replace(reason.begin(), reason.end(), ' ', '_');
    out << " reason=" << reason;
  }
  return out.str();
}

}  // namespace lbiq
