#include "lbiq/transform.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace lbiq {

namespace {

bool consumes_principal(Rule r) {
  switch (r) {
    case Rule::andL:
    case Rule::orL:
    case Rule::exclL:
    case Rule::existsL:
    case Rule::andR:
    case Rule::orR:
    case Rule::implR:
    case Rule::forallR:
      return true;
    default:
      return false;
  }
}

bool is_initial(Rule r) { return r == Rule::ax || r == Rule::botL || r == Rule::topR; }

std::vector<Sequent> premises_or_throw(const Sequent& s, const RuleInstance& in, Variant v) {
  try {
    return premises(s, in, v);
  } catch (const RuleError& e) {
    throw TransformError(e.what());
  }
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw TransformError(msg);
}

void collect_formula_vars(const Formula& f, std::set<std::string>& out) {
  auto av = all_vars(f);
  out.insert(av.begin(), av.end());
}

void collect_names(const Proof& p, std::set<Label>& ls, std::set<std::string>& vs) {
  for (const auto& l : labels(p.concl)) ls.insert(l);
  for (const auto& d : p.concl.T) vs.insert(d.var);
  for (const auto* side : {&p.concl.G, &p.concl.D})
    for (const auto& lf : *side) collect_formula_vars(lf.f, vs);
  if (!p.inst.label.empty()) ls.insert(p.inst.label);
  if (!p.inst.var.empty()) vs.insert(p.inst.var);
  if (p.inst.term) {
    auto tv = vt(*p.inst.term);
    vs.insert(tv.begin(), tv.end());
  }
  if (p.inst.principal) collect_formula_vars(p.inst.principal->f, vs);
  for (const auto& q : p.prem) collect_names(q, ls, vs);
}

Proof rename_label_proof(const Proof& p, const Label& from, const Label& to) {
  Proof out;
  out.concl = rename_label(p.concl, from, to);
  out.inst = p.inst;
  if (out.inst.label == from) out.inst.label = to;
  if (out.inst.principal && out.inst.principal->label == from)
    out.inst.principal = LFormula(to, out.inst.principal->f);
  out.prem.reserve(p.prem.size());
  for (const auto& q : p.prem) out.prem.push_back(rename_label_proof(q, from, to));
  return out;
}

Proof rename_var_proof(const Proof& p, const std::string& from, const std::string& to) {
  Proof out;
  out.concl = rename_var(p.concl, from, to);
  out.inst = p.inst;
  Term t = Term::var(to);
  if (out.inst.var == from) out.inst.var = to;
  if (out.inst.term) out.inst.term = subst(*out.inst.term, t, from);
  if (out.inst.principal) out.inst.principal = LFormula(out.inst.principal->label, subst(out.inst.principal->f, t, from));
  out.prem.reserve(p.prem.size());
  for (const auto& q : p.prem) out.prem.push_back(rename_var_proof(q, from, to));
  return out;
}

// Renames eigen-labels and eigenvariables of p that occur in the avoid sets. The replacement
// names are new to the whole proof.
Proof rename_eigen(const Proof& p, const std::set<Label>& avoid_labels, const std::set<std::string>& avoid_vars) {
  if (avoid_labels.empty() && avoid_vars.empty()) return p;
  std::set<Label> used_l = avoid_labels;
  std::set<std::string> used_v = avoid_vars;
  collect_names(p, used_l, used_v);
  std::function<Proof(const Proof&)> go = [&](const Proof& q) -> Proof {
    Proof out = q;
    if (creates_label(q.inst.rule) && avoid_labels.count(q.inst.label)) {
      Label nl = fresh_label(used_l, "u");
      used_l.insert(nl);
      for (auto& c : out.prem) c = rename_label_proof(c, q.inst.label, nl);
      out.inst.label = nl;
    }
    if (creates_var(q.inst.rule) && avoid_vars.count(q.inst.var)) {
      std::string nv = fresh_var(q.inst.var, used_v);
      used_v.insert(nv);
      for (auto& c : out.prem) c = rename_var_proof(c, q.inst.var, nv);
      out.inst.var = nv;
    }
    for (auto& c : out.prem) c = go(c);
    return out;
  };
  return go(p);
}

std::set<Label> labels_of(const std::vector<LFormula>& fs) {
  std::set<Label> out;
  for (const auto& lf : fs) out.insert(lf.label);
  return out;
}

std::set<std::string> free_vars_of(const std::vector<LFormula>& fs) {
  std::set<std::string> out;
  for (const auto& lf : fs) {
    auto fv = free_vars(lf.f);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

// Surplus domain atoms in q's conclusion relative to want are removed with (id).
Proof reconcile(Proof q, const Sequent& want, Variant v);

// Rebuilds an inference with conclusion c and instance in; sub(i, premise_i) supplies premise proofs.
Proof rebuild(const Sequent& c, const RuleInstance& in, Variant v,
              const std::function<Proof(std::size_t, const Sequent&)>& sub) {
  if (is_initial(in.rule)) {
    try {
      premises(c, in, v);
      return Proof{c, in, {}};
    } catch (const RuleError&) {
    }
    if (auto fi = find_initial(c)) return Proof{c, *fi, {}};
    throw TransformError(std::string(rule_name(in.rule)) + " leaf does not close " + to_string(c));
  }
  auto want = premises_or_throw(c, in, v);
  Proof out{c, in, {}};
  out.prem.reserve(want.size());
  for (std::size_t i = 0; i < want.size(); ++i) out.prem.push_back(reconcile(sub(i, want[i]), want[i], v));
  return out;
}

using SeqFn = std::function<Sequent(const Sequent&)>;
using InstFn = std::function<RuleInstance(const RuleInstance&)>;

Proof map_rec(const Proof& p, const SeqFn& f, const InstFn& g, Variant v) {
  Sequent c = f(p.concl);
  RuleInstance in = g ? g(p.inst) : p.inst;
  return rebuild(c, in, v, [&](std::size_t i, const Sequent&) { return map_rec(p.prem[i], f, g, v); });
}

Proof drop_atom_raw(const Proof& p, const Label& w, const Label& u, const std::string& x, Variant v) {
  const Sequent& s = p.concl;
  int need = (w == u) ? 2 : 1;
  require(s.count_dom(w, x) >= need && s.count_dom(u, x) >= 1,
          "id: domain atoms " + w + ":" + x + " and " + u + ":" + x + " not both present");
  require(reachable(s.R, w, u), "id: " + u + " not reachable from " + w);
  return map_rec(
      p,
      [&](const Sequent& q) {
        Sequent o = q;
        o.remove_dom(u, x);
        return o;
      },
      nullptr, v);
}

Proof reconcile(Proof q, const Sequent& want, Variant v) {
  if (q.concl == want) return q;
  const Sequent& got = q.concl;
  require(got.R == want.R && got.G == want.G && got.D == want.D,
          "premise mismatch: expected " + to_string(want) + " got " + to_string(got));
  std::vector<DomAtom> surplus, missing;
  std::set_difference(got.T.begin(), got.T.end(), want.T.begin(), want.T.end(), std::back_inserter(surplus));
  std::set_difference(want.T.begin(), want.T.end(), got.T.begin(), got.T.end(), std::back_inserter(missing));
  require(missing.empty(), "premise mismatch: expected " + to_string(want) + " got " + to_string(got));
  for (const auto& d : surplus) {
    std::optional<Label> witness;
    for (const auto& e : q.concl.T) {
      if (e.var != d.var) continue;
      if (e.label == d.label && q.concl.count_dom(d.label, d.var) < 2) continue;
      if (reachable(q.concl.R, e.label, d.label)) {
        witness = e.label;
        break;
      }
    }
    require(witness.has_value(), "no (id) witness for surplus domain atom " + d.label + ":" + d.var);
    q = drop_atom_raw(q, *witness, d.label, d.var, v);
  }
  require(q.concl == want, "premise mismatch after (id): expected " + to_string(want) + " got " + to_string(q.concl));
  return q;
}

// Deletes aRb and identifies a with b under the name keep (a or b).
Proof merge_edge(const Proof& p, const Label& a, const Label& b, const Label& keep, Variant v) {
  Proof m = merge(p, a, b, v);
  if (keep == a) return m;
  return rename_label_proof(m, a, b);
}

Proof contract_rec(const Proof& p, Side side, const LFormula& lf, Variant v);
Proof lower_one(const Proof& p, const Label& w, const Label& u, const Formula& phi, Variant v);
Proof lift_one(const Proof& p, const Label& u, const Label& w, const Formula& phi, Variant v);

RuleInstance make_inst(Rule r, const LFormula& principal, Label label = "", std::string var = "",
                       std::optional<Term> term = std::nullopt) {
  RuleInstance in;
  in.rule = r;
  in.principal = principal;
  in.label = std::move(label);
  in.var = std::move(var);
  in.term = std::move(term);
  return in;
}

Label fresh_label_for(const Proof& p) {
  std::set<Label> ls;
  std::set<std::string> vs;
  collect_names(p, ls, vs);
  return fresh_label(ls, "u");
}

std::string fresh_var_for(const Proof& p, const std::string& base) {
  std::set<Label> ls;
  std::set<std::string> vs;
  collect_names(p, ls, vs);
  if (!vs.count(base)) return base;
  return fresh_var(base, vs);
}

}  // namespace

std::set<Label> proof_labels(const Proof& p) {
  std::set<Label> ls;
  std::set<std::string> vs;
  collect_names(p, ls, vs);
  return ls;
}

std::set<std::string> proof_vars(const Proof& p) {
  std::set<Label> ls;
  std::set<std::string> vs;
  collect_names(p, ls, vs);
  return vs;
}

Proof map_proof(const Proof& p, const std::function<Sequent(const Sequent&)>& f, const std::set<Label>& avoid_labels,
                const std::set<std::string>& avoid_vars, Variant v) {
  Proof q = rename_eigen(p, avoid_labels, avoid_vars);
  return map_rec(q, f, nullptr, v);
}

Proof weaken(const Proof& p, const std::vector<LFormula>& sigma, const std::vector<LFormula>& pi, Variant v) {
  if (sigma.empty() && pi.empty()) return p;
  Sequent target = p.concl;
  for (const auto& lf : sigma) target.add(Side::Left, lf);
  for (const auto& lf : pi) target.add(Side::Right, lf);
  Validation val = validate(target);
  require(val.ok, "iw: result is not a polytree sequent: " + val.message);
  std::set<Label> al = labels_of(sigma);
  auto al2 = labels_of(pi);
  al.insert(al2.begin(), al2.end());
  std::set<std::string> av = free_vars_of(sigma);
  auto av2 = free_vars_of(pi);
  av.insert(av2.begin(), av2.end());
  return map_proof(
      p,
      [&](const Sequent& s) {
        Sequent o = s;
        for (const auto& lf : sigma) o.add(Side::Left, lf);
        for (const auto& lf : pi) o.add(Side::Right, lf);
        return o;
      },
      al, av, v);
}

Proof weaken_var(const Proof& p, const Label& w, const std::string& x, Variant v) {
  require(labels(p.concl).count(w) > 0 || (p.concl.R.empty() && labels(p.concl).empty()),
          "wv: unknown label " + w);
  return map_proof(
      p,
      [&](const Sequent& s) {
        Sequent o = s;
        o.add_dom(w, x);
        return o;
      },
      {w}, {x}, v);
}

Proof drop_domain_atom(const Proof& p, const Label& w, const Label& u, const std::string& x, Variant v) {
  return drop_atom_raw(p, w, u, x, v);
}

Proof drop_domain_var(const Proof& p, const Label& w, const std::string& x, Variant v) {
  require(v == Variant::CD, "cd: only admissible under CD");
  require(p.concl.count_dom(w, x) > 0, "cd: domain atom " + w + ":" + x + " not present");
  return map_rec(
      p,
      [&](const Sequent& s) {
        Sequent o = s;
        o.remove_dom(w, x);
        return o;
      },
      nullptr, v);
}

Proof subst_proof(const Proof& p, const Term& t, const std::string& x, Variant v) {
  if (t.is_var && t.name == x) return p;
  std::set<std::string> av = vt(t);
  av.insert(x);
  Proof q = rename_eigen(p, {}, av);
  return map_rec(
      q, [&](const Sequent& s) { return sequent_subst(s, t, x); },
      [&](const RuleInstance& in) {
        RuleInstance o = in;
        if (o.principal) o.principal = LFormula(o.principal->label, subst(o.principal->f, t, x));
        if (o.term) o.term = subst(*o.term, t, x);
        return o;
      },
      v);
}

Proof branch_forward(const Proof& p, const Label& w, const Label& v, const Label& u, Variant var) {
  const Sequent& s = p.concl;
  require(std::find(s.R.begin(), s.R.end(), RelAtom{w, v}) != s.R.end(), "br_f: " + w + "R" + v + " not present");
  require(reachable(s.R, w, u), "br_f: " + u + " not reachable from " + w);
  require(!reachable(s.R, u, v), "br_f: " + v + " reachable from " + u);
  require(!reachable(s.R, v, u), "br_f: " + u + " reachable from " + v);
  return map_rec(
      p,
      [&](const Sequent& q) {
        Sequent o = q;
        o.remove_rel(w, v);
        o.add_rel(u, v);
        return o;
      },
      nullptr, var);
}

Proof branch_backward(const Proof& p, const Label& v, const Label& u, const Label& w, Variant var) {
  const Sequent& s = p.concl;
  require(std::find(s.R.begin(), s.R.end(), RelAtom{v, u}) != s.R.end(), "br_b: " + v + "R" + u + " not present");
  require(reachable(s.R, w, u), "br_b: " + u + " not reachable from " + w);
  require(!reachable(s.R, w, v), "br_b: " + v + " reachable from " + w);
  return map_rec(
      p,
      [&](const Sequent& q) {
        Sequent o = q;
        o.remove_rel(v, u);
        o.add_rel(v, w);
        return o;
      },
      nullptr, var);
}

Proof merge(const Proof& p, const Label& w, const Label& u, Variant v) {
  const Sequent& s = p.concl;
  require(std::find(s.R.begin(), s.R.end(), RelAtom{w, u}) != s.R.end(), "mrg: " + w + "R" + u + " not present");
  auto rl = [&](const Label& l) { return l == u ? w : l; };
  return map_rec(
      p,
      [&](const Sequent& q) {
        Sequent o = q;
        o.remove_rel(w, u);
        return rename_label(o, u, w);
      },
      [&](const RuleInstance& in) {
        RuleInstance o = in;
        o.label = rl(o.label);
        if (o.principal) o.principal = LFormula(rl(o.principal->label), o.principal->f);
        return o;
      },
      v);
}

Proof contract(const Proof& p, Side side, const LFormula& lf, Variant v) {
  require(p.concl.count(side, lf) >= 2, "ctr: fewer than two copies of " + to_string(lf));
  return contract_rec(p, side, lf, v);
}

Proof lower(const Proof& p, const Label& w, const Label& u, const std::vector<Formula>& pi, Variant v) {
  require(reachable(p.concl.R, w, u), "lwr: " + u + " not reachable from " + w);
  Proof q = p;
  for (const auto& f : pi) q = lower_one(q, w, u, f, v);
  return q;
}

Proof lift(const Proof& p, const Label& u, const Label& w, const std::vector<Formula>& sigma, Variant v) {
  require(reachable(p.concl.R, w, u), "lft: " + u + " not reachable from " + w);
  Proof q = p;
  for (const auto& f : sigma) q = lift_one(q, u, w, f, v);
  return q;
}

Proof drop_bot_right(const Proof& p, const Label& w, Variant v) {
  LFormula b(w, mk_bot());
  require(p.concl.contains(Side::Right, b), "botR: " + to_string(b) + " not in succedent");
  return map_rec(
      p,
      [&](const Sequent& s) {
        Sequent o = s;
        o.remove(Side::Right, b);
        return o;
      },
      nullptr, v);
}

Proof drop_top_left(const Proof& p, const Label& w, Variant v) {
  LFormula t(w, mk_top());
  require(p.concl.contains(Side::Left, t), "topL: " + to_string(t) + " not in antecedent");
  return map_rec(
      p,
      [&](const Sequent& s) {
        Sequent o = s;
        o.remove(Side::Left, t);
        return o;
      },
      nullptr, v);
}

namespace {

Proof contract_rec(const Proof& p, Side side, const LFormula& lf, Variant v) {
  const RuleInstance& in = p.inst;
  Sequent c = p.concl;
  c.remove(side, lf);
  bool principal_case = consumes_principal(in.rule) && principal_side(in.rule) == side && in.principal &&
                        *in.principal == lf;
  if (!principal_case) {
    return rebuild(c, in, v, [&](std::size_t i, const Sequent&) { return contract_rec(p.prem[i], side, lf, v); });
  }
  const Label& w = lf.label;
  const Formula& f = lf.f;
  switch (in.rule) {
    case Rule::andL:
    case Rule::orR: {
      Proof q = invert(p.prem[0], in, v)[0];
      q = contract_rec(q, side, LFormula(w, f->lhs), v);
      q = contract_rec(q, side, LFormula(w, f->rhs), v);
      return rebuild(c, in, v, [&](std::size_t, const Sequent&) { return q; });
    }
    case Rule::orL:
    case Rule::andR: {
      return rebuild(c, in, v, [&](std::size_t i, const Sequent&) {
        Proof q = invert(p.prem[i], in, v)[i];
        return contract_rec(q, side, LFormula(w, i == 0 ? f->lhs : f->rhs), v);
      });
    }
    case Rule::implR: {
      const Label& u = in.label;
      Label u2 = fresh_label_for(p);
      RuleInstance again = in;
      again.label = u2;
      Proof q = invert(p.prem[0], again, v)[0];
      q = branch_forward(q, w, u2, u, v);
      q = merge(q, u, u2, v);
      q = contract_rec(q, Side::Left, LFormula(u, f->lhs), v);
      q = contract_rec(q, Side::Right, LFormula(u, f->rhs), v);
      return rebuild(c, in, v, [&](std::size_t, const Sequent&) { return q; });
    }
    case Rule::exclL: {
      const Label& u = in.label;
      Label u2 = fresh_label_for(p);
      RuleInstance again = in;
      again.label = u2;
      Proof q = invert(p.prem[0], again, v)[0];
      q = branch_backward(q, u2, w, u, v);
      q = merge_edge(q, u2, u, u, v);
      q = contract_rec(q, Side::Left, LFormula(u, f->lhs), v);
      q = contract_rec(q, Side::Right, LFormula(u, f->rhs), v);
      return rebuild(c, in, v, [&](std::size_t, const Sequent&) { return q; });
    }
    case Rule::existsL: {
      const std::string& y = in.var;
      std::string z = fresh_var_for(p, y);
      RuleInstance again = in;
      again.var = z;
      Proof q = invert(p.prem[0], again, v)[0];
      q = subst_proof(q, Term::var(y), z, v);
      q = drop_atom_raw(q, w, w, y, v);
      q = contract_rec(q, Side::Left, LFormula(w, subst(f->lhs, Term::var(y), f->name)), v);
      return rebuild(c, in, v, [&](std::size_t, const Sequent&) { return q; });
    }
    case Rule::forallR: {
      const Label& u = in.label;
      const std::string& y = in.var;
      Label u2 = fresh_label_for(p);
      std::string z = fresh_var_for(p, y);
      RuleInstance again = in;
      again.label = u2;
      again.var = z;
      Proof q = invert(p.prem[0], again, v)[0];
      q = branch_forward(q, w, u2, u, v);
      q = merge(q, u, u2, v);
      q = subst_proof(q, Term::var(y), z, v);
      q = drop_atom_raw(q, u, u, y, v);
      q = contract_rec(q, Side::Right, LFormula(u, subst(f->lhs, Term::var(y), f->name)), v);
      return rebuild(c, in, v, [&](std::size_t, const Sequent&) { return q; });
    }
    default:
      break;
  }
  throw TransformError("ctr: unexpected rule");
}

Proof lower_one(const Proof& p, const Label& w, const Label& u, const Formula& phi, Variant v) {
  if (w == u) return p;
  LFormula lf(w, phi);
  LFormula moved(u, phi);
  require(p.concl.contains(Side::Right, lf), "lwr: " + to_string(lf) + " not in succedent");
  Sequent c = p.concl;
  c.remove(Side::Right, lf);
  c.add(Side::Right, moved);
  const RuleInstance& in = p.inst;
  if (in.rule == Rule::ax && in.label == w && LFormula(w, in.principal->f) == lf) {
    RuleInstance o = in;
    o.label = u;
    return rebuild(c, o, v, nullptr);
  }
  bool principal_case =
      in.rule != Rule::ax && principal_side(in.rule) == Side::Right && in.principal && *in.principal == lf;
  if (!principal_case)
    return rebuild(c, in, v, [&](std::size_t i, const Sequent&) { return lower_one(p.prem[i], w, u, phi, v); });
  RuleInstance o = in;
  o.principal = moved;
  switch (in.rule) {
    case Rule::topR:
      return rebuild(c, o, v, nullptr);
    case Rule::orR:
      return rebuild(c, o, v, [&](std::size_t, const Sequent&) {
        return lower_one(lower_one(p.prem[0], w, u, phi->lhs, v), w, u, phi->rhs, v);
      });
    case Rule::andR:
      return rebuild(c, o, v, [&](std::size_t i, const Sequent&) {
        return lower_one(p.prem[i], w, u, i == 0 ? phi->lhs : phi->rhs, v);
      });
    case Rule::implR:
    case Rule::forallR:
      return rebuild(c, o, v,
                     [&](std::size_t, const Sequent&) { return branch_forward(p.prem[0], w, in.label, u, v); });
    case Rule::exclR:
      return rebuild(c, o, v, [&](std::size_t i, const Sequent&) { return lower_one(p.prem[i], w, u, phi, v); });
    case Rule::existsR: {
      Formula inst = subst(phi->lhs, *in.term, phi->name);
      return rebuild(c, o, v, [&](std::size_t, const Sequent&) {
        return lower_one(lower_one(p.prem[0], w, u, phi, v), w, u, inst, v);
      });
    }
    default:
      break;
  }
  throw TransformError("lwr: unexpected rule");
}

Proof lift_one(const Proof& p, const Label& u, const Label& w, const Formula& phi, Variant v) {
  if (w == u) return p;
  LFormula lf(u, phi);
  LFormula moved(w, phi);
  require(p.concl.contains(Side::Left, lf), "lft: " + to_string(lf) + " not in antecedent");
  Sequent c = p.concl;
  c.remove(Side::Left, lf);
  c.add(Side::Left, moved);
  const RuleInstance& in = p.inst;
  bool principal_case = principal_side(in.rule) == Side::Left && in.principal && *in.principal == lf;
  if (!principal_case)
    return rebuild(c, in, v, [&](std::size_t i, const Sequent&) { return lift_one(p.prem[i], u, w, phi, v); });
  RuleInstance o = in;
  o.principal = moved;
  switch (in.rule) {
    case Rule::ax:
    case Rule::botL:
      return rebuild(c, o, v, nullptr);
    case Rule::ds:
      return rebuild(c, o, v, [&](std::size_t, const Sequent&) {
        Proof q = lift_one(p.prem[0], u, w, phi, v);
        for (const auto& x : vt(phi->args)) {
          q = weaken_var(q, w, x, v);
          q = drop_atom_raw(q, w, u, x, v);
        }
        return q;
      });
    case Rule::andL:
      return rebuild(c, o, v, [&](std::size_t, const Sequent&) {
        return lift_one(lift_one(p.prem[0], u, w, phi->lhs, v), u, w, phi->rhs, v);
      });
    case Rule::orL:
      return rebuild(c, o, v, [&](std::size_t i, const Sequent&) {
        return lift_one(p.prem[i], u, w, i == 0 ? phi->lhs : phi->rhs, v);
      });
    case Rule::implL:
    case Rule::forallL:
      return rebuild(c, o, v, [&](std::size_t i, const Sequent&) { return lift_one(p.prem[i], u, w, phi, v); });
    case Rule::exclL:
      return rebuild(c, o, v,
                     [&](std::size_t, const Sequent&) { return branch_backward(p.prem[0], in.label, u, w, v); });
    case Rule::existsL:
      return rebuild(c, o, v, [&](std::size_t, const Sequent&) {
        Proof q = weaken_var(p.prem[0], w, in.var, v);
        q = drop_atom_raw(q, w, u, in.var, v);
        return lift_one(q, u, w, subst(phi->lhs, Term::var(in.var), phi->name), v);
      });
    default:
      break;
  }
  throw TransformError("lft: unexpected rule");
}

std::vector<Proof> invert_rec(const Proof& p, const RuleInstance& inst, Variant v) {
  auto targets = premises_or_throw(p.concl, inst, v);
  const RuleInstance& in = p.inst;
  if (in.rule == inst.rule && in.principal && *in.principal == *inst.principal) {
    std::vector<Proof> out = p.prem;
    if (creates_label(inst.rule) && in.label != inst.label)
      for (auto& q : out) q = rename_label_proof(q, in.label, inst.label);
    if (creates_var(inst.rule) && in.var != inst.var)
      for (auto& q : out) q = rename_var_proof(q, in.var, inst.var);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = reconcile(out[k], targets[k], v);
    return out;
  }
  std::vector<std::vector<Proof>> sub(p.prem.size());
  for (std::size_t j = 0; j < p.prem.size(); ++j) sub[j] = invert_rec(p.prem[j], inst, v);
  std::vector<Proof> out;
  out.reserve(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k)
    out.push_back(rebuild(targets[k], in, v, [&](std::size_t j, const Sequent&) { return sub[j][k]; }));
  return out;
}

}  // namespace

std::vector<Proof> invert(const Proof& p, const RuleInstance& inst, Variant v) {
  auto targets = premises_or_throw(p.concl, inst, v);
  const Formula& f = inst.principal->f;
  switch (inst.rule) {
    case Rule::ax:
    case Rule::botL:
    case Rule::topR:
    case Rule::cut:
      throw TransformError(std::string(rule_name(inst.rule)) + " is not invertible");
    case Rule::ds: {
      Proof q = p;
      for (const auto& x : vt(f->args)) q = weaken_var(q, inst.principal->label, x, v);
      return {reconcile(q, targets[0], v)};
    }
    case Rule::implL:
    case Rule::exclR:
      return {weaken(p, {}, {LFormula(inst.label, f->lhs)}, v), weaken(p, {LFormula(inst.label, f->rhs)}, {}, v)};
    case Rule::existsR:
      return {weaken(p, {}, {LFormula(inst.principal->label, subst(f->lhs, *inst.term, f->name))}, v)};
    case Rule::forallL:
      return {weaken(p, {LFormula(inst.label, subst(f->lhs, *inst.term, f->name))}, {}, v)};
    default:
      break;
  }
  std::set<Label> al;
  std::set<std::string> av;
  if (creates_label(inst.rule)) al.insert(inst.label);
  if (creates_var(inst.rule)) av.insert(inst.var);
  Proof q = rename_eigen(p, al, av);
  return invert_rec(q, inst, v);
}

Proof derive_gax(const Sequent& s, const LFormula& left, const Label& u, Variant v) {
  const Label& w = left.label;
  const Formula& f = left.f;
  LFormula right(u, f);
  require(s.contains(Side::Left, left), "gax: " + to_string(left) + " not in antecedent");
  require(s.contains(Side::Right, right), "gax: " + to_string(right) + " not in succedent");
  require(reachable(s.R, w, u), "gax: " + u + " not reachable from " + w);
  auto one = [&](const RuleInstance& in, const std::function<Proof(std::size_t, const Sequent&)>& sub) {
    return rebuild(s, in, v, sub);
  };
  switch (f->kind) {
    case Kind::Atom: {
      RuleInstance in = make_inst(Rule::ax, left, u);
      return Proof{s, in, {}};
    }
    case Kind::Bot:
      return Proof{s, make_inst(Rule::botL, left), {}};
    case Kind::Top:
      return Proof{s, make_inst(Rule::topR, right), {}};
    case Kind::And:
      return one(make_inst(Rule::andL, left), [&](std::size_t, const Sequent& s1) {
        return rebuild(s1, make_inst(Rule::andR, right), v, [&](std::size_t i, const Sequent& s2) {
          return derive_gax(s2, LFormula(w, i == 0 ? f->lhs : f->rhs), u, v);
        });
      });
    case Kind::Or:
      return one(make_inst(Rule::orL, left), [&](std::size_t i, const Sequent& s1) {
        return rebuild(s1, make_inst(Rule::orR, right), v, [&](std::size_t, const Sequent& s2) {
          return derive_gax(s2, LFormula(w, i == 0 ? f->lhs : f->rhs), u, v);
        });
      });
    case Kind::Impl: {
      Label x = fresh_label(labels(s), "u");
      return one(make_inst(Rule::implR, right, x), [&](std::size_t, const Sequent& s1) {
        return rebuild(s1, make_inst(Rule::implL, left, x), v, [&](std::size_t i, const Sequent& s2) {
          return derive_gax(s2, LFormula(x, i == 0 ? f->lhs : f->rhs), x, v);
        });
      });
    }
    case Kind::Excl: {
      Label x = fresh_label(labels(s), "u");
      return one(make_inst(Rule::exclL, left, x), [&](std::size_t, const Sequent& s1) {
        return rebuild(s1, make_inst(Rule::exclR, right, x), v, [&](std::size_t i, const Sequent& s2) {
          return derive_gax(s2, LFormula(x, i == 0 ? f->lhs : f->rhs), x, v);
        });
      });
    }
    case Kind::Exists: {
      std::string y = fresh_variable(s, f->name);
      Formula body = subst(f->lhs, Term::var(y), f->name);
      return one(make_inst(Rule::existsL, left, "", y), [&](std::size_t, const Sequent& s1) {
        return rebuild(s1, make_inst(Rule::existsR, right, "", "", Term::var(y)), v,
                       [&](std::size_t, const Sequent& s2) { return derive_gax(s2, LFormula(w, body), u, v); });
      });
    }
    case Kind::Forall: {
      Label x = fresh_label(labels(s), "u");
      std::string y = fresh_variable(s, f->name);
      Formula body = subst(f->lhs, Term::var(y), f->name);
      return one(make_inst(Rule::forallR, right, x, y), [&](std::size_t, const Sequent& s1) {
        return rebuild(s1, make_inst(Rule::forallL, left, x, "", Term::var(y)), v,
                       [&](std::size_t, const Sequent& s2) { return derive_gax(s2, LFormula(x, body), x, v); });
      });
    }
  }
  throw TransformError("gax: unknown formula kind");
}

namespace {

using Measure = std::pair<int, int>;

struct CutEngine {
  Variant v;
  CutStats* stats;

  Proof sub(const Measure& parent, const Proof& l, const Proof& r, const LFormula& cut, const Label& u) {
    Measure m{complexity(cut.f), l.height() + r.height()};
    if (stats) stats->measure_checks++;
    if (!(m < parent))
      throw TransformError("cut measure did not decrease: (" + std::to_string(m.first) + "," +
                           std::to_string(m.second) + ") vs (" + std::to_string(parent.first) + "," +
                           std::to_string(parent.second) + ")");
    return run(l, r, cut, u);
  }

  // Removes the domain atoms that subst added at label at, given the reference context s.
  Proof drop_added_atoms(Proof q, const Sequent& s, const Label& at) {
    std::vector<DomAtom> extra;
    std::set_difference(q.concl.T.begin(), q.concl.T.end(), s.T.begin(), s.T.end(), std::back_inserter(extra));
    for (const auto& d : extra) {
      std::optional<Label> witness;
      for (const auto& e : s.T)
        if (e.var == d.var && reachable(s.R, e.label, d.label)) {
          witness = e.label;
          break;
        }
      if (witness) {
        q = drop_domain_atom(q, *witness, d.label, d.var, v);
      } else {
        require(v == Variant::CD, "cut: instantiation term not available at " + at);
        q = drop_domain_var(q, d.label, d.var, v);
      }
    }
    return q;
  }

  Proof run(const Proof& L, const Proof& Rp, const LFormula& cut, const Label& u) {
    if (stats) {
      stats->calls++;
      stats->max_complexity = std::max<std::size_t>(stats->max_complexity, complexity(cut.f));
    }
    Sequent S = L.concl;
    require(S.remove(Side::Right, cut), "cut: left proof does not end in " + to_string(cut) + " on the right");
    LFormula ucut(u, cut.f);
    {
      Sequent want = S;
      want.add(Side::Left, ucut);
      require(want == Rp.concl, "cut: right proof does not match the left context: " + to_string(Rp.concl));
    }
    require(reachable(S.R, cut.label, u), "cut: " + u + " not reachable from " + cut.label);
    if (auto fi = find_initial(S)) return Proof{S, *fi, {}};

    const Measure here{complexity(cut.f), L.height() + Rp.height()};
    const RuleInstance& r1 = L.inst;
    const Label& w = cut.label;

    bool r1_on_cut = false;
    if (r1.rule == Rule::ax) r1_on_cut = true;  // S has no initial instance, so ax used the cut formula
    else if (r1.rule == Rule::topR) r1_on_cut = true;
    else if (principal_side(r1.rule) == Side::Right && *r1.principal == cut && !S.contains(Side::Right, cut))
      r1_on_cut = true;

    if (!r1_on_cut) {
      // r1 acts on the context: invert the right proof and cut premise-wise.
      auto inv = invert(Rp, r1, v);
      return rebuild(S, r1, v, [&](std::size_t i, const Sequent&) { return sub(here, L.prem[i], inv[i], cut, u); });
    }

    const Formula& f = cut.f;
    switch (r1.rule) {
      case Rule::ax: {
        const LFormula& atom = *r1.principal;
        Proof q = lift(Rp, u, atom.label, {f}, v);
        return contract(q, Side::Left, atom, v);
      }
      case Rule::topR:
        return drop_top_left(Rp, u, v);
      case Rule::andR: {
        auto inv = invert(Rp, make_inst(Rule::andL, ucut), v)[0];
        Proof a = weaken(L.prem[0], {LFormula(u, f->rhs)}, {}, v);
        Proof q = sub(here, a, inv, LFormula(w, f->lhs), u);
        return sub(here, L.prem[1], q, LFormula(w, f->rhs), u);
      }
      case Rule::orR: {
        auto inv = invert(Rp, make_inst(Rule::orL, ucut), v);
        Proof b = weaken(inv[1], {}, {LFormula(w, f->lhs)}, v);
        Proof q = sub(here, L.prem[0], b, LFormula(w, f->rhs), u);
        return sub(here, q, inv[0], LFormula(w, f->lhs), u);
      }
      default:
        break;
    }

    const RuleInstance& r2 = Rp.inst;
    bool r2_on_cut = !is_initial(r2.rule) && principal_side(r2.rule) == Side::Left && r2.principal &&
                     *r2.principal == ucut && !S.contains(Side::Left, ucut);
    if (!r2_on_cut) {
      require(!is_initial(r2.rule), "cut: right proof closes only through the cut formula");
      auto inv = invert(L, r2, v);
      return rebuild(S, r2, v, [&](std::size_t j, const Sequent&) { return sub(here, inv[j], Rp.prem[j], cut, u); });
    }

    switch (r1.rule) {
      case Rule::implR: {
        const Label& v0 = r1.label;
        const Label& v1 = r2.label;
        Proof pi0 = sub(here, weaken(L, {}, {LFormula(v1, f->lhs)}, v), Rp.prem[0], cut, u);
        Proof pi1 = sub(here, weaken(L, {LFormula(v1, f->rhs)}, {}, v), Rp.prem[1], cut, u);
        pi1 = weaken(pi1, {LFormula(v1, f->lhs)}, {}, v);
        Proof m = L.prem[0];
        if (v1 != w) m = branch_forward(m, w, v0, v1, v);
        m = merge_edge(m, v1, v0, v1, v);
        Proof q = sub(here, m, pi1, LFormula(v1, f->rhs), v1);
        return sub(here, pi0, q, LFormula(v1, f->lhs), v1);
      }
      case Rule::exclR: {
        const Label& v0 = r1.label;
        const Label& v1 = r2.label;
        Proof pi0 = sub(here, L.prem[0], weaken(Rp, {}, {LFormula(v0, f->lhs)}, v), cut, u);
        Proof pi1 = sub(here, L.prem[1], weaken(Rp, {LFormula(v0, f->rhs)}, {}, v), cut, u);
        pi1 = weaken(pi1, {LFormula(v0, f->lhs)}, {}, v);
        Proof m = Rp.prem[0];
        if (v0 != u) m = branch_backward(m, v1, u, v0, v);
        m = merge_edge(m, v1, v0, v0, v);
        Proof q = sub(here, m, pi1, LFormula(v0, f->rhs), v0);
        return sub(here, pi0, q, LFormula(v0, f->lhs), v0);
      }
      case Rule::existsR: {
        const Term& t = *r1.term;
        LFormula inst(w, subst(f->lhs, t, f->name));
        Proof pi = sub(here, L.prem[0], weaken(Rp, {}, {inst}, v), cut, u);
        Proof m = subst_proof(Rp.prem[0], t, r2.var, v);
        m = drop_added_atoms(m, S, u);
        return sub(here, pi, m, inst, u);
      }
      case Rule::forallR: {
        const Label& v0 = r1.label;
        const std::string& y = r1.var;
        const Label& v1 = r2.label;
        const Term& t = *r2.term;
        LFormula inst(v1, subst(f->lhs, t, f->name));
        Proof pi = sub(here, weaken(L, {inst}, {}, v), Rp.prem[0], cut, u);
        Proof m = L.prem[0];
        if (v1 != w) m = branch_forward(m, w, v0, v1, v);
        m = merge_edge(m, v1, v0, v1, v);
        m = subst_proof(m, t, y, v);
        m = drop_added_atoms(m, S, v1);
        return sub(here, m, pi, inst, v1);
      }
      default:
        break;
    }
    throw TransformError(std::string("cut: unhandled principal case ") + rule_name(r1.rule) + "/" +
                         rule_name(r2.rule));
  }
};

}  // namespace

Proof eliminate_cut(const Proof& left, const Proof& right, const LFormula& cut, const Label& u, Variant v,
                    CutStats* stats) {
  require(!has_cut(left) && !has_cut(right), "cut: premises must be cut-free");
  CutEngine e{v, stats};
  return e.run(left, right, cut, u);
}

Proof eliminate_all_cuts(const Proof& p, Variant v, CutStats* stats) {
  if (!has_cut(p)) return p;
  std::vector<Proof> prem;
  prem.reserve(p.prem.size());
  for (const auto& q : p.prem) prem.push_back(eliminate_all_cuts(q, v, stats));
  if (p.inst.rule == Rule::cut) return eliminate_cut(prem[0], prem[1], *p.inst.principal, p.inst.label, v, stats);
  return Proof{p.concl, p.inst, std::move(prem)};
}

}  // namespace lbiq
