#include "lbiq/calculus.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "lbiq/lexer.hpp"

namespace lbiq {

namespace {

constexpr const char* kRuleNames[] = {"ax",     "botL",   "topR",    "ds",      "andL",    "andR",
                                      "orL",    "orR",    "implL",   "implR",   "exclL",   "exclR",
                                      "existsL", "existsR", "forallL", "forallR", "cut"};

}  // namespace

const char* rule_name(Rule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<Rule> rule_from_name(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Rule::cut); ++i)
    if (s == kRuleNames[i]) return static_cast<Rule>(i);
  return std::nullopt;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::ID: return "id";
    case Variant::CD: return "cd";
    case Variant::IDNoDs: return "id-no-ds";
  }
  return "?";
}

std::optional<Variant> variant_from_name(std::string_view s) {
  if (s == "id") return Variant::ID;
  if (s == "cd") return Variant::CD;
  if (s == "id-no-ds") return Variant::IDNoDs;
  return std::nullopt;
}

Side principal_side(Rule r) {
  switch (r) {
    case Rule::ax:
    case Rule::botL:
    case Rule::ds:
    case Rule::andL:
    case Rule::orL:
    case Rule::implL:
    case Rule::exclL:
    case Rule::existsL:
    case Rule::forallL: return Side::Left;
    default: return Side::Right;
  }
}

int arity(Rule r) {
  switch (r) {
    case Rule::ax:
    case Rule::botL:
    case Rule::topR: return 0;
    case Rule::andR:
    case Rule::orL:
    case Rule::implL:
    case Rule::exclR:
    case Rule::cut: return 2;
    default: return 1;
  }
}

bool creates_label(Rule r) { return r == Rule::implR || r == Rule::exclL || r == Rule::forallR; }
bool creates_var(Rule r) { return r == Rule::existsL || r == Rule::forallR; }

std::string to_string(const RuleInstance& r) {
  std::string out = rule_name(r.rule);
  if (r.principal) out += " " + to_string(*r.principal);
  if (!r.label.empty()) out += " label=" + r.label;
  if (!r.var.empty()) out += " var=" + r.var;
  if (r.term) out += " term=" + to_string(*r.term);
  return out;
}

int Proof::height() const {
  int h = 0;
  for (const auto& p : prem) h = std::max(h, p.height());
  return h + 1;
}

std::size_t Proof::size() const {
  std::size_t n = 1;
  for (const auto& p : prem) n += p.size();
  return n;
}

bool has_cut(const Proof& p) {
  if (p.inst.rule == Rule::cut) return true;
  return std::any_of(p.prem.begin(), p.prem.end(), [](const Proof& q) { return has_cut(q); });
}

std::map<std::string, int> rule_counts(const Proof& p) {
  std::map<std::string, int> out;
  std::vector<const Proof*> stack{&p};
  while (!stack.empty()) {
    const Proof* q = stack.back();
    stack.pop_back();
    out[rule_name(q->inst.rule)]++;
    for (const auto& c : q->prem) stack.push_back(&c);
  }
  return out;
}

namespace {

const LFormula& principal_of(const Sequent& s, const RuleInstance& in, Kind want) {
  if (!in.principal) throw RuleError(std::string(rule_name(in.rule)) + ": missing principal");
  const LFormula& p = *in.principal;
  Side side = principal_side(in.rule);
  if (!s.contains(side, p))
    throw RuleError(std::string(rule_name(in.rule)) + ": principal " + to_string(p) + " not in " +
                    (side == Side::Left ? "antecedent" : "succedent"));
  if (p.f->kind != want)
    throw RuleError(std::string(rule_name(in.rule)) + ": principal " + to_string(p) + " has the wrong shape");
  return p;
}

void need_label(const RuleInstance& in) {
  if (in.label.empty()) throw RuleError(std::string(rule_name(in.rule)) + ": missing label witness");
}

void need_fresh_label(const Sequent& s, const RuleInstance& in) {
  need_label(in);
  if (labels(s).count(in.label))
    throw RuleError(std::string(rule_name(in.rule)) + ": label " + in.label + " is not fresh");
  if (in.label == "R" || in.label == "T")
    throw RuleError(std::string(rule_name(in.rule)) + ": reserved label name " + in.label);
}

void need_fresh_var(const Sequent& s, const RuleInstance& in) {
  if (in.var.empty()) throw RuleError(std::string(rule_name(in.rule)) + ": missing variable witness");
  if (vars(s).count(in.var))
    throw RuleError(std::string(rule_name(in.rule)) + ": variable " + in.var + " is not fresh");
}

void need_reach(const Sequent& s, const Label& w, const Label& u, Rule r) {
  if (!labels(s).count(u)) throw RuleError(std::string(rule_name(r)) + ": unknown label " + u);
  if (!reachable(s.R, w, u))
    throw RuleError(std::string(rule_name(r)) + ": reachability violated, " + u + " not reachable from " + w);
}

void need_available(const Sequent& s, const Term& t, const Label& w, Variant v, Rule r) {
  if (v == Variant::CD) return;
  if (!is_available(t, s, w))
    throw RuleError(std::string(rule_name(r)) + ": availability violated, " + to_string(t) +
                    " is not available at " + w);
}

}  // namespace

std::vector<Sequent> premises(const Sequent& s, const RuleInstance& in, Variant v) {
  const std::string rn = rule_name(in.rule);
  switch (in.rule) {
    case Rule::ax: {
      const LFormula& p = principal_of(s, in, Kind::Atom);
      need_label(in);
      LFormula other(in.label, p.f);
      if (!s.contains(Side::Right, other)) throw RuleError("ax: " + to_string(other) + " not in succedent");
      need_reach(s, p.label, in.label, in.rule);
      return {};
    }
    case Rule::botL:
      principal_of(s, in, Kind::Bot);
      return {};
    case Rule::topR:
      principal_of(s, in, Kind::Top);
      return {};
    case Rule::ds: {
      if (v != Variant::ID) throw RuleError(std::string("ds illegal in variant ") + variant_name(v));
      const LFormula& p = principal_of(s, in, Kind::Atom);
      Sequent out = s;
      for (const auto& y : vt(p.f->args)) out.add_dom(p.label, y);
      return {out};
    }
    case Rule::andL:
    case Rule::orR: {
      Kind k = in.rule == Rule::andL ? Kind::And : Kind::Or;
      Side sd = principal_side(in.rule);
      const LFormula p = principal_of(s, in, k);
      Sequent out = s;
      out.remove(sd, p);
      out.add(sd, LFormula(p.label, p.f->lhs));
      out.add(sd, LFormula(p.label, p.f->rhs));
      return {out};
    }
    case Rule::orL:
    case Rule::andR: {
      Kind k = in.rule == Rule::orL ? Kind::Or : Kind::And;
      Side sd = principal_side(in.rule);
      const LFormula p = principal_of(s, in, k);
      Sequent a = s, b = s;
      a.remove(sd, p);
      b.remove(sd, p);
      a.add(sd, LFormula(p.label, p.f->lhs));
      b.add(sd, LFormula(p.label, p.f->rhs));
      return {a, b};
    }
    case Rule::implL: {
      const LFormula& p = principal_of(s, in, Kind::Impl);
      need_label(in);
      need_reach(s, p.label, in.label, in.rule);
      Sequent a = s, b = s;
      a.add(Side::Right, LFormula(in.label, p.f->lhs));
      b.add(Side::Left, LFormula(in.label, p.f->rhs));
      return {a, b};
    }
    case Rule::exclR: {
      const LFormula& p = principal_of(s, in, Kind::Excl);
      need_label(in);
      need_reach(s, in.label, p.label, in.rule);
      Sequent a = s, b = s;
      a.add(Side::Right, LFormula(in.label, p.f->lhs));
      b.add(Side::Left, LFormula(in.label, p.f->rhs));
      return {a, b};
    }
    case Rule::implR:
    case Rule::exclL: {
      bool impl = in.rule == Rule::implR;
      const LFormula p = principal_of(s, in, impl ? Kind::Impl : Kind::Excl);
      need_fresh_label(s, in);
      Sequent out = s;
      out.remove(impl ? Side::Right : Side::Left, p);
      if (impl) out.add_rel(p.label, in.label);
      else out.add_rel(in.label, p.label);
      out.add(Side::Left, LFormula(in.label, p.f->lhs));
      out.add(Side::Right, LFormula(in.label, p.f->rhs));
      return {out};
    }
    case Rule::existsL: {
      const LFormula p = principal_of(s, in, Kind::Exists);
      need_fresh_var(s, in);
      Sequent out = s;
      out.remove(Side::Left, p);
      out.add_dom(p.label, in.var);
      out.add(Side::Left, LFormula(p.label, subst(p.f->lhs, Term::var(in.var), p.f->name)));
      return {out};
    }
    case Rule::existsR: {
      const LFormula& p = principal_of(s, in, Kind::Exists);
      if (!in.term) throw RuleError("existsR: missing term witness");
      need_available(s, *in.term, p.label, v, in.rule);
      Sequent out = s;
      out.add(Side::Right, LFormula(p.label, subst(p.f->lhs, *in.term, p.f->name)));
      return {out};
    }
    case Rule::forallL: {
      const LFormula& p = principal_of(s, in, Kind::Forall);
      need_label(in);
      if (!in.term) throw RuleError("forallL: missing term witness");
      need_reach(s, p.label, in.label, in.rule);
      need_available(s, *in.term, in.label, v, in.rule);
      Sequent out = s;
      out.add(Side::Left, LFormula(in.label, subst(p.f->lhs, *in.term, p.f->name)));
      return {out};
    }
    case Rule::forallR: {
      const LFormula p = principal_of(s, in, Kind::Forall);
      need_fresh_label(s, in);
      need_fresh_var(s, in);
      Sequent out = s;
      out.remove(Side::Right, p);
      out.add_rel(p.label, in.label);
      out.add_dom(in.label, in.var);
      out.add(Side::Right, LFormula(in.label, subst(p.f->lhs, Term::var(in.var), p.f->name)));
      return {out};
    }
    case Rule::cut: {
      if (!in.principal) throw RuleError("cut: missing cut formula");
      const LFormula& p = *in.principal;
      need_label(in);
      if (!labels(s).count(p.label)) throw RuleError("cut: unknown label " + p.label);
      need_reach(s, p.label, in.label, in.rule);
      Sequent a = s, b = s;
      a.add(Side::Right, p);
      b.add(Side::Left, LFormula(in.label, p.f));
      return {a, b};
    }
  }
  throw RuleError("unknown rule");
}

namespace {

CheckResult check_at(const Proof& p, Variant v, bool allow_cut, const std::string& path) {
  Validation val = validate(p.concl);
  if (!val.ok) return {false, path, "invalid sequent: " + val.message};
  if (p.inst.rule == Rule::cut && !allow_cut) return {false, path, "cut node in a cut-free check"};
  if (static_cast<int>(p.prem.size()) != arity(p.inst.rule))
    return {false, path, std::string(rule_name(p.inst.rule)) + ": expected " + std::to_string(arity(p.inst.rule)) +
                             " premises, got " + std::to_string(p.prem.size())};
  std::vector<Sequent> want;
  try {
    want = premises(p.concl, p.inst, v);
  } catch (const RuleError& e) {
    return {false, path, e.what()};
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (!(want[i] == p.prem[i].concl))
      return {false, path,
              std::string(rule_name(p.inst.rule)) + ": premise " + std::to_string(i) + " mismatch: expected " +
                  to_string(want[i]) + " got " + to_string(p.prem[i].concl)};
  }
  for (std::size_t i = 0; i < p.prem.size(); ++i) {
    CheckResult r = check_at(p.prem[i], v, allow_cut, path + "/" + std::to_string(i));
    if (!r.ok) return r;
  }
  return {};
}

}  // namespace

CheckResult check_proof(const Proof& p, Variant v, bool allow_cut) {
  CheckResult r = check_at(p, v, allow_cut, "root");
  return r;
}

std::optional<RuleInstance> find_initial(const Sequent& s) {
  for (const auto& g : s.G)
    if (g.f->kind == Kind::Bot) return RuleInstance{Rule::botL, g, "", "", std::nullopt};
  for (const auto& d : s.D)
    if (d.f->kind == Kind::Top) return RuleInstance{Rule::topR, d, "", "", std::nullopt};
  if (s.G.empty() || s.D.empty()) return std::nullopt;
  Reach reach(s);
  for (const auto& g : s.G) {
    if (g.f->kind != Kind::Atom) continue;
    for (const auto& d : s.D)
      if (d.f->kind == Kind::Atom && d.key == g.key && reach.reachable(g.label, d.label))
        return RuleInstance{Rule::ax, g, d.label, "", std::nullopt};
  }
  return std::nullopt;
}

std::vector<RuleInstance> applicable(const Sequent& s, Variant v) {
  std::vector<RuleInstance> out;
  Reach reach(s);
  std::set<Label> ls = labels(s);
  Label fresh = fresh_label(ls);
  auto distinct = [](const std::vector<LFormula>& xs) {
    std::vector<LFormula> u;
    for (const auto& x : xs)
      if (u.empty() || !(u.back() == x)) u.push_back(x);
    return u;
  };
  auto G = distinct(s.G), D = distinct(s.D);
  for (const auto& g : G)
    if (g.f->kind == Kind::Atom)
      for (const auto& d : D)
        if (d.f->kind == Kind::Atom && d.key == g.key && reach.reachable(g.label, d.label))
          out.push_back({Rule::ax, g, d.label, "", std::nullopt});
  for (const auto& g : G)
    if (g.f->kind == Kind::Bot) out.push_back({Rule::botL, g, "", "", std::nullopt});
  for (const auto& d : D)
    if (d.f->kind == Kind::Top) out.push_back({Rule::topR, d, "", "", std::nullopt});
  for (const auto& g : G) {
    switch (g.f->kind) {
      case Kind::Atom:
        if (v == Variant::ID) out.push_back({Rule::ds, g, "", "", std::nullopt});
        break;
      case Kind::And: out.push_back({Rule::andL, g, "", "", std::nullopt}); break;
      case Kind::Or: out.push_back({Rule::orL, g, "", "", std::nullopt}); break;
      case Kind::Impl:
        for (const auto& u : reach.from(g.label)) out.push_back({Rule::implL, g, u, "", std::nullopt});
        break;
      case Kind::Excl: out.push_back({Rule::exclL, g, fresh, "", std::nullopt}); break;
      case Kind::Exists:
        out.push_back({Rule::existsL, g, "", fresh_variable(s, g.f->name), std::nullopt});
        break;
      case Kind::Forall:
        for (const auto& u : reach.from(g.label)) out.push_back({Rule::forallL, g, u, "", std::nullopt});
        break;
      default: break;
    }
  }
  for (const auto& d : D) {
    switch (d.f->kind) {
      case Kind::And: out.push_back({Rule::andR, d, "", "", std::nullopt}); break;
      case Kind::Or: out.push_back({Rule::orR, d, "", "", std::nullopt}); break;
      case Kind::Impl: out.push_back({Rule::implR, d, fresh, "", std::nullopt}); break;
      case Kind::Excl:
        for (const auto& w : reach.to(d.label)) out.push_back({Rule::exclR, d, w, "", std::nullopt});
        break;
      case Kind::Exists: out.push_back({Rule::existsR, d, "", "", std::nullopt}); break;
      case Kind::Forall:
        out.push_back({Rule::forallR, d, fresh, fresh_variable(s, d.f->name), std::nullopt});
        break;
      default: break;
    }
  }
  return out;
}

namespace {

std::string signature_line(const Signature& sig) {
  std::string out = "signature:";
  bool first = true;
  for (const auto& [n, a] : sig.functions) out += (first ? " " : ", ") + n + "/" + std::to_string(a), first = false;
  out += " ;";
  first = true;
  for (const auto& [n, a] : sig.predicates) out += (first ? " " : ", ") + n + "/" + std::to_string(a), first = false;
  return out;
}

void parse_signature_line(std::string_view line, Signature& sig) {
  std::string body(line.substr(line.find(':') + 1));
  std::size_t semi = body.find(';');
  auto read = [&](const std::string& part, std::map<std::string, int>& into) {
    std::stringstream ss(part);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (item.empty()) continue;
      std::size_t slash = item.find('/');
      if (slash == std::string::npos) throw ParseError("bad signature entry '" + item + "'", 0);
      into[item.substr(0, slash)] = std::stoi(item.substr(slash + 1));
    }
  };
  read(body.substr(0, semi), sig.functions);
  if (semi != std::string::npos) read(body.substr(semi + 1), sig.predicates);
}

void serialize_into(const Proof& p, int depth, std::string& out) {
  out += std::to_string(depth) + " " + rule_name(p.inst.rule);
  if (p.prem.empty()) out += " leaf";
  out += " ; principal=";
  out += p.inst.principal ? to_string(*p.inst.principal) : "-";
  out += " ; witnesses=";
  std::string w;
  if (!p.inst.label.empty()) w += "label=" + p.inst.label;
  if (!p.inst.var.empty()) w += (w.empty() ? "" : " ") + std::string("var=") + p.inst.var;
  if (p.inst.term) w += (w.empty() ? "" : " ") + std::string("term=") + to_string(*p.inst.term);
  out += w.empty() ? "-" : w;
  out += " ; sequent=" + to_string(p.concl) + "\n";
  for (const auto& c : p.prem) serialize_into(c, depth + 1, out);
}

LFormula parse_lformula(std::string_view text, Signature& sig) {
  Lexer lx(text);
  FormulaParser fp(lx, sig, true);
  Label l = lx.expect(Tok::Ident, "label").text;
  lx.expect(Tok::Colon, "':'");
  Formula f = fp.formula();
  if (!lx.at_end()) throw ParseError("trailing input in principal", lx.pos());
  return LFormula(l, f);
}

}  // namespace

std::string serialize(const Proof& p, const Signature& sig) {
  std::string out = signature_line(sig) + "\n";
  serialize_into(p, 0, out);
  return out;
}

std::string serialize(const Proof& p) {
  Signature sig;
  std::vector<const Proof*> stack{&p};
  while (!stack.empty()) {
    const Proof* q = stack.back();
    stack.pop_back();
    sig.merge(signature_of(q->concl));
    if (q->inst.term) {
      // Constants used only as witnesses still need declaring.
      std::vector<const Term*> ts{&*q->inst.term};
      while (!ts.empty()) {
        const Term* t = ts.back();
        ts.pop_back();
        if (!t->is_var) sig.functions[t->name] = static_cast<int>(t->args.size());
        for (const auto& a : t->args) ts.push_back(&a);
      }
    }
    for (const auto& c : q->prem) stack.push_back(&c);
  }
  return serialize(p, sig);
}

Proof parse_proof(std::string_view text, Signature& sig) {
  std::vector<std::pair<int, Proof>> nodes;
  std::size_t start = 0, lineno = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (line.empty() || line[0] == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto fail = [&](const std::string& m) { return ParseError("line " + std::to_string(lineno) + ": " + m, 0); };
    if (line.rfind("signature:", 0) == 0) {
      parse_signature_line(line, sig);
      continue;
    }
    std::size_t a = line.find(" ; principal=");
    std::size_t b = line.find(" ; witnesses=", a == std::string_view::npos ? 0 : a);
    std::size_t c = line.find(" ; sequent=", b == std::string_view::npos ? 0 : b);
    if (a == std::string_view::npos || b == std::string_view::npos || c == std::string_view::npos)
      throw fail("malformed proof line");
    std::istringstream head{std::string(line.substr(0, a))};
    int depth = -1;
    std::string rname, flag;
    head >> depth >> rname >> flag;
    auto rule = rule_from_name(rname);
    if (depth < 0 || !rule) throw fail("bad depth or rule name '" + rname + "'");
    Proof p;
    p.inst.rule = *rule;
    std::string_view principal = line.substr(a + 13, b - a - 13);
    std::string_view witnesses = line.substr(b + 13, c - b - 13);
    std::string_view seq = line.substr(c + 11);
    try {
      if (principal != "-") p.inst.principal = parse_lformula(principal, sig);
      if (witnesses != "-") {
        std::istringstream ws{std::string(witnesses)};
        std::string kv;
        while (ws >> kv) {
          std::size_t eq = kv.find('=');
          if (eq == std::string::npos) throw fail("bad witness '" + kv + "'");
          std::string k = kv.substr(0, eq), val = kv.substr(eq + 1);
          if (k == "label") p.inst.label = val;
          else if (k == "var") p.inst.var = val;
          else if (k == "term") p.inst.term = parse_term(val, sig, true);
          else throw fail("unknown witness key '" + k + "'");
        }
      }
      p.concl = parse_sequent(seq, sig, true);
    } catch (const ParseError& e) {
      throw fail(e.what());
    }
    nodes.emplace_back(depth, std::move(p));
    if (end == text.size()) break;
  }
  if (nodes.empty()) throw ParseError("empty proof", 0);
  // Rebuild the tree from the preorder listing.
  std::size_t i = 0;
  std::function<Proof(int)> build = [&](int depth) {
    if (i >= nodes.size() || nodes[i].first != depth)
      throw ParseError("proof depth structure broken near node " + std::to_string(i), 0);
    Proof p = std::move(nodes[i].second);
    ++i;
    while (i < nodes.size() && nodes[i].first == depth + 1) p.prem.push_back(build(depth + 1));
    return p;
  };
  Proof root = build(0);
  if (i != nodes.size()) throw ParseError("trailing nodes after the root subtree", 0);
  return root;
}

Proof parse_proof(std::string_view text) {
  Signature sig;
  return parse_proof(text, sig);
}

}  // namespace lbiq
