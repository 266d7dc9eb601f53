#include "lbiq/syntax.hpp"

#include <algorithm>

#include "lbiq/lexer.hpp"

namespace lbiq {

bool Signature::is_constant(const std::string& name) const {
  auto it = functions.find(name);
  return it != functions.end() && it->second == 0;
}

std::vector<std::string> Signature::constants() const {
  std::vector<std::string> out;
  for (const auto& [n, a] : functions)
    if (a == 0) out.push_back(n);
  return out;
}

void Signature::merge(const Signature& other) {
  for (const auto& [n, a] : other.functions) {
    auto [it, fresh] = functions.emplace(n, a);
    if (!fresh && it->second != a) throw std::invalid_argument("arity clash for function " + n);
  }
  for (const auto& [n, a] : other.predicates) {
    auto [it, fresh] = predicates.emplace(n, a);
    if (!fresh && it->second != a) throw std::invalid_argument("arity clash for predicate " + n);
  }
}

Term Term::var(std::string name) { return Term{true, std::move(name), {}}; }
Term Term::app(std::string fn, std::vector<Term> args) { return Term{false, std::move(fn), std::move(args)}; }

int Term::depth() const {
  int d = 0;
  for (const auto& a : args) d = std::max(d, a.depth() + 1);
  return d;
}

bool operator==(const Term& a, const Term& b) {
  return a.is_var == b.is_var && a.name == b.name && a.args == b.args;
}

bool operator<(const Term& a, const Term& b) {
  if (a.is_var != b.is_var) return a.is_var;
  if (a.name != b.name) return a.name < b.name;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

Formula mk_atom(std::string pred, std::vector<Term> args) {
  return std::make_shared<const FormulaNode>(FormulaNode{Kind::Atom, std::move(pred), std::move(args), nullptr, nullptr});
}

Formula mk_bot() {
  static const Formula f = std::make_shared<const FormulaNode>(FormulaNode{Kind::Bot, "", {}, nullptr, nullptr});
  return f;
}

Formula mk_top() {
  static const Formula f = std::make_shared<const FormulaNode>(FormulaNode{Kind::Top, "", {}, nullptr, nullptr});
  return f;
}

Formula mk_bin(Kind k, Formula a, Formula b) {
  return std::make_shared<const FormulaNode>(FormulaNode{k, "", {}, std::move(a), std::move(b)});
}

Formula mk_quant(Kind k, std::string var, Formula body) {
  return std::make_shared<const FormulaNode>(FormulaNode{k, std::move(var), {}, std::move(body), nullptr});
}

bool is_binary(Kind k) { return k == Kind::And || k == Kind::Or || k == Kind::Impl || k == Kind::Excl; }
bool is_quantifier(Kind k) { return k == Kind::Exists || k == Kind::Forall; }

namespace {

void collect_vt(const Term& t, std::set<std::string>& out) {
  if (t.is_var) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vt(a, out);
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (f->kind) {
    case Kind::Atom: {
      std::set<std::string> vs;
      for (const auto& a : f->args) collect_vt(a, vs);
      for (const auto& v : vs)
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.insert(v);
      break;
    }
    case Kind::Bot:
    case Kind::Top: break;
    case Kind::Exists:
    case Kind::Forall:
      bound.push_back(f->name);
      collect_free(f->lhs, bound, out);
      bound.pop_back();
      break;
    default:
      collect_free(f->lhs, bound, out);
      collect_free(f->rhs, bound, out);
  }
}

void collect_all(const Formula& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Kind::Atom:
      for (const auto& a : f->args) collect_vt(a, out);
      break;
    case Kind::Bot:
    case Kind::Top: break;
    case Kind::Exists:
    case Kind::Forall:
      out.insert(f->name);
      collect_all(f->lhs, out);
      break;
    default:
      collect_all(f->lhs, out);
      collect_all(f->rhs, out);
  }
}

void collect_sig(const Term& t, Signature& sig) {
  if (t.is_var) return;
  sig.functions[t.name] = static_cast<int>(t.args.size());
  for (const auto& a : t.args) collect_sig(a, sig);
}

}  // namespace

std::set<std::string> vt(const Term& t) {
  std::set<std::string> out;
  collect_vt(t, out);
  return out;
}

std::set<std::string> vt(const std::vector<Term>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) collect_vt(t, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

Signature signature_of(const Formula& f) {
  Signature sig;
  switch (f->kind) {
    case Kind::Atom:
      sig.predicates[f->name] = static_cast<int>(f->args.size());
      for (const auto& a : f->args) collect_sig(a, sig);
      break;
    case Kind::Bot:
    case Kind::Top: break;
    case Kind::Exists:
    case Kind::Forall: sig = signature_of(f->lhs); break;
    default:
      sig = signature_of(f->lhs);
      sig.merge(signature_of(f->rhs));
  }
  return sig;
}

int complexity(const Formula& f) {
  switch (f->kind) {
    case Kind::Atom:
    case Kind::Bot:
    case Kind::Top: return 0;
    case Kind::Exists:
    case Kind::Forall: return complexity(f->lhs) + 1;
    default: return complexity(f->lhs) + complexity(f->rhs) + 1;
  }
}

bool has_exclusion(const Formula& f) {
  switch (f->kind) {
    case Kind::Atom:
    case Kind::Bot:
    case Kind::Top: return false;
    case Kind::Excl: return true;
    case Kind::Exists:
    case Kind::Forall: return has_exclusion(f->lhs);
    default: return has_exclusion(f->lhs) || has_exclusion(f->rhs);
  }
}

std::string fresh_var(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base.substr(0, base.find('\''));
  for (int k = 1;; ++k) {
    std::string cand = stem + "'" + std::to_string(k);
    if (!avoid.count(cand)) return cand;
  }
}

Term subst(const Term& s, const Term& t, const std::string& x) {
  if (s.is_var) return s.name == x ? t : s;
  Term out = s;
  for (auto& a : out.args) a = subst(a, t, x);
  return out;
}

Formula subst(const Formula& f, const Term& t, const std::string& x) {
  switch (f->kind) {
    case Kind::Atom: {
      if (!vt(f->args).count(x)) return f;
      std::vector<Term> args;
      for (const auto& a : f->args) args.push_back(subst(a, t, x));
      return mk_atom(f->name, std::move(args));
    }
    case Kind::Bot:
    case Kind::Top: return f;
    case Kind::Exists:
    case Kind::Forall: {
      if (f->name == x || !free_vars(f->lhs).count(x)) return f;
      std::set<std::string> tv = vt(t);
      if (!tv.count(f->name)) return mk_quant(f->kind, f->name, subst(f->lhs, t, x));
      std::set<std::string> avoid = all_vars(f->lhs);
      avoid.insert(tv.begin(), tv.end());
      avoid.insert(x);
      std::string y = fresh_var(f->name, avoid);
      Formula body = subst(f->lhs, Term::var(y), f->name);
      return mk_quant(f->kind, y, subst(body, t, x));
    }
    default: {
      Formula a = subst(f->lhs, t, x);
      Formula b = subst(f->rhs, t, x);
      if (a == f->lhs && b == f->rhs) return f;
      return mk_bin(f->kind, a, b);
    }
  }
}

namespace {

void key_term(const Term& t, const std::vector<std::string>& bound, std::string& out) {
  if (t.is_var) {
    for (std::size_t i = bound.size(); i-- > 0;) {
      if (bound[i] == t.name) {
        out += '#';
        out += std::to_string(bound.size() - 1 - i);
        return;
      }
    }
    out += '$';
    out += t.name;
    return;
  }
  out += t.name;
  out += '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    key_term(t.args[i], bound, out);
  }
  out += ')';
}

void key_formula(const Formula& f, std::vector<std::string>& bound, std::string& out) {
  switch (f->kind) {
    case Kind::Atom:
      out += 'P';
      out += f->name;
      out += '(';
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) out += ',';
        key_term(f->args[i], bound, out);
      }
      out += ')';
      return;
    case Kind::Bot: out += 'B'; return;
    case Kind::Top: out += 'T'; return;
    case Kind::Exists:
    case Kind::Forall:
      out += f->kind == Kind::Exists ? "(E " : "(A ";
      bound.push_back(f->name);
      key_formula(f->lhs, bound, out);
      bound.pop_back();
      out += ')';
      return;
    default: {
      const char* op = f->kind == Kind::And ? "(& " : f->kind == Kind::Or ? "(| " : f->kind == Kind::Impl ? "(> " : "(< ";
      out += op;
      key_formula(f->lhs, bound, out);
      out += ' ';
      key_formula(f->rhs, bound, out);
      out += ')';
    }
  }
}

int level(Kind k) {
  switch (k) {
    case Kind::Impl: return 1;
    case Kind::Excl: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    default: return 5;
  }
}

void print(const Formula& f, int min_level, std::string& out) {
  int lv = level(f->kind);
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (f->kind) {
    case Kind::Atom:
      out += f->name;
      if (!f->args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < f->args.size(); ++i) {
          if (i) out += ',';
          out += to_string(f->args[i]);
        }
        out += ')';
      }
      break;
    case Kind::Bot: out += "bot"; break;
    case Kind::Top: out += "top"; break;
    case Kind::Exists:
    case Kind::Forall:
      out += f->kind == Kind::Exists ? "exists " : "forall ";
      out += f->name;
      out += '.';
      print(f->lhs, 5, out);
      break;
    case Kind::And:
      print(f->lhs, 4, out), out += " & ", print(f->rhs, 5, out);
      break;
    case Kind::Or:
      print(f->lhs, 3, out), out += " | ", print(f->rhs, 4, out);
      break;
    case Kind::Excl:
      print(f->lhs, 2, out), out += " -< ", print(f->rhs, 3, out);
      break;
    case Kind::Impl:
      print(f->lhs, 2, out), out += " -> ", print(f->rhs, 1, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string alpha_key(const Formula& f) {
  std::vector<std::string> bound;
  std::string out;
  key_formula(f, bound, out);
  return out;
}

bool alpha_equal(const Formula& a, const Formula& b) { return a == b || alpha_key(a) == alpha_key(b); }

std::string to_string(const Term& t) {
  if (t.is_var || t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(t.args[i]);
  }
  return out + ")";
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

Formula parse_formula(std::string_view text, Signature& sig, bool extend) {
  Lexer lx(text);
  FormulaParser p(lx, sig, extend);
  Formula f = p.formula();
  if (!lx.at_end()) throw ParseError("trailing input '" + lx.peek().text + "'", lx.pos());
  return f;
}

Formula parse_formula(std::string_view text) {
  Signature sig;
  return parse_formula(text, sig, true);
}

Term parse_term(std::string_view text, Signature& sig, bool extend) {
  Lexer lx(text);
  FormulaParser p(lx, sig, extend);
  Term t = p.term();
  if (!lx.at_end()) throw ParseError("trailing input '" + lx.peek().text + "'", lx.pos());
  return t;
}

}  // namespace lbiq
