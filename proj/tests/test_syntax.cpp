#include <gtest/gtest.h>

#include <functional>

#include "testkit.hpp"

namespace lbiq {
namespace {

using testkit::Rng;

Formula P(std::string_view text) { return parse_formula(text); }

TEST(Parse, QuantifierShiftShape) {
  Formula f = P("forall x.(p(x) | q) -> (forall x.p(x) | q)");
  ASSERT_EQ(f->kind, Kind::Impl);
  ASSERT_EQ(f->lhs->kind, Kind::Forall);
  EXPECT_EQ(f->lhs->name, "x");
  EXPECT_EQ(f->lhs->lhs->kind, Kind::Or);
  ASSERT_EQ(f->rhs->kind, Kind::Or);
  EXPECT_EQ(f->rhs->lhs->kind, Kind::Forall);
  EXPECT_EQ(f->rhs->rhs->kind, Kind::Atom);
}

TEST(Parse, ImplicationOfAtoms) {
  Formula f = P("p(x) -> p(x)");
  ASSERT_EQ(f->kind, Kind::Impl);
  EXPECT_EQ(to_string(f->lhs), "p(x)");
  EXPECT_TRUE(alpha_equal(f->lhs, f->rhs));
}

TEST(Parse, ExclusionBindsLooserThanConjunction) {
  Formula f = P("p(x) -< q & r");
  ASSERT_EQ(f->kind, Kind::Excl);
  EXPECT_EQ(f->rhs->kind, Kind::And);
}

// Reference table: binding strength and associativity, checked against every bracketing.
int strength(Kind k) {
  switch (k) {
    case Kind::And: return 4;
    case Kind::Or: return 3;
    case Kind::Excl: return 2;
    case Kind::Impl: return 1;
    default: return 9;
  }
}

bool left_assoc(Kind k) { return k != Kind::Impl; }

// A child may sit under parent k on the given side without brackets.
bool fits(Kind parent, const Formula& child, bool left_child) {
  if (!is_binary(child->kind)) return true;
  if (strength(child->kind) > strength(parent)) return true;
  if (child->kind != parent) return false;
  return left_child ? left_assoc(parent) : !left_assoc(parent);
}

std::vector<Formula> bracketings(const std::vector<Formula>& atoms, const std::vector<Kind>& ops, std::size_t lo,
                                 std::size_t hi) {
  if (lo == hi) return {atoms[lo]};
  std::vector<Formula> out;
  for (std::size_t k = lo; k < hi; ++k)
    for (const auto& a : bracketings(atoms, ops, lo, k))
      for (const auto& b : bracketings(atoms, ops, k + 1, hi)) out.push_back(mk_bin(ops[k], a, b));
  return out;
}

bool admissible(const Formula& f) {
  if (!is_binary(f->kind)) return true;
  return fits(f->kind, f->lhs, true) && fits(f->kind, f->rhs, false) && admissible(f->lhs) && admissible(f->rhs);
}

TEST(Parse, PrecedenceAgreesWithAllBracketings) {
  const std::vector<std::pair<Kind, const char*>> ops = {
      {Kind::And, "&"}, {Kind::Or, "|"}, {Kind::Excl, "-<"}, {Kind::Impl, "->"}};
  std::vector<Formula> atoms = {mk_atom("p"), mk_atom("q"), mk_atom("r"), mk_atom("s")};
  int cases = 0;
  for (const auto& o1 : ops)
    for (const auto& o2 : ops)
      for (const auto& o3 : ops) {
        std::string text = std::string("p ") + o1.second + " q " + o2.second + " r " + o3.second + " s";
        std::vector<Formula> valid;
        for (const auto& f : bracketings(atoms, {o1.first, o2.first, o3.first}, 0, 3))
          if (admissible(f)) valid.push_back(f);
        ASSERT_EQ(valid.size(), 1u) << text;
        EXPECT_EQ(alpha_key(P(text)), alpha_key(valid[0])) << text;
        ++cases;
      }
  EXPECT_EQ(cases, 64);
}

TEST(Parse, QuantifierBodyIsTheFollowingUnit) {
  EXPECT_EQ(P("forall x.p(x) | q")->kind, Kind::Or);
  EXPECT_EQ(P("exists x.(p(x) | q)")->kind, Kind::Exists);
  EXPECT_EQ(P("forall x.exists y.p(f(y)) & q")->kind, Kind::And);
}

TEST(Parse, ConstantsAndVariables) {
  Signature sig;
  sig.functions["a"] = 0;
  Formula f = parse_formula("p(a, b(), x)", sig);
  ASSERT_EQ(f->args.size(), 3u);
  EXPECT_TRUE(f->args[0].is_constant());
  EXPECT_TRUE(f->args[1].is_constant());
  EXPECT_TRUE(f->args[2].is_var);
  EXPECT_EQ(sig.functions.at("b"), 0);
}

TEST(Parse, ErrorsCarryPositions) {
  try {
    P("p & & q");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos, 4u);
  }
  EXPECT_THROW(P("p(x"), ParseError);
  EXPECT_THROW(P("p $ q"), ParseError);
  EXPECT_THROW(P("forall . p"), ParseError);
  EXPECT_THROW(P("p(x) & p(x, y)"), ParseError);
  Signature fixed = testkit::fuzz_signature();
  EXPECT_THROW(parse_formula("s(x)", fixed, false), ParseError);
  EXPECT_NO_THROW(parse_formula("p(f(a)) -> q", fixed, false));
}

TEST(Print, RoundTripsRandomFormulas) {
  Rng rng(7);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 500; ++i) {
    Formula f = testkit::random_formula(rng, sig, {"x", "y"}, 4);
    std::string text = to_string(f);
    Signature s2 = sig;
    Formula g = parse_formula(text, s2, false);
    EXPECT_EQ(to_string(g), text);
    EXPECT_EQ(alpha_key(g), alpha_key(f)) << text;
  }
}

// Occurrence walk with an explicit binder stack.
void occurrences(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::function<void(const Term&)> term = [&](const Term& t) {
    if (t.is_var) {
      if (std::find(bound.begin(), bound.end(), t.name) == bound.end()) out.insert(t.name);
      return;
    }
    for (const auto& a : t.args) term(a);
  };
  switch (f->kind) {
    case Kind::Atom:
      for (const auto& a : f->args) term(a);
      break;
    case Kind::Exists:
    case Kind::Forall:
      bound.push_back(f->name);
      occurrences(f->lhs, bound, out);
      bound.pop_back();
      break;
    case Kind::Bot:
    case Kind::Top: break;
    default:
      occurrences(f->lhs, bound, out);
      occurrences(f->rhs, bound, out);
  }
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_vars(P("forall x.p(x, y)")), (std::set<std::string>{"y"}));
  EXPECT_TRUE(free_vars(P("forall x.(p(x) | q) -> (forall x.p(x) | q)")).empty());
  EXPECT_EQ(free_vars(P("p(f(y, z)) & exists y.q(y)")), (std::set<std::string>{"y", "z"}));
}

TEST(FreeVars, AgreeWithBinderStackWalk) {
  Rng rng(11);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 500; ++i) {
    Formula f = testkit::random_formula(rng, sig, {"x", "y"}, 4);
    std::vector<std::string> bound;
    std::set<std::string> expect;
    occurrences(f, bound, expect);
    EXPECT_EQ(free_vars(f), expect) << to_string(f);
  }
}

// Nameless rendering: bound occurrences become binder distances, free ones keep their names.
std::string nameless(const Term& t, const std::vector<std::string>& env) {
  if (t.is_var) {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i] == t.name) return "#" + std::to_string(env.size() - 1 - i);
    return t.name;
  }
  std::string out = t.name + "(";
  for (const auto& a : t.args) out += nameless(a, env) + ",";
  return out + ")";
}

// The nameless form of f with t substituted for the free occurrences of x.
std::string nameless(const Formula& f, std::vector<std::string>& env, const Term* t = nullptr,
                     const std::string& x = "") {
  auto term = [&](const Term& a) {
    std::function<std::string(const Term&)> go = [&](const Term& s) -> std::string {
      if (s.is_var) {
        bool is_bound = std::find(env.begin(), env.end(), s.name) != env.end();
        if (t && !is_bound && s.name == x) return nameless(*t, {});
        return nameless(s, env);
      }
      std::string out = s.name + "(";
      for (const auto& b : s.args) out += go(b) + ",";
      return out + ")";
    };
    return go(a);
  };
  switch (f->kind) {
    case Kind::Atom: {
      std::string out = f->name + "(";
      for (const auto& a : f->args) out += term(a) + ",";
      return out + ")";
    }
    case Kind::Bot: return "bot";
    case Kind::Top: return "top";
    case Kind::Exists:
    case Kind::Forall: {
      env.push_back(f->name);
      std::string body = nameless(f->lhs, env, t, x);
      env.pop_back();
      return std::string(f->kind == Kind::Exists ? "E." : "A.") + body;
    }
    default: {
      std::string a = nameless(f->lhs, env, t, x);
      std::string b = nameless(f->rhs, env, t, x);
      return "(" + a + " " + std::to_string(static_cast<int>(f->kind)) + " " + b + ")";
    }
  }
}

TEST(Subst, MatchesNamelessReference) {
  Rng rng(13);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 1000; ++i) {
    Formula f = testkit::random_formula(rng, sig, {"x", "y", "z"}, 4);
    Term t = testkit::random_term(rng, sig, {"x", "y", "z"}, 2);
    std::string x = std::vector<std::string>{"x", "y", "z"}[static_cast<std::size_t>(i % 3)];
    std::vector<std::string> env;
    std::string expect = nameless(f, env, &t, x);
    Formula g = subst(f, t, x);
    EXPECT_EQ(nameless(g, env), expect) << to_string(f) << " [" << to_string(t) << "/" << x << "]";
    EXPECT_TRUE(env.empty());
  }
}

TEST(Subst, CaptureIsAvoided) {
  Formula f = P("forall y.p(x, y)");
  Formula g = subst(f, Term::var("y"), "x");
  EXPECT_TRUE(alpha_equal(g, P("forall z.p(y, z)"))) << to_string(g);
  EXPECT_NE(g->name, "y");
  EXPECT_TRUE(alpha_equal(subst(f, Term::var("x"), "x"), f));
  Formula h = P("exists y.(p(x) & q(y))");
  Formula k = subst(h, Term::app("f", {Term::var("y")}), "x");
  EXPECT_TRUE(alpha_equal(k, P("exists z.(p(f(y)) & q(z))"))) << to_string(k);
}

TEST(Subst, BoundOccurrencesAreUntouched) {
  Formula f = P("forall x.p(x) & p(x)");
  Formula g = subst(f, Term::app("a"), "x");
  EXPECT_TRUE(alpha_equal(g, P("forall x.p(x) & p(a())")));
}

TEST(Complexity, Examples) {
  EXPECT_EQ(complexity(P("p(t)")), 0);
  EXPECT_EQ(complexity(P("bot")), 0);
  EXPECT_EQ(complexity(P("top")), 0);
  EXPECT_EQ(complexity(P("forall x.p(x)")), 1);
  EXPECT_EQ(complexity(P("(p | q) -> (r -< s)")), 3);
}

TEST(Vt, Examples) {
  Signature sig;
  sig.functions["a"] = 0;
  EXPECT_EQ(vt(Term::var("x")), (std::set<std::string>{"x"}));
  EXPECT_EQ(vt(parse_term("f(y, g(z))", sig)), (std::set<std::string>{"y", "z"}));
  EXPECT_TRUE(vt(parse_term("a", sig)).empty());
}

TEST(Alpha, KeysIdentifyRenamings) {
  EXPECT_TRUE(alpha_equal(P("forall x.p(x)"), P("forall y.p(y)")));
  EXPECT_FALSE(alpha_equal(P("forall x.p(x, y)"), P("forall y.p(y, y)")));
  EXPECT_TRUE(alpha_equal(P("exists x.forall y.p(f(x), y)"), P("exists y.forall x.p(f(y), x)")));
  EXPECT_FALSE(alpha_equal(P("p(x)"), P("p(y)")));
}

TEST(FreshVar, SkipsTakenNames) {
  EXPECT_EQ(fresh_var("x", {"x"}), "x'1");
  EXPECT_EQ(fresh_var("x", {"x", "x'1", "x'2"}), "x'3");
}

TEST(Signature, MergeRejectsArityClash) {
  Signature a = signature_of(P("p(x) & q"));
  EXPECT_EQ(a.predicates.at("p"), 1);
  Signature b = signature_of(P("p(x, y)"));
  EXPECT_THROW(a.merge(b), std::invalid_argument);
}

}  // namespace
}  // namespace lbiq
