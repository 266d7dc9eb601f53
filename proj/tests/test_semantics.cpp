#include <gtest/gtest.h>

#include <functional>

#include "testkit.hpp"

namespace lbiq {
namespace {

using testkit::Rng;

// Two worlds w0 <= w1, universe {e0, e1}, D(w0) = {e0}, D(w1) = {e0, e1}; p/1 holds of e0 at w1.
FiniteModel two_world_model() {
  return parse_model(
      "worlds: w0 w1\n"
      "order: w0<=w1\n"
      "universe: e0 e1\n"
      "domain w0: e0\n"
      "domain w1: e0 e1\n"
      "fun a/0: ->e0\n"
      "fun f/1: e0->e0, e1->e1\n"
      "pred p/1 @ w0:\n"
      "pred p/1 @ w1: e0\n"
      "pred q/0 @ w0:\n"
      "pred q/0 @ w1:\n");
}

// Clause-by-clause reference evaluator.
bool ref_eval(const FiniteModel& m, int w, Assignment a, const Formula& f) {
  std::function<int(const Term&)> term = [&](const Term& t) -> int {
    if (t.is_var) return a.count(t.name) ? a.at(t.name) : 0;
    std::vector<int> args;
    for (const auto& s : t.args) args.push_back(term(s));
    return m.fun.at(t.name)[static_cast<std::size_t>(m.tuple_index(args))];
  };
  switch (f->kind) {
    case Kind::Bot: return false;
    case Kind::Top: return true;
    case Kind::Atom: {
      std::vector<int> args;
      for (const auto& t : f->args) args.push_back(term(t));
      return m.pred.at(f->name)[static_cast<std::size_t>(w)][static_cast<std::size_t>(m.tuple_index(args))];
    }
    case Kind::And: return ref_eval(m, w, a, f->lhs) && ref_eval(m, w, a, f->rhs);
    case Kind::Or: return ref_eval(m, w, a, f->lhs) || ref_eval(m, w, a, f->rhs);
    case Kind::Impl:
      for (int u = 0; u < m.nw(); ++u)
        if (m.leq[w][u] && ref_eval(m, u, a, f->lhs) && !ref_eval(m, u, a, f->rhs)) return false;
      return true;
    case Kind::Excl:
      for (int u = 0; u < m.nw(); ++u)
        if (m.leq[u][w] && ref_eval(m, u, a, f->lhs) && !ref_eval(m, u, a, f->rhs)) return true;
      return false;
    case Kind::Exists:
      for (int e = 0; e < m.nu(); ++e)
        if (m.dom[w][e]) {
          Assignment b = a;
          b[f->name] = e;
          if (ref_eval(m, w, b, f->lhs)) return true;
        }
      return false;
    case Kind::Forall:
      for (int u = 0; u < m.nw(); ++u)
        if (m.leq[w][u])
          for (int e = 0; e < m.nu(); ++e)
            if (m.dom[u][e]) {
              Assignment b = a;
              b[f->name] = e;
              if (!ref_eval(m, u, b, f->lhs)) return false;
            }
      return true;
  }
  return false;
}

TEST(CheckModel, Examples) {
  FiniteModel one = parse_model("worlds: w0\nuniverse: e0 e1\ndomain w0: e0 e1\n");
  EXPECT_TRUE(check_model(one, Variant::ID).ok);
  EXPECT_TRUE(check_model(one, Variant::CD).ok);
  FiniteModel shrink = parse_model("worlds: w0 w1\norder: w0<=w1\nuniverse: e0 e1\ndomain w0: e0 e1\ndomain w1: e0\n");
  ModelCheck r = check_model(shrink, Variant::ID);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.violation.find("increasing domains"), std::string::npos);
  EXPECT_TRUE(check_model(two_world_model(), Variant::ID).ok);
  ModelCheck cd = check_model(two_world_model(), Variant::CD);
  EXPECT_FALSE(cd.ok);
  EXPECT_NE(cd.violation.find("constant domains"), std::string::npos);
}

TEST(CheckModel, NamesEachCondition) {
  FiniteModel m = two_world_model();
  m.pred["p"][0][1] = 1;
  EXPECT_FALSE(check_model(m, Variant::ID).ok);
  m = two_world_model();
  m.pred["p"][0][0] = 1;
  EXPECT_TRUE(check_model(m, Variant::ID).ok);
  m.pred["p"][1][0] = 0;
  EXPECT_FALSE(check_model(m, Variant::ID).ok);
  m = two_world_model();
  m.fun["a"][0] = 1;
  ModelCheck c1 = check_model(m, Variant::ID);
  EXPECT_FALSE(c1.ok);
  EXPECT_NE(c1.violation.find("C1"), std::string::npos);
  m = two_world_model();
  m.fun["f"][1] = 0;
  ModelCheck c2 = check_model(m, Variant::ID);
  EXPECT_FALSE(c2.ok);
  EXPECT_NE(c2.violation.find("C2"), std::string::npos);
}

TEST(CheckModel, GeneratorOutputIsWellFormed) {
  Rng rng(31);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 500; ++i) {
    Variant v = i % 2 ? Variant::ID : Variant::CD;
    FiniteModel m = random_model(sig, v, 3, 3, rng);
    ModelCheck r = check_model(m, v);
    EXPECT_TRUE(r.ok) << r.violation << "\n" << to_string(m);
  }
}

TEST(EvalTerm, Examples) {
  FiniteModel m = two_world_model();
  m.fun["f"] = {1, 1};
  Assignment a{{"x", 0}};
  EXPECT_EQ(eval_term(m, a, Term::var("x")), 0);
  EXPECT_EQ(eval_term(m, a, Term::app("a")), 0);
  EXPECT_EQ(eval_term(m, a, Term::app("f", {Term::app("f", {Term::var("x")})})), 1);
  EXPECT_EQ(eval_term(m, {}, Term::var("unset")), 0);
}

TEST(EvalFormula, Constants) {
  Rng rng(32);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 50; ++i) {
    FiniteModel m = random_model(sig, Variant::ID, 3, 3, rng);
    for (int w = 0; w < m.nw(); ++w) {
      EXPECT_FALSE(eval_formula(m, w, {}, mk_bot()));
      EXPECT_TRUE(eval_formula(m, w, {}, mk_top()));
    }
  }
}

TEST(EvalFormula, QuantifierShiftFailsOnGrowingDomain) {
  FiniteModel m = two_world_model();
  Formula shift = parse_formula("(forall x.(p(x) | q)) -> (forall x.p(x) | q)");
  EXPECT_TRUE(eval_formula(m, 0, {}, shift));
  m.pred["p"][0][0] = 1;
  m.pred["q"][1][0] = 1;
  ASSERT_TRUE(check_model(m, Variant::ID).ok);
  EXPECT_TRUE(eval_formula(m, 0, {}, parse_formula("forall x.(p(x) | q)")));
  EXPECT_FALSE(eval_formula(m, 0, {}, parse_formula("forall x.p(x) | q")));
  EXPECT_FALSE(eval_formula(m, 0, {}, shift));
  EXPECT_TRUE(eval_formula(m, 1, {}, shift));
}

TEST(EvalFormula, ExclusionLooksBackward) {
  FiniteModel m = two_world_model();
  Formula f = parse_formula("p(a) -< q");
  EXPECT_FALSE(eval_formula(m, 0, {}, f));
  EXPECT_TRUE(eval_formula(m, 1, {}, f));
}

TEST(EvalFormula, AgreesWithClauseReference) {
  Rng rng(33);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 400; ++i) {
    FiniteModel m = random_model(sig, i % 2 ? Variant::ID : Variant::CD, 3, 3, rng);
    Formula f = testkit::random_formula(rng, sig, {"x", "y"}, 3);
    for (int w = 0; w < m.nw(); ++w)
      for (int x = 0; x < m.nu(); ++x) {
        Assignment a{{"x", x}, {"y", (x + 1) % m.nu()}};
        EXPECT_EQ(eval_formula(m, w, a, f), ref_eval(m, w, a, f)) << to_string(f) << "\n" << to_string(m);
      }
  }
}

TEST(EvalFormula, DomainShiftFormulaValidOnIdModels) {
  Rng rng(34);
  Signature sig = testkit::fuzz_signature();
  Formula f = parse_formula("forall x.((p(x) -< exists y.p(y)) -> bot)");
  for (int i = 0; i < 300; ++i) {
    FiniteModel m = random_model(sig, Variant::ID, 3, 3, rng);
    for (int w = 0; w < m.nw(); ++w) EXPECT_TRUE(eval_formula(m, w, {}, f)) << to_string(m);
  }
}

TEST(EvalFormula, Persistence) {
  Rng rng(35);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 500; ++i) {
    FiniteModel m = random_model(sig, i % 2 ? Variant::ID : Variant::CD, 3, 3, rng);
    Formula f = testkit::random_formula(rng, sig, {"x"}, 3);
    for (int w = 0; w < m.nw(); ++w)
      for (int u = 0; u < m.nw(); ++u)
        if (m.leq[w][u])
          for (int x = 0; x < m.nu(); ++x)
            if (eval_formula(m, w, {{"x", x}}, f)) EXPECT_TRUE(eval_formula(m, u, {{"x", x}}, f)) << to_string(f);
  }
}

// All interpretations and assignments, enumerated directly.
bool ref_valid_on(const FiniteModel& m, const Sequent& s) {
  std::set<Label> lset = labels(s);
  std::vector<Label> ls(lset.begin(), lset.end());
  std::set<std::string> vs = vars(s);
  std::vector<std::string> xs(vs.begin(), vs.end());
  std::size_t total_i = 1, total_a = 1;
  for (std::size_t k = 0; k < ls.size(); ++k) total_i *= static_cast<std::size_t>(m.nw());
  for (std::size_t k = 0; k < xs.size(); ++k) total_a *= static_cast<std::size_t>(m.nu());
  for (std::size_t ci = 0; ci < total_i; ++ci) {
    Interpretation iota;
    std::size_t c = ci;
    for (const auto& l : ls) iota[l] = static_cast<int>(c % static_cast<std::size_t>(m.nw())), c /= static_cast<std::size_t>(m.nw());
    bool respects = true;
    for (const auto& r : s.R) respects = respects && m.leq[iota[r.from]][iota[r.to]];
    if (!respects) continue;
    for (std::size_t ca = 0; ca < total_a; ++ca) {
      Assignment alpha;
      std::size_t d = ca;
      for (const auto& x : xs) alpha[x] = static_cast<int>(d % static_cast<std::size_t>(m.nu())), d /= static_cast<std::size_t>(m.nu());
      bool dom = true;
      for (const auto& t : s.T) dom = dom && m.dom[iota[t.label]][alpha[t.var]];
      if (!dom) continue;
      bool ante = true;
      for (const auto& g : s.G) ante = ante && ref_eval(m, iota[g.label], alpha, g.f);
      if (!ante) continue;
      bool succ = false;
      for (const auto& d2 : s.D) succ = succ || ref_eval(m, iota[d2.label], alpha, d2.f);
      if (!succ) return false;
    }
  }
  return true;
}

TEST(EvalSequent, Examples) {
  FiniteModel m = two_world_model();
  Sequent top = parse_sequent("w: p(a) |- w: top");
  EXPECT_FALSE(falsify(m, top));
  FiniteModel discrete = parse_model("worlds: w0 w1\nuniverse: e0\ndomain w0: e0\ndomain w1: e0\npred q/0 @ w0:\npred q/0 @ w1:\n");
  Sequent chain = parse_sequent("R: w<u ; |- w: q");
  auto f = falsify(discrete, chain);
  ASSERT_TRUE(f);
  EXPECT_FALSE(eval_sequent(discrete, f->iota, f->alpha, chain));
  Interpretation apart{{"w", 0}, {"u", 1}};
  EXPECT_TRUE(eval_sequent(discrete, apart, {}, chain));
}

TEST(EvalSequent, AgreesWithEnumeration) {
  Rng rng(36);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 300; ++i) {
    FiniteModel m = random_model(sig, Variant::ID, 3, 2, rng);
    Sequent s = testkit::random_sequent(rng, sig, testkit::FuzzShape{3, 3, 2});
    auto f = falsify(m, s);
    EXPECT_EQ(!f.has_value(), ref_valid_on(m, s)) << to_string(s) << "\n" << to_string(m);
    if (f) EXPECT_FALSE(eval_sequent(m, f->iota, f->alpha, s));
  }
}

TEST(EvalSequent, PolytreeExampleOnFourWorlds) {
  FiniteModel m = parse_model(
      "worlds: a b c d\n"
      "order: a<=c, b<=c, c<=d, a<=d, b<=d\n"
      "universe: e0 e1\n"
      "domain a: e0\ndomain b: e0 e1\ndomain c: e0 e1\ndomain d: e0 e1\n"
      "pred p/1 @ a:\npred p/1 @ b: e1\npred p/1 @ c: e1\npred p/1 @ d: e0 e1\n"
      "pred q/0 @ a:\npred q/0 @ b:\npred q/0 @ c: ()\npred q/0 @ d: ()\n");
  ASSERT_TRUE(check_model(m, Variant::ID).ok);
  Sequent s = parse_sequent("R: u'<w, u<w, w<v ; T: u':x, u:x, u:y, w:z, v:y ; w: p(z), w: q |- u': q, u: p(x), v: p(y)");
  EXPECT_EQ(!falsify(m, s).has_value(), ref_valid_on(m, s));
  Sequent t = parse_sequent("R: u'<w, u<w, w<v ; T: u':x, u:x, u:y, w:z, v:y ; w: q |- u': q, u: p(x), v: p(y)");
  EXPECT_EQ(!falsify(m, t).has_value(), ref_valid_on(m, t));
}

TEST(Countermodel, QuantifierShift) {
  Sequent s = goal_of(parse_formula("(forall x.(p(x) | q)) -> (forall x.p(x) | q)"));
  auto id = find_countermodel(s, {2, 2}, Variant::ID);
  ASSERT_TRUE(id);
  EXPECT_TRUE(check_model(id->model, Variant::ID).ok);
  EXPECT_FALSE(eval_sequent(id->model, id->iota, id->alpha, s));
  EXPECT_EQ(id->model.nw(), 2);
  EXPECT_FALSE(find_countermodel(s, {2, 2}, Variant::CD));
  EXPECT_FALSE(find_countermodel(s, {3, 2}, Variant::CD));
  EXPECT_FALSE(find_countermodel(goal_of(parse_formula("p -> p")), {3, 3}, Variant::ID));
}

TEST(Countermodel, ParallelMatchesSerial) {
  Rng rng(37);
  Signature sig = testkit::fuzz_signature();
  const std::vector<std::string> corpus = {
      "(forall x.(p(x) | q)) -> (forall x.p(x) | q)", "((p(a) -> q) -> p(a)) -> p(a)", "p(a) | (p(a) -> bot)",
      "(exists x.p(x)) -> forall x.p(x)",             "q -< (p(a) -> q)",                "forall x.((p(x) -< exists y.p(y)) -> bot)"};
  for (const auto& text : corpus) {
    Sequent s = goal_of(parse_formula(text));
    for (Variant v : {Variant::ID, Variant::CD}) {
      auto a = find_countermodel_serial(s, {2, 2}, v);
      for (int jobs : {1, 2, 4}) {
        auto b = find_countermodel(s, {2, 2}, v, jobs);
        ASSERT_EQ(a.has_value(), b.has_value()) << text;
        if (a) EXPECT_EQ(to_string(*a, s), to_string(*b, s));
      }
      if (a) EXPECT_FALSE(eval_sequent(a->model, a->iota, a->alpha, s));
    }
  }
  EXPECT_GT(count_models(sig, {2, 2}, Variant::ID), 0u);
}

TEST(Countermodel, PeircesLawNeedsTwoWorlds) {
  Sequent s = goal_of(parse_formula("((p(a) -> q) -> p(a)) -> p(a)"));
  EXPECT_FALSE(find_countermodel(s, {1, 1}, Variant::ID));
  EXPECT_TRUE(find_countermodel(s, {2, 1}, Variant::ID));
}

TEST(ModelText, RoundTrips) {
  Rng rng(38);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 100; ++i) {
    FiniteModel m = random_model(sig, Variant::ID, 3, 3, rng);
    std::string text = to_string(m);
    EXPECT_EQ(to_string(parse_model(text)), text);
  }
}

TEST(Preorders, CountsMatchKnownSequence) {
  EXPECT_EQ(preorders(1).size(), 1u);
  EXPECT_EQ(preorders(2).size(), 4u);
  EXPECT_EQ(preorders(3).size(), 29u);
}

}  // namespace
}  // namespace lbiq
