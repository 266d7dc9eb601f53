#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "testkit.hpp"

namespace lbiq {
namespace {

using testkit::Rng;

Sequent S(std::string_view text) { return parse_sequent(text); }

const char* kPolytreeExample =
    "R: u'<w, u<w, w<v ; T: u':x, u:x, u:y, w:z, v:y ; w: p(a()), w: q, v: p(b()) |- u': q, u: p(x), v: q";
const char* kPropagationExample =
    "R: u<w, w<v ; T: w:x, u:y, v:z ; w: forall x.p(x), w: p(f(y)), w: p(z) |- u: q(x) -< q(x), v: r(y)";

TEST(Validate, PolytreeExampleIsValid) { EXPECT_TRUE(validate(S(kPolytreeExample)).ok); }

TEST(Validate, RejectsCycles) {
  Validation d = validate(S("R: w<u, u<w ; |- w: p"));
  EXPECT_FALSE(d.ok);
  Validation u = validate(S("R: w<u, v<u, w<v ; |- w: p"));
  EXPECT_FALSE(u.ok);
  EXPECT_FALSE(u.message.empty());
}

TEST(Validate, LabelCover) {
  EXPECT_FALSE(validate(S("w: p |- u: p")).ok);
  EXPECT_TRUE(validate(S("w: p |- w: p")).ok);
  EXPECT_FALSE(validate(S("R: w<u ; |- v: p")).ok);
  EXPECT_FALSE(validate(Sequent{}).ok);
  EXPECT_TRUE(validate(S("T: w:x ; |-")).ok);
}

TEST(Validate, DisconnectedForest) { EXPECT_FALSE(validate(S("R: w<u, v<z ; |- w: p")).ok); }

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

TEST(Validate, AgreesWithUnionFindOnRandomGraphs) {
  Rng rng(3);
  const std::vector<Label> names = {"w", "u", "v", "z"};
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    int n = std::uniform_int_distribution<int>(1, 4)(rng);
    int m = std::uniform_int_distribution<int>(0, 4)(rng);
    Sequent s;
    std::set<int> used;
    for (int e = 0; e < m; ++e) {
      int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
      int b = std::uniform_int_distribution<int>(0, n - 1)(rng);
      s.add_rel(names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)]);
      used.insert(a), used.insert(b);
    }
    int anchor = std::uniform_int_distribution<int>(0, n - 1)(rng);
    s.add(Side::Right, LFormula(names[static_cast<std::size_t>(anchor)], mk_atom("q")));
    used.insert(anchor);
    // A polytree: |E| = |V| - 1 and union-find never closes a cycle, which covers self-loops and
    // two-cycles; the anchor label must lie on an edge unless there are none.
    bool expect;
    if (s.R.empty()) {
      expect = true;
    } else {
      std::set<int> vs;
      for (const auto& r : s.R)
        vs.insert(static_cast<int>(std::find(names.begin(), names.end(), r.from) - names.begin())),
            vs.insert(static_cast<int>(std::find(names.begin(), names.end(), r.to) - names.begin()));
      UnionFind uf(4);
      bool acyclic = true;
      for (const auto& r : s.R) {
        int a = static_cast<int>(std::find(names.begin(), names.end(), r.from) - names.begin());
        int b = static_cast<int>(std::find(names.begin(), names.end(), r.to) - names.begin());
        if (!uf.unite(a, b)) acyclic = false;
      }
      expect = acyclic && s.R.size() + 1 == vs.size() && vs.count(anchor);
    }
    EXPECT_EQ(validate(s).ok, expect) << to_string(s);
    accepted += expect;
  }
  EXPECT_GT(accepted, 100);
}

TEST(Reach, Examples) {
  Sequent empty = S("|- w: p");
  EXPECT_TRUE(reachable(empty.R, "w", "w"));
  EXPECT_FALSE(strictly_reachable(empty.R, "w", "w"));
  Sequent s = S(kPropagationExample);
  EXPECT_TRUE(reachable(s.R, "u", "v"));
  EXPECT_FALSE(reachable(s.R, "v", "w"));
  EXPECT_TRUE(strictly_reachable(s.R, "u", "v"));
}

TEST(Reach, AgreesWithFloydWarshall) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    Sequent s = testkit::random_polytree(rng, std::uniform_int_distribution<int>(2, 5)(rng));
    auto m = testkit::closure(s);
    Reach r(s);
    for (const auto& [a, row] : m)
      for (const auto& [b, val] : row) {
        EXPECT_EQ(reachable(s.R, a, b), val);
        EXPECT_EQ(r.reachable(a, b), val);
        EXPECT_EQ(strictly_reachable(s.R, a, b), a != b && val);
      }
  }
}

TEST(Reach, IsAPartialOrderOnPolytrees) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    Sequent s = testkit::random_polytree(rng, 5);
    Reach r(s);
    for (const auto& a : r.labels()) {
      EXPECT_TRUE(r.reachable(a, a));
      for (const auto& b : r.labels()) {
        if (a != b && r.reachable(a, b)) EXPECT_FALSE(r.reachable(b, a));
        for (const auto& c : r.labels())
          if (r.reachable(a, b) && r.reachable(b, c)) EXPECT_TRUE(r.reachable(a, c));
      }
    }
  }
}

TEST(Reach, PathListsTheRoute) {
  Sequent s = S(kPropagationExample);
  Reach r(s);
  EXPECT_EQ(r.path("u", "v"), (std::vector<Label>{"u", "w", "v"}));
  EXPECT_TRUE(r.path("v", "u").empty());
}

TEST(Availability, PropagationExample) {
  Sequent s = S(kPropagationExample);
  EXPECT_EQ(available_vars(s, "w"), (std::set<std::string>{"x", "y"}));
  Signature sig;
  EXPECT_TRUE(is_available(parse_term("f(y)", sig), s, "w"));
  EXPECT_FALSE(is_available(Term::var("z"), s, "w"));
  EXPECT_TRUE(is_available(Term::app("a"), s, "u"));
  EXPECT_TRUE(available_vars(S("|- w: p"), "w").empty());
  EXPECT_THROW(available_vars(s, "nowhere"), std::invalid_argument);
}

TEST(Availability, AgreesWithBruteForce) {
  Rng rng(8);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 300; ++i) {
    Sequent s = testkit::random_sequent(rng, sig, testkit::FuzzShape{4, 2, 1});
    auto m = testkit::closure(s);
    for (const auto& w : labels(s)) {
      std::set<std::string> expect;
      for (const auto& d : s.T)
        if (m[d.label][w]) expect.insert(d.var);
      EXPECT_EQ(available_vars(s, w), expect);
      for (const auto& u : labels(s))
        if (m[w][u])
          for (const auto& x : expect) EXPECT_TRUE(is_available(Term::var(x), s, u));
    }
  }
}

TEST(Substitution, WorkedExample) {
  Sequent s = S("R: w<u ; T: w:x, u:x, u:y ; w: p(x) |- u: forall y.q(x, y)");
  Signature sig;
  Sequent t = sequent_subst(s, parse_term("f(y, z)", sig), "x");
  Sequent expect = S("R: w<u ; T: w:y, w:z, u:y, u:z, u:y ; w: p(f(y, z)) |- u: forall x'.q(f(y, z), x')");
  EXPECT_EQ(t, expect) << to_string(t);
  EXPECT_EQ(t.count_dom("u", "y"), 2);
  ASSERT_EQ(t.D.size(), 1u);
  EXPECT_NE(t.D[0].f->name, "y");
}

TEST(Substitution, IdentityAndConstants) {
  Sequent s = S("R: w<u ; T: w:x, u:x, u:y ; w: p(x) |- u: forall y.q(x, y)");
  EXPECT_EQ(sequent_subst(s, Term::var("x"), "x"), s);
  Sequent c = sequent_subst(s, Term::app("a"), "x");
  EXPECT_EQ(c.T.size(), 1u);
  EXPECT_EQ(c.count_dom("u", "y"), 1);
  EXPECT_EQ(labels(c), labels(s));
}

TEST(Substitution, KeepsLabelsOfDomainAtoms) {
  Rng rng(9);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 300; ++i) {
    Sequent s = testkit::random_sequent(rng, sig, testkit::FuzzShape{4, 2, 2});
    Term t = testkit::random_term(rng, sig, {"x", "y"}, 2);
    Sequent r = sequent_subst(s, t, "x");
    std::set<Label> before, after;
    for (const auto& d : s.T)
      if (d.var != "x" || !vt(t).empty()) before.insert(d.label);
    for (const auto& d : r.T) after.insert(d.label);
    EXPECT_EQ(before, after);
    EXPECT_TRUE(validate(r).ok);
  }
}

TEST(Rename, LabelsAndVariables) {
  Sequent s = S("R: w<u ; T: u:x ; w: p(x) |- u: forall x.p(x)");
  Sequent r = rename_label(s, "u", "v");
  EXPECT_EQ(r, S("R: w<v ; T: v:x ; w: p(x) |- v: forall x.p(x)"));
  Sequent q = rename_var(s, "x", "y");
  EXPECT_EQ(q, S("R: w<u ; T: u:y ; w: p(y) |- u: forall x.p(x)"));
}

// Exhaustive bijection search as the reference for iso.
bool iso_by_search(const Sequent& a, const Sequent& b) {
  std::set<Label> sa = labels(a), sb = labels(b);
  std::vector<Label> la(sa.begin(), sa.end()), lb(sb.begin(), sb.end());
  if (la.size() != lb.size()) return false;
  std::sort(lb.begin(), lb.end());
  do {
    Sequent r = a;
    // Rename through temporaries so that overlapping names do not collide.
    for (std::size_t i = 0; i < la.size(); ++i) r = rename_label(r, la[i], "tmp" + std::to_string(i));
    for (std::size_t i = 0; i < la.size(); ++i) r = rename_label(r, "tmp" + std::to_string(i), lb[i]);
    if (r == b) return true;
  } while (std::next_permutation(lb.begin(), lb.end()));
  return false;
}

TEST(Iso, Examples) {
  Sequent s = S(kPolytreeExample);
  auto id = iso(s, s);
  ASSERT_TRUE(id);
  for (const auto& [a, b] : *id) EXPECT_EQ(a, b);
  Sequent t = rename_label(rename_label(rename_label(s, "w", "tmp"), "v", "w"), "tmp", "v");
  auto perm = iso(s, t);
  ASSERT_TRUE(perm);
  EXPECT_EQ(perm->at("w"), "v");
  EXPECT_EQ(perm->at("v"), "w");
  EXPECT_FALSE(iso(S("R: w<u, u<v ; |- v: p"), S("R: w<u, w<v ; |- v: p")));
}

TEST(Iso, AgreesWithExhaustiveSearch) {
  Rng rng(10);
  Signature sig = testkit::fuzz_signature();
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    testkit::FuzzShape shape{4, 2, 1};
    Sequent a = testkit::random_sequent(rng, sig, shape);
    Sequent b = i % 2 ? testkit::random_sequent(rng, sig, shape) : a;
    if (i % 4 == 0) {
      std::set<Label> sb = labels(b);
      std::vector<Label> ls(sb.begin(), sb.end());
      std::vector<Label> perm = ls;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t k = 0; k < ls.size(); ++k) b = rename_label(b, ls[k], "t" + std::to_string(k));
      for (std::size_t k = 0; k < ls.size(); ++k) b = rename_label(b, "t" + std::to_string(k), perm[k]);
    }
    auto m = iso(a, b);
    EXPECT_EQ(m.has_value(), iso_by_search(a, b)) << to_string(a) << "  vs  " << to_string(b);
    if (m) {
      ++found;
      Sequent r = a;
      for (const auto& [x, y] : *m) r = rename_label(r, x, "tmp_" + x);
      for (const auto& [x, y] : *m) r = rename_label(r, "tmp_" + x, y);
      EXPECT_EQ(r, b);
    }
  }
  EXPECT_GT(found, 100);
}

TEST(Fresh, LabelsAndVariables) {
  EXPECT_EQ(fresh_label({"w", "u1"}), "u2");
  EXPECT_EQ(fresh_label({"w"}, "v"), "v1");
  Sequent s = S("T: w:x ; w: p(y) |- w: forall x.p(x)");
  EXPECT_EQ(fresh_variable(s, "z"), "z");
  EXPECT_NE(fresh_variable(s, "x"), "x");
  EXPECT_NE(fresh_variable(s, "y"), "y");
}

TEST(Text, PrinterRoundTrips) {
  Rng rng(12);
  Signature sig = testkit::fuzz_signature();
  for (int i = 0; i < 300; ++i) {
    Sequent s = testkit::random_sequent(rng, sig, testkit::FuzzShape{4, 3, 2});
    std::string text = to_string(s);
    Signature s2 = sig;
    Sequent t = parse_sequent(text, s2, false);
    EXPECT_EQ(t, s);
    EXPECT_EQ(to_string(t), text);
  }
}

TEST(Multiset, CopiesAreCounted) {
  Sequent s = S("w: p, w: p |- w: q");
  EXPECT_EQ(s.count(Side::Left, LFormula("w", mk_atom("p"))), 2);
  EXPECT_TRUE(s.remove(Side::Left, LFormula("w", mk_atom("p"))));
  EXPECT_EQ(s.count(Side::Left, LFormula("w", mk_atom("p"))), 1);
  EXPECT_FALSE(s.remove(Side::Right, LFormula("w", mk_atom("p"))));
}

}  // namespace
}  // namespace lbiq
