#include "lbiq/interp.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace lbiq {

namespace {

std::map<Label, int> in_degrees(const Sequent& s) {
  std::map<Label, int> in;
  for (const auto& l : labels(s)) in[l] = 0;
  for (const auto& r : s.R) in[r.to]++;
  return in;
}

bool tree_rooted(const Sequent& s) {
  if (!validate(s).ok) return false;
  int roots = 0;
  for (const auto& [l, d] : in_degrees(s)) {
    if (d > 1) return false;
    if (d == 0) ++roots;
  }
  return roots == 1;
}

Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return mk_top();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = mk_and(out, fs[i]);
  return out;
}

Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return mk_bot();
  Formula out = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) out = mk_or(out, fs[i]);
  return out;
}

Formula close_over(const std::set<std::string>& xs, Formula body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = mk_forall(*it, body);
  return body;
}

Formula interp_at(const Sequent& s, const Label& u) {
  std::set<std::string> xs;
  for (const auto& d : s.T)
    if (d.label == u) xs.insert(d.var);
  std::vector<Formula> gamma, delta;
  for (const auto& lf : s.G)
    if (lf.label == u) gamma.push_back(lf.f);
  for (const auto& lf : s.D)
    if (lf.label == u) delta.push_back(lf.f);
  std::set<Label> succ;
  for (const auto& r : s.R)
    if (r.from == u) succ.insert(r.to);
  if (succ.empty()) return close_over(xs, mk_impl(conj(gamma), disj(delta)));
  std::vector<Formula> parts{disj(delta)};
  for (const auto& w : succ) parts.push_back(interp_at(s, w));
  return close_over(xs, mk_impl(conj(gamma), disj(parts)));
}

}  // namespace

IntSequentReport classify(const Sequent& s) {
  IntSequentReport r;
  r.is_tree_rooted = tree_rooted(s);
  r.exclusion_free = true;
  for (const auto* side : {&s.G, &s.D})
    for (const auto& lf : *side)
      if (has_exclusion(lf.f)) r.exclusion_free = false;
  std::set<std::string> in_t;
  for (const auto& d : s.T) in_t.insert(d.var);
  r.vars_available = true;
  bool relaxed = true;
  if (validate(s).ok) {
    for (const auto* side : {&s.G, &s.D})
      for (const auto& lf : *side) {
        auto xw = available_vars(s, lf.label);
        for (const auto& x : free_vars(lf.f)) {
          if (xw.count(x)) continue;
          r.vars_available = false;
          if (in_t.count(x)) relaxed = false;
        }
      }
  } else {
    r.vars_available = relaxed = false;
  }
  std::map<std::string, Label> home;
  r.domain_atoms_unique = true;
  for (const auto& d : s.T) {
    auto [it, fresh] = home.emplace(d.var, d.label);
    if (!fresh && it->second != d.label) r.domain_atoms_unique = false;
  }
  r.quasi = r.is_tree_rooted && r.exclusion_free && relaxed && r.domain_atoms_unique;
  return r;
}

Label root_of(const Sequent& s) {
  if (!tree_rooted(s)) throw std::invalid_argument("sequent is not a rooted tree");
  if (s.R.empty()) return *labels(s).begin();
  for (const auto& [l, d] : in_degrees(s))
    if (d == 0) return l;
  throw std::invalid_argument("sequent has no root");
}

Formula formula_interpretation(const Sequent& s) {
  if (!classify(s).quasi) throw std::invalid_argument("sequent is not quasi-intuitionistic");
  return interp_at(s, root_of(s));
}

}  // namespace lbiq
