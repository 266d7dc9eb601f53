#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lbiq/calculus.hpp"

namespace lbiq {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every transform takes a checking proof and returns a checking proof of the schema's
// conclusion whose height does not exceed the input's (gax and the cut eliminators excepted).

// (iw) adds sigma to every antecedent and pi to every succedent.
Proof weaken(const Proof& p, const std::vector<LFormula>& sigma, const std::vector<LFormula>& pi, Variant v);
// (wv) adds the domain atom w:x.
Proof weaken_var(const Proof& p, const Label& w, const std::string& x, Variant v);
// (id) removes one copy of u:x, given w:x with w reaching u.
Proof drop_domain_atom(const Proof& p, const Label& w, const Label& u, const std::string& x, Variant v);
// (cd) removes the domain atom w:x; legal only under CD.
Proof drop_domain_var(const Proof& p, const Label& w, const std::string& x, Variant v);
// (t/x) substitutes t for x in T, Gamma and Delta.
Proof subst_proof(const Proof& p, const Term& t, const std::string& x, Variant v);
// (br_f) replaces wRv with uRv, given w reaching u, u not reaching v and v not reaching u.
Proof branch_forward(const Proof& p, const Label& w, const Label& v, const Label& u, Variant var);
// (br_b) replaces vRu with vRw, given w reaching u and w not reaching v.
Proof branch_backward(const Proof& p, const Label& v, const Label& u, const Label& w, Variant var);
// (mrg) deletes wRu and renames u to w.
Proof merge(const Proof& p, const Label& w, const Label& u, Variant v);
// (ctr_l)/(ctr_r) removes one of two copies of lf on the given side.
Proof contract(const Proof& p, Side side, const LFormula& lf, Variant v);
// (lwr) moves the succedent formulas w:pi to u, given w reaching u.
Proof lower(const Proof& p, const Label& w, const Label& u, const std::vector<Formula>& pi, Variant v);
// (lft) moves the antecedent formulas u:sigma to w, given w reaching u.
Proof lift(const Proof& p, const Label& u, const Label& w, const std::vector<Formula>& sigma, Variant v);
// (botR) removes w:bot from the succedent; (topL) removes w:top from the antecedent.
Proof drop_bot_right(const Proof& p, const Label& w, Variant v);
Proof drop_top_left(const Proof& p, const Label& w, Variant v);

// (gax) a cut-free proof of s, R,T,Gamma,w:phi |- u:phi,Delta, with w reaching u.
Proof derive_gax(const Sequent& s, const LFormula& left, const Label& u, Variant v);

// Proofs of each premise of inst applied to p's conclusion, each no higher than p.
std::vector<Proof> invert(const Proof& p, const RuleInstance& inst, Variant v);

struct CutStats {
  std::size_t calls = 0;           // eliminate_cut invocations
  std::size_t measure_checks = 0;  // recursive calls whose measure decrease was asserted
  std::size_t max_complexity = 0;
};

// A cut-free proof of the conclusion of the cut of left (ending in w:phi on the right) against
// right (ending in u:phi on the left).
Proof eliminate_cut(const Proof& left, const Proof& right, const LFormula& cut, const Label& u, Variant v,
                    CutStats* stats = nullptr);
// Removes every cut, innermost first.
Proof eliminate_all_cuts(const Proof& p, Variant v, CutStats* stats = nullptr);

// Applies f to every sequent of p bottom-up. Eigen-labels and eigenvariables introduced inside p
// that clash with avoid_labels/avoid_vars are renamed first. Leaves are re-closed with any
// initial instance and premises are required to match the rule again.
Proof map_proof(const Proof& p, const std::function<Sequent(const Sequent&)>& f, const std::set<Label>& avoid_labels,
                const std::set<std::string>& avoid_vars, Variant v);

// All labels and variables occurring anywhere in p.
std::set<Label> proof_labels(const Proof& p);
std::set<std::string> proof_vars(const Proof& p);

}  // namespace lbiq
