#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lbiq/calculus.hpp"
#include "lbiq/search.hpp"
#include "lbiq/semantics.hpp"
#include "lbiq/sequent.hpp"
#include "lbiq/syntax.hpp"
#include "lbiq/transform.hpp"

namespace lbiq::testkit {

using Rng = std::mt19937_64;

// p/1, q/0, f/1, constants a and b.
Signature fuzz_signature();

struct FuzzShape {
  int max_labels = 3;
  int max_formulas = 3;
  int formula_depth = 2;
  bool exclusion = true;
  bool quantifiers = true;
  double seed_pair = 0.8;  // probability of planting w:phi |- u:phi with w reaching u
};

Term random_term(Rng& rng, const Signature& sig, const std::vector<std::string>& vars, int depth);
Formula random_formula(Rng& rng, const Signature& sig, const std::vector<std::string>& vars, int depth,
                       bool exclusion = true, bool quantifiers = true);
// A random polytree: label i > 0 attaches to an earlier label in a random direction.
Sequent random_polytree(Rng& rng, int n);
Sequent random_sequent(Rng& rng, const Signature& sig, const FuzzShape& shape);

// Grows a proof of s bottom-up by random rule applications, closing with initial rules.
std::optional<Proof> grow_proof(Rng& rng, const Sequent& s, Variant v, int depth, const Signature& sig);
// Retries random_sequent/grow_proof until a proof of height at least min_height is found.
Proof random_proof(Rng& rng, Variant v, const FuzzShape& shape, int depth = 5, int min_height = 1);

// Fills an empty instantiation term with a random term allowed at the target label.
void fill_term(Rng& rng, RuleInstance& inst, const Sequent& s, Variant v, const Signature& sig);

// Applies inst to s and closes each premise with sub(i, premise).
Proof by(const Sequent& s, const RuleInstance& inst, Variant v,
         const std::function<Proof(std::size_t, const Sequent&)>& sub = {});
// A leaf closed by find_initial; throws if none applies.
Proof close(const Sequent& s);
RuleInstance ri(Rule r, const LFormula& principal, Label label = "", std::string var = "",
                std::optional<Term> term = std::nullopt);
LFormula lf(const Label& l, std::string_view formula);

// The CD proof of forall x.(p | r(x)) -> (p | (q -> forall x.r(x))).
Proof mixed_shift_proof();
// The ID proof of forall x.((p(x) -< exists y.p(y)) -> bot), which needs ds.
Proof ds_example_proof();

// Floyd-Warshall closure over the labels of s.
std::map<Label, std::map<Label, bool>> closure(const Sequent& s);

// The height-preserving transforms exercised by the admissibility suites.
enum class Hp { wv, id, iw, br_f, br_b, mrg, psub, ctr_l, ctr_r, lwr, lft, botR, topL };
const std::vector<Hp>& all_hp();
const char* hp_name(Hp k);

struct HpCase {
  Proof in;           // checking proof the transform is applied to
  Proof out;          // transform result
  Sequent expected;   // conclusion the schema prescribes, computed without the transform
  std::string params;
};

// Chooses legal parameters for k on p (preparing p with wv or iw where the schema needs a
// duplicate, a bottom or a top) and applies the transform. Empty when p admits no legal choice.
std::optional<HpCase> hp_case(Rng& rng, Hp k, const Proof& p, Variant v);

struct InvCase {
  RuleInstance inst;
  std::vector<Sequent> expected;  // premises of inst on p's conclusion
  std::vector<Proof> out;
};

// Picks a random invertible rule instance applicable to p's conclusion and inverts p. Empty
// when none applies.
std::optional<InvCase> inv_case(Rng& rng, const Proof& p, Variant v);

struct CutCase {
  std::string name;
  Proof proof;  // ends in a cut, premises cut-free
};

// Cut-bearing proofs: gax lemmas cut against each other and against fuzzed proofs, and
// principal-against-principal cuts for every connective. per_kind cases of each sort.
std::vector<CutCase> cut_corpus(Rng& rng, Variant v, int per_kind);

// The cut of left (ending in w:phi on the right) against right (ending in u:phi on the left).
Proof cut_of(const Proof& left, const Proof& right, const LFormula& cut, const Label& u, Variant v);

}  // namespace lbiq::testkit
