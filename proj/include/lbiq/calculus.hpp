#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lbiq/sequent.hpp"

namespace lbiq {

enum class Variant { ID, CD, IDNoDs };

enum class Rule {
  ax, botL, topR, ds, andL, andR, orL, orR, implL, implR, exclL, exclR,
  existsL, existsR, forallL, forallR, cut
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view s);
const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view s);

// Side on which the principal formula of r lives.
Side principal_side(Rule r);
int arity(Rule r);
bool creates_label(Rule r);  // implR, exclL, forallR
bool creates_var(Rule r);    // existsL, forallR

struct RuleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The principal is addressed by value: any copy of an alpha-equal labeled formula on the rule's
// side. For ax it is the antecedent atom and label names the succedent copy; for cut it is the
// cut formula w:phi of the left premise and label is u of the right premise.
struct RuleInstance {
  Rule rule = Rule::ax;
  std::optional<LFormula> principal;
  Label label;              // fresh label, or second label
  std::string var;          // fresh variable
  std::optional<Term> term; // instantiation term
};

std::string to_string(const RuleInstance& r);

struct Proof {
  Sequent concl;
  RuleInstance inst;
  std::vector<Proof> prem;

  int height() const;
  std::size_t size() const;
};

bool has_cut(const Proof& p);
// Multiset of rule names, e.g. {"ax":2, "orL":1}.
std::map<std::string, int> rule_counts(const Proof& p);

// Premises of inst applied bottom-up to s. Throws RuleError on a side-condition violation.
std::vector<Sequent> premises(const Sequent& s, const RuleInstance& inst, Variant v);

struct CheckResult {
  bool ok = true;
  std::string path;  // "root/0/1" style address of the first failing node
  std::string message;
};

CheckResult check_proof(const Proof& p, Variant v, bool allow_cut = false);

// Every schema instance whose side conditions hold. Fresh labels and variables are filled in
// deterministically; quantifier instantiation terms are left empty.
std::vector<RuleInstance> applicable(const Sequent& s, Variant v);

// A closing instance (ax, botL or topR) for s, if any.
std::optional<RuleInstance> find_initial(const Sequent& s);

std::string serialize(const Proof& p, const Signature& sig);
std::string serialize(const Proof& p);
Proof parse_proof(std::string_view text, Signature& sig);
Proof parse_proof(std::string_view text);

}  // namespace lbiq
