#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lbiq/syntax.hpp"

namespace lbiq {

using Label = std::string;

struct RelAtom {
  Label from, to;  // from R to
};

struct DomAtom {
  Label label;
  std::string var;
};

bool operator==(const RelAtom& a, const RelAtom& b);
bool operator<(const RelAtom& a, const RelAtom& b);
bool operator==(const DomAtom& a, const DomAtom& b);
bool operator<(const DomAtom& a, const DomAtom& b);

// A labeled formula w:phi. key caches the alpha-normal form, so equality is alpha-equivalence.
struct LFormula {
  LFormula() = default;
  LFormula(Label l, Formula f);

  Label label;
  Formula f;
  std::string key;
  std::string text;
};

bool operator==(const LFormula& a, const LFormula& b);
bool operator<(const LFormula& a, const LFormula& b);
std::string to_string(const LFormula& lf);

enum class Side { Left, Right };

// R, T, Gamma |- Delta. All four multisets are kept sorted; call normalize() after raw edits.
struct Sequent {
  std::vector<RelAtom> R;
  std::vector<DomAtom> T;
  std::vector<LFormula> G;
  std::vector<LFormula> D;

  void normalize();
  std::vector<LFormula>& side(Side s) { return s == Side::Left ? G : D; }
  const std::vector<LFormula>& side(Side s) const { return s == Side::Left ? G : D; }

  // Multiset edits; they keep the sorted order.
  void add(Side s, const LFormula& lf);
  bool remove(Side s, const LFormula& lf);  // one copy
  int count(Side s, const LFormula& lf) const;
  bool contains(Side s, const LFormula& lf) const { return count(s, lf) > 0; }
  void add_rel(const Label& from, const Label& to);
  bool remove_rel(const Label& from, const Label& to);
  void add_dom(const Label& l, const std::string& x);
  bool remove_dom(const Label& l, const std::string& x);  // one copy
  int count_dom(const Label& l, const std::string& x) const;
};

bool operator==(const Sequent& a, const Sequent& b);
inline bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }

std::set<Label> labels(const Sequent& s);
// Free variables of all formulas plus the variables of T.
std::set<std::string> vars(const Sequent& s);
Signature signature_of(const Sequent& s);

struct Validation {
  bool ok = true;
  std::string message;
};

Validation validate(const Sequent& s);

// Reachability over a multiset of relational atoms. Reach is a precomputed closure.
bool strictly_reachable(const std::vector<RelAtom>& R, const Label& w, const Label& u);
bool reachable(const std::vector<RelAtom>& R, const Label& w, const Label& u);

class Reach {
 public:
  explicit Reach(const Sequent& s);
  bool reachable(const Label& w, const Label& u) const;
  // All labels reachable from w (w included).
  std::vector<Label> from(const Label& w) const;
  // All labels from which u is reachable (u included).
  std::vector<Label> to(const Label& u) const;
  const std::vector<Label>& labels() const { return labels_; }
  // Labels on some directed path from w to u, endpoints included; empty when unreachable.
  std::vector<Label> path(const Label& w, const Label& u) const;

 private:
  int index(const Label& l) const;
  std::vector<Label> labels_;
  std::vector<std::vector<bool>> m_;
  std::vector<std::vector<int>> succ_;
};

// X_w. Throws std::invalid_argument for an unknown label.
std::set<std::string> available_vars(const Sequent& s, const Label& w);
bool is_available(const Term& t, const Sequent& s, const Label& w);

Sequent sequent_subst(const Sequent& s, const Term& t, const std::string& x);
Sequent rename_label(const Sequent& s, const Label& from, const Label& to);
Sequent rename_var(const Sequent& s, const std::string& from, const std::string& to);

// A label bijection mapping s1 onto s2 exactly, if one exists.
std::optional<std::map<Label, Label>> iso(const Sequent& s1, const Sequent& s2);

// First label of the series u1, u2, ... absent from avoid.
Label fresh_label(const std::set<Label>& avoid, const std::string& stem = "u");
std::string fresh_variable(const Sequent& s, const std::string& base);

std::string to_string(const Sequent& s);
Sequent parse_sequent(std::string_view text, Signature& sig, bool extend = true);
Sequent parse_sequent(std::string_view text);

}  // namespace lbiq
