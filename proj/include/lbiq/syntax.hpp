#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lbiq {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos(pos) {}
  std::size_t pos;
};

// Function and predicate symbols with their arities. Arity-0 functions are constants.
struct Signature {
  std::map<std::string, int> functions;
  std::map<std::string, int> predicates;

  bool is_constant(const std::string& name) const;
  std::vector<std::string> constants() const;
  // Adds every symbol of other; throws std::invalid_argument on an arity clash.
  void merge(const Signature& other);
};

struct Term {
  bool is_var = true;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string name);
  static Term app(std::string fn, std::vector<Term> args = {});

  bool is_constant() const { return !is_var && args.empty(); }
  int depth() const;
};

bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }
// Structural order; used for multiset sorting only.
bool operator<(const Term& a, const Term& b);

enum class Kind { Atom, Bot, Top, And, Or, Impl, Excl, Exists, Forall };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Kind kind;
  std::string name;        // predicate, or bound variable of a quantifier
  std::vector<Term> args;  // atom arguments
  Formula lhs, rhs;        // binary operands; a quantifier body sits in lhs
};

Formula mk_atom(std::string pred, std::vector<Term> args = {});
Formula mk_bot();
Formula mk_top();
Formula mk_bin(Kind k, Formula a, Formula b);
Formula mk_quant(Kind k, std::string var, Formula body);
inline Formula mk_and(Formula a, Formula b) { return mk_bin(Kind::And, std::move(a), std::move(b)); }
inline Formula mk_or(Formula a, Formula b) { return mk_bin(Kind::Or, std::move(a), std::move(b)); }
inline Formula mk_impl(Formula a, Formula b) { return mk_bin(Kind::Impl, std::move(a), std::move(b)); }
inline Formula mk_excl(Formula a, Formula b) { return mk_bin(Kind::Excl, std::move(a), std::move(b)); }
inline Formula mk_exists(std::string x, Formula b) { return mk_quant(Kind::Exists, std::move(x), std::move(b)); }
inline Formula mk_forall(std::string x, Formula b) { return mk_quant(Kind::Forall, std::move(x), std::move(b)); }

bool is_binary(Kind k);
bool is_quantifier(Kind k);

std::set<std::string> vt(const Term& t);
std::set<std::string> vt(const std::vector<Term>& ts);
std::set<std::string> free_vars(const Formula& f);
// Free and bound variable names; used to pick names that clash with nothing.
std::set<std::string> all_vars(const Formula& f);
// Function symbols (with arity) and predicates occurring in f.
Signature signature_of(const Formula& f);

int complexity(const Formula& f);
bool has_exclusion(const Formula& f);

// x'1, x'2, ... : the first name derived from base that is not in avoid.
std::string fresh_var(const std::string& base, const std::set<std::string>& avoid);

Term subst(const Term& s, const Term& t, const std::string& x);
// Capture-avoiding f(t/x). Bound variables are renamed only when capture would occur.
Formula subst(const Formula& f, const Term& t, const std::string& x);

// Canonical string with bound variables replaced by binder indices: equal keys iff alpha-equivalent.
std::string alpha_key(const Formula& f);
bool alpha_equal(const Formula& a, const Formula& b);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);

// Parses the ASCII grammar. With extend set, unknown predicate and function symbols are added to
// sig; otherwise they are errors. Bare identifiers in term position are variables unless sig
// declares them as constants; `c()` declares a constant explicitly.
Formula parse_formula(std::string_view text, Signature& sig, bool extend = true);
Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text, Signature& sig, bool extend = true);

}  // namespace lbiq
