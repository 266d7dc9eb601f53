#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lbiq/calculus.hpp"
#include "lbiq/semantics.hpp"

namespace lbiq {

struct SearchConfig {
  Variant variant = Variant::ID;
  int max_rounds = 6;
  int max_term_depth = 2;
  // Drops (ds) and the exclusion rules: the intuitionistic subsystem.
  bool intuitionistic_only = false;
  // Rule applications per search; exceeding it yields Exhausted.
  std::size_t node_budget = 200000;
  int jobs = 1;
  // Removes inferences whose active formulas the proof above never uses.
  bool prune = true;
};

// Term order: depth, then constants before variables before applications, then name, then arguments.
bool term_less(const Term& a, const Term& b);

struct Branch {
  Sequent current;
  std::vector<std::string> history;  // applied (rule, principal, witness) records in order
  bool open = true;
  bool saturated = false;
};

struct CandidateModel {
  FiniteModel model;
  Interpretation iota;
  Assignment alpha;
  int depth = 0;          // term universe truncated at this depth
  bool verified = false;  // the truncated model passes check_model and falsifies the goal
  std::string note;
};

struct SearchStats {
  std::size_t nodes = 0;
  int rounds = 0;
  std::size_t open_branches = 0;
  std::string reason;
};

enum class Status { Proved, Refuted, Exhausted };
const char* status_name(Status s);

struct SearchOutcome {
  Status status = Status::Exhausted;
  std::optional<Proof> proof;
  std::optional<Branch> branch;
  std::optional<CandidateModel> model;
  SearchStats stats;
  std::vector<std::string> warnings;
};

SearchOutcome prove(const Sequent& goal, const SearchConfig& cfg);
// The goal |- w:phi, with the free variables of phi declared at w.
Sequent goal_of(const Formula& phi, const Label& w = "w");

// Term model of an open branch, truncated at depth. Throws std::invalid_argument when b is not
// saturated.
CandidateModel extract_model(const Branch& b, const Sequent& goal, Variant v, int depth);

// Machine-readable one-line statistics record.
std::string stats_record(const SearchOutcome& o);

}  // namespace lbiq
