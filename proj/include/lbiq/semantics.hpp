#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lbiq/calculus.hpp"

namespace lbiq {

// A finite Kripke model. Worlds and universe elements are indices; names are for printing.
struct FiniteModel {
  std::vector<std::string> worlds;
  std::vector<std::vector<char>> leq;  // leq[w][u]: w <= u
  std::vector<std::string> universe;
  std::vector<std::vector<char>> dom;  // dom[w][a]: a in D(w)
  std::map<std::string, int> fun_arity;
  std::map<std::string, std::vector<int>> fun;  // tuple index -> element
  std::map<std::string, int> pred_arity;
  std::map<std::string, std::vector<std::vector<char>>> pred;  // pred[p][w][tuple index]

  int nw() const { return static_cast<int>(worlds.size()); }
  int nu() const { return static_cast<int>(universe.size()); }
  int tuple_index(const std::vector<int>& args) const;
  std::vector<int> tuple_of(int index, int arity) const;
  int tuple_count(int arity) const;
};

// Missing variables default to element 0, which makes the map total.
using Assignment = std::map<std::string, int>;
using Interpretation = std::map<Label, int>;

struct ModelCheck {
  bool ok = true;
  std::string violation;
};

ModelCheck check_model(const FiniteModel& m, Variant v);
int eval_term(const FiniteModel& m, const Assignment& a, const Term& t);
bool eval_formula(const FiniteModel& m, int w, const Assignment& a, const Formula& f);
bool eval_sequent(const FiniteModel& m, const Interpretation& i, const Assignment& a, const Sequent& s);

struct Falsifier {
  Interpretation iota;
  Assignment alpha;
};

// Searches all interpretations and assignments for one that falsifies s.
std::optional<Falsifier> falsify(const FiniteModel& m, const Sequent& s);

struct Bounds {
  int worlds = 2;
  int universe = 2;
};

struct Countermodel {
  FiniteModel model;
  Interpretation iota;
  Assignment alpha;
};

// Exhaustive search in a fixed canonical order: world count, universe size, frame, tables.
// jobs > 1 splits each frame's table space across OpenMP threads; the answer is the same as
// the serial one because the lowest falsifying index wins.
std::optional<Countermodel> find_countermodel(const Sequent& s, Bounds b, Variant v, int jobs = 1);
std::optional<Countermodel> find_countermodel_serial(const Sequent& s, Bounds b, Variant v);

// Number of candidate models find_countermodel would visit without early exit.
std::uint64_t count_models(const Signature& sig, Bounds b, Variant v);

// A random well-formed model over sig with 1..max_w worlds and 1..max_u elements.
FiniteModel random_model(const Signature& sig, Variant v, int max_w, int max_u, std::mt19937_64& rng);

// All preorders on n elements, in a fixed order.
const std::vector<std::vector<std::vector<char>>>& preorders(int n);

std::string to_string(const FiniteModel& m);
std::string to_string(const Countermodel& c, const Sequent& s);
FiniteModel parse_model(std::string_view text);

}  // namespace lbiq
