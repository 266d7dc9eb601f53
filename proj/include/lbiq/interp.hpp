#pragma once

#include <stdexcept>

#include "lbiq/sequent.hpp"

namespace lbiq {

struct IntSequentReport {
  bool is_tree_rooted = false;       // R is a tree with a unique root
  bool exclusion_free = false;       // no formula mentions -<
  bool vars_available = false;       // every free variable of w:phi is available at w
  bool domain_atoms_unique = false;  // w:x and z:x in T imply w = z
  bool quasi = false;                // as intuitionistic, with x available at w or absent from T

  bool intuitionistic() const { return is_tree_rooted && exclusion_free && vars_available && domain_atoms_unique; }
};

IntSequentReport classify(const Sequent& s);

// The root label of a tree-shaped sequent. Throws std::invalid_argument otherwise.
Label root_of(const Sequent& s);

// F(S) for a quasi-intuitionistic sequent. Throws std::invalid_argument otherwise.
Formula formula_interpretation(const Sequent& s);

}  // namespace lbiq
