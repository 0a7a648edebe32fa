#pragma once

#include <unordered_map>

#include "hwmi/formula.hpp"

namespace hwmi {

// Bijection between canonical atoms and fresh propositional variables.
// An atom and its complement share one variable with opposite polarities,
// so negation closure is explicit at the literal level.
class AbstractionMap {
public:
    // Representative of the {atom, complement} pair: the <,<=,= side.
    static int representative(AtomTable& atoms, int atom_id, bool& positive);

    int var_for(AtomTable& atoms, VariableRegistry& reg, int rep_atom_id);

    bool has_var(int var) const { return var_to_atom_.count(var) != 0; }
    int atom_of(int var) const { return var_to_atom_.at(var); }
    const std::unordered_map<int, int>& entries() const { return atom_to_var_; }

private:
    std::unordered_map<int, int> atom_to_var_;
    std::unordered_map<int, int> var_to_atom_;
};

// Replaces every constraint leaf by its abstraction literal.  The result is
// purely propositional over the original Boolean variables plus the map's
// fresh variables.
int abstract(FormulaFactory& fac, int f, VariableRegistry& reg, AbstractionMap& map);

// Inverse: abstraction literals back to constraint leaves.
int concretize(FormulaFactory& fac, int f, const AbstractionMap& map);

} // namespace hwmi
