#pragma once

#include <vector>

#include "hwmi/rational.hpp"
#include "hwmi/registry.hpp"

namespace hwmi {

enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };

const char* cmp_to_string(Cmp c);

struct AtomTerm {
    Rat coef;
    int var = -1;
    Rat power{1};

    bool operator==(const AtomTerm& o) const {
        return var == o.var && coef == o.coef && power == o.power;
    }
};

// sum_i c_i * x_i^{p_i}  cmp  bound.  Powers are positive rationals.
struct NraAtom {
    std::vector<AtomTerm> terms;
    Cmp cmp = Cmp::Le;
    Rat bound;

    bool operator==(const NraAtom& o) const {
        return cmp == o.cmp && bound == o.bound && terms == o.terms;
    }

    bool linear() const {
        for (const auto& t : terms)
            if (t.power != 1) return false;
        return true;
    }

    bool univariate() const {
        if (terms.empty()) return false;
        for (const auto& t : terms)
            if (t.var != terms.front().var) return false;
        return terms.size() == 1;
    }
};

// Canonical form: terms merged and sorted by (variable name, power), zero
// coefficients dropped, scaled so the leading coefficient is +-1, and only
// {<, <=, =, !=} comparators remain (>,>= are turned into <,<= by negating
// both sides).  Canonically equal atoms compare equal with operator==.
NraAtom canonicalize(const NraAtom& a, const VariableRegistry& reg);

// Canonical atom equivalent to the negation of a canonical atom.
NraAtom complement_atom(const NraAtom& canonical, const VariableRegistry& reg);

bool atom_holds(const NraAtom& a, const std::vector<Rat>& reals);
bool atom_holds_d(const NraAtom& a, const std::vector<double>& reals);

// Renders with a positive leading coefficient, e.g. "t > 20".
std::string atom_to_string(const NraAtom& a, const VariableRegistry& reg);

std::vector<int> atom_vars(const NraAtom& a);

// Interns canonical atoms so equality is pointer/index identity.
class AtomTable {
public:
    explicit AtomTable(const VariableRegistry& reg) : reg_(reg) {}

    int intern(const NraAtom& raw);
    // Id of the canonical complement of atom `id`.
    int complement(int id);
    // atom_holds_d via a cached double view (hot path of samplers).
    bool holds_d(int id, const std::vector<double>& reals) const;
    const NraAtom& at(int id) const { return atoms_.at(id); }
    const std::vector<int>& vars(int id) const { return varsets_.at(id); }
    std::string str(int id) const { return atom_to_string(atoms_.at(id), reg_); }
    int size() const { return static_cast<int>(atoms_.size()); }
    const VariableRegistry& registry() const { return reg_; }

private:
    struct TermD {
        double coef;
        int var;
        double power;
    };
    struct AtomD {
        std::vector<TermD> terms;
        double bound;
        Cmp cmp;
    };

    const VariableRegistry& reg_;
    std::vector<NraAtom> atoms_;
    std::vector<AtomD> atoms_d_;        // double view, parallel to atoms_
    std::vector<int> complements_;      // -1 until first requested
    std::vector<std::vector<int>> varsets_;
    std::unordered_map<std::string, int> by_key_;
};

} // namespace hwmi
