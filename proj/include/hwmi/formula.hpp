#pragma once

#include <functional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "hwmi/atom.hpp"

namespace hwmi {

enum class FKind { False_, True_, BoolAtom, Constraint, Not, And, Or, Implies, Iff };

struct FNode {
    FKind kind;
    int var = -1;    // BoolAtom
    int atom = -1;   // Constraint (AtomTable id)
    std::vector<int> kids;
};

struct Assignment {
    std::vector<char> bools;   // indexed by var id (only Boolean slots used)
    std::vector<Rat> reals;    // indexed by var id
};

struct AssignmentD {
    std::vector<char> bools;
    std::vector<double> reals;
};

// Hash-consing factory: syntactically equal subtrees share one node id.
// Construction applies constant folding, flattening/sorting of And/Or
// children, complementary-child detection, and pushes negation into
// constraint leaves (the canonical complement atom).
class FormulaFactory {
public:
    FormulaFactory(const VariableRegistry& reg, AtomTable& atoms);

    int ffalse() const { return 0; }
    int ftrue() const { return 1; }
    int bool_atom(int var);
    int constraint(const NraAtom& raw);       // canonicalizes + interns
    int constraint_id(int atom_id);           // already-interned atom
    int negate(int f);
    int conj(std::vector<int> kids);
    int disj(std::vector<int> kids);
    int implies(int a, int b);
    int iff(int a, int b);

    const FNode& node(int f) const { return nodes_.at(f); }
    AtomTable& atoms() { return atoms_; }
    const VariableRegistry& registry() const { return reg_; }

    bool eval(int f, const Assignment& a) const;
    bool eval_d(int f, const AssignmentD& a) const;
    // Propositional evaluation; every Constraint leaf's truth value is
    // supplied per abstraction variable.
    bool eval_prop(int f, const std::vector<char>& bools) const;

    // All variable ids (Boolean and real) mentioned in f.
    const std::vector<int>& vars(int f);
    // Boolean variable ids only (valid for propositional formulas).
    std::vector<int> bool_vars(int f);

    // Substitute a Boolean variable by a constant; propositional only.
    int cofactor(int f, int var, bool value);

    std::string to_string(int f) const;

    bool is_literal(int f) const;
    // (var, polarity) of a propositional literal node.
    std::pair<int, bool> literal(int f) const;

    size_t node_count() const { return nodes_.size(); }

private:
    int make(FNode n);
    std::string key(const FNode& n) const;

    const VariableRegistry& reg_;
    AtomTable& atoms_;
    std::vector<FNode> nodes_;
    std::unordered_map<std::string, int> unique_;
    std::vector<std::vector<int>> vars_cache_;
    std::unordered_map<long long, int> cofactor_cache_;
};

} // namespace hwmi
