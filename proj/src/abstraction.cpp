#include "hwmi/abstraction.hpp"

#include <algorithm>

namespace hwmi {

int AbstractionMap::representative(AtomTable& atoms, int atom_id, bool& positive) {
    const NraAtom& a = atoms.at(atom_id);
    bool is_rep;
    switch (a.cmp) {
        case Cmp::Lt:
        case Cmp::Le: is_rep = a.terms.front().coef > 0; break;
        case Cmp::Eq: is_rep = true; break;
        default: is_rep = false; break;
    }
    positive = is_rep;
    return is_rep ? atom_id : atoms.complement(atom_id);
}

int AbstractionMap::var_for(AtomTable& atoms, VariableRegistry& reg, int rep_atom_id) {
    auto it = atom_to_var_.find(rep_atom_id);
    if (it != atom_to_var_.end()) return it->second;
    std::string name = "[" + atoms.str(rep_atom_id) + "]";
    name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
    // separately built maps over one registry agree on variable ids
    int var = reg.find(name);
    if (var < 0) var = reg.add(name, VarKind::Boolean);
    atom_to_var_.emplace(rep_atom_id, var);
    var_to_atom_.emplace(var, rep_atom_id);
    return var;
}

static int abstract_rec(FormulaFactory& fac, int f, VariableRegistry& reg, AbstractionMap& map,
                        std::unordered_map<int, int>& memo) {
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    const FNode& n = fac.node(f);
    int r;
    switch (n.kind) {
        case FKind::False_:
        case FKind::True_:
        case FKind::BoolAtom: r = f; break;
        case FKind::Constraint: {
            bool positive;
            int rep = AbstractionMap::representative(fac.atoms(), n.atom, positive);
            int v = map.var_for(fac.atoms(), reg, rep);
            int lit = fac.bool_atom(v);
            r = positive ? lit : fac.negate(lit);
            break;
        }
        case FKind::Not: r = fac.negate(abstract_rec(fac, n.kids[0], reg, map, memo)); break;
        case FKind::And:
        case FKind::Or: {
            std::vector<int> kids;
            for (int k : n.kids) kids.push_back(abstract_rec(fac, k, reg, map, memo));
            r = n.kind == FKind::And ? fac.conj(std::move(kids)) : fac.disj(std::move(kids));
            break;
        }
        case FKind::Implies:
            r = fac.implies(abstract_rec(fac, n.kids[0], reg, map, memo),
                            abstract_rec(fac, n.kids[1], reg, map, memo));
            break;
        case FKind::Iff:
            r = fac.iff(abstract_rec(fac, n.kids[0], reg, map, memo),
                        abstract_rec(fac, n.kids[1], reg, map, memo));
            break;
        default: r = f; break;
    }
    memo.emplace(f, r);
    return r;
}

int abstract(FormulaFactory& fac, int f, VariableRegistry& reg, AbstractionMap& map) {
    std::unordered_map<int, int> memo;
    return abstract_rec(fac, f, reg, map, memo);
}

static int concretize_rec(FormulaFactory& fac, int f, const AbstractionMap& map,
                          std::unordered_map<int, int>& memo) {
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
    const FNode& n = fac.node(f);
    int r;
    switch (n.kind) {
        case FKind::BoolAtom:
            r = map.has_var(n.var) ? fac.constraint_id(map.atom_of(n.var)) : f;
            break;
        case FKind::Not: r = fac.negate(concretize_rec(fac, n.kids[0], map, memo)); break;
        case FKind::And:
        case FKind::Or: {
            std::vector<int> kids;
            for (int k : n.kids) kids.push_back(concretize_rec(fac, k, map, memo));
            r = n.kind == FKind::And ? fac.conj(std::move(kids)) : fac.disj(std::move(kids));
            break;
        }
        case FKind::Implies:
            r = fac.implies(concretize_rec(fac, n.kids[0], map, memo),
                            concretize_rec(fac, n.kids[1], map, memo));
            break;
        case FKind::Iff:
            r = fac.iff(concretize_rec(fac, n.kids[0], map, memo),
                        concretize_rec(fac, n.kids[1], map, memo));
            break;
        default: r = f; break;
    }
    memo.emplace(f, r);
    return r;
}

int concretize(FormulaFactory& fac, int f, const AbstractionMap& map) {
    std::unordered_map<int, int> memo;
    return concretize_rec(fac, f, map, memo);
}

} // namespace hwmi
