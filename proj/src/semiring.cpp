#include "hwmi/semiring.hpp"

#include <sstream>

namespace hwmi {

SemiringElement SemiringElement::make(const AtomTable& atoms, AlgebraicExpr e,
                                      std::set<int> b) {
    if (b.empty()) return {std::move(e), {}};
    std::vector<int> used = e.real_vars(atoms);
    std::set<int> pruned;
    for (int v : b)
        if (std::binary_search(used.begin(), used.end(), v)) pruned.insert(v);
    return {std::move(e), std::move(pruned)};
}

std::string SemiringElement::to_string(const AtomTable& atoms,
                                       const VariableRegistry& reg) const {
    std::ostringstream os;
    os << "(" << expr.to_string(atoms) << ", {";
    bool first = true;
    for (int v : bindings) {
        if (!first) os << ", ";
        os << reg.name(v);
        first = false;
    }
    os << "})";
    return os.str();
}

DensitySemiring::Value DensitySemiring::plus(const Value& a, const Value& b) const {
    dl_.check();
    std::set<int> u = a.bindings;
    u.insert(b.bindings.begin(), b.bindings.end());
    return SemiringElement::make(atoms_, expr_add(a.expr, b.expr), std::move(u));
}

DensitySemiring::Value DensitySemiring::times(const Value& a, const Value& b) const {
    dl_.check();
    std::set<int> u = a.bindings;
    u.insert(b.bindings.begin(), b.bindings.end());
    return SemiringElement::make(atoms_, expr_mul(atoms_, a.expr, b.expr), std::move(u));
}

DensitySemiring::Value DensitySemiring::label(int var, bool pos) const {
    if (map_.has_var(var)) {
        int atom = map_.atom_of(var);
        AlgebraicExpr e = AlgebraicExpr::bracket(atoms_, atom, !pos);
        std::set<int> b;
        for (int v : atoms_.vars(atom))
            if (!weights_.entries_for(v).empty()) b.insert(v);
        return SemiringElement::make(atoms_, std::move(e), std::move(b));
    }
    Rat p = weights_.bool_weight(var);
    return {AlgebraicExpr::constant(pos ? p : 1 - p), {}};
}

DensitySemiring::Value DensitySemiring::simplify(Value v) const {
    return SemiringElement::make(
        atoms_, merge_complements(atoms_, simplify_intervals(atoms_, v.expr)),
        std::move(v.bindings));
}

} // namespace hwmi
