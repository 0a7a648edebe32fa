#pragma once

#include <map>
#include <string>
#include <vector>

#include "hwmi/atom.hpp"

namespace hwmi {

// [l] over a canonical atom.  A negated bracket is normalized at
// construction to the positive bracket of the complement atom, so after
// `make` the polarity flag is always positive; it is never expanded to
// 1 - [l].
struct IversonBracket {
    int atom = -1;
    bool negated = false;

    static IversonBracket make(AtomTable& atoms, int atom_id, bool negated) {
        if (negated) return {atoms.complement(atom_id), false};
        return {atom_id, false};
    }
    auto operator<=>(const IversonBracket&) const = default;
};

// coefficient * product of brackets * product of opaque symbols
struct Monomial {
    std::vector<int> brackets;         // sorted atom ids (deduped: [l][l]=[l])
    std::vector<std::string> symbols;  // sorted multiset

    auto operator<=>(const Monomial&) const = default;
};

// Canonical sum of monomials.  Zero coefficients are dropped; a monomial
// containing both [l] and [not l] is eliminated.
class AlgebraicExpr {
public:
    AlgebraicExpr() = default;

    static AlgebraicExpr constant(Rat c);
    static AlgebraicExpr bracket(AtomTable& atoms, int atom_id, bool negated = false);
    static AlgebraicExpr symbol(const std::string& name);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const;   // requires is_constant()

    const std::map<Monomial, Rat>& terms() const { return terms_; }

    bool operator==(const AlgebraicExpr& o) const { return terms_ == o.terms_; }

    std::vector<int> real_vars(const AtomTable& atoms) const;

    // Pointwise evaluation; symbols looked up in `symenv`.
    Rat eval(const AtomTable& atoms, const std::vector<Rat>& reals,
             const std::map<std::string, Rat>& symenv = {}) const;

    std::string to_string(const AtomTable& atoms) const;
    std::string to_json(const AtomTable& atoms) const;

    friend AlgebraicExpr expr_add(const AlgebraicExpr& a, const AlgebraicExpr& b);
    friend AlgebraicExpr expr_mul(AtomTable& atoms, const AlgebraicExpr& a, const AlgebraicExpr& b);
    friend AlgebraicExpr simplify_intervals(AtomTable& atoms, const AlgebraicExpr& e);
    friend AlgebraicExpr merge_complements(AtomTable& atoms, const AlgebraicExpr& e);

    void add_term(Monomial m, Rat c);   // merges, drops zero

private:
    std::map<Monomial, Rat> terms_;
};

AlgebraicExpr expr_add(const AlgebraicExpr& a, const AlgebraicExpr& b);
AlgebraicExpr expr_mul(AtomTable& atoms, const AlgebraicExpr& a, const AlgebraicExpr& b);

// Within each monomial, linear univariate brackets over one variable are
// intersected into at most one lower and one upper bound; empty
// intersections annihilate the monomial.  Everything else passes through.
AlgebraicExpr simplify_intervals(AtomTable& atoms, const AlgebraicExpr& e);

// Merges monomial pairs of equal coefficient that differ in exactly one
// complementary bracket: c[l]R + c[not l]R = cR.  Realizes the neutral sum
// [l] + [not l] = 1.
AlgebraicExpr merge_complements(AtomTable& atoms, const AlgebraicExpr& e);

// Is `atom` of the form (+-x cmp c) with power 1?
bool linear_univariate(const NraAtom& atom);

} // namespace hwmi
