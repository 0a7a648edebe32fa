#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hwmi/expr.hpp"
#include "hwmi/semiring.hpp"

using namespace hwmi;

namespace {

struct Fixture {
    VariableRegistry reg;
    AtomTable atoms{reg};
    int x, y;
    Fixture() {
        x = reg.add("x", VarKind::Real);
        y = reg.add("y", VarKind::Real);
    }
    int lt(int v, int b) { return atoms.intern({{{Rat(1), v, Rat(1)}}, Cmp::Lt, Rat(b)}); }
    int gt(int v, int b) { return atoms.intern({{{Rat(1), v, Rat(1)}}, Cmp::Gt, Rat(b)}); }
};

} // namespace

TEST_CASE("negated bracket normalizes to the complement atom") {
    Fixture f;
    int a = f.lt(f.x, 3);
    AlgebraicExpr neg = AlgebraicExpr::bracket(f.atoms, a, true);
    AlgebraicExpr pos = AlgebraicExpr::bracket(f.atoms, f.atoms.complement(a), false);
    CHECK(neg == pos);
}

TEST_CASE("expr_add merges and cancels") {
    Fixture f;
    AlgebraicExpr a = AlgebraicExpr::bracket(f.atoms, f.lt(f.x, 3));
    AlgebraicExpr sum = expr_add(a, a);
    REQUIRE(sum.terms().size() == 1);
    CHECK(sum.terms().begin()->second == 2);
    AlgebraicExpr minus = a;
    AlgebraicExpr neg;
    neg.add_term(sum.terms().begin()->first, Rat(-1));
    CHECK(expr_add(a, neg).is_zero());
}

TEST_CASE("expr_mul is idempotent on brackets and annihilates complements") {
    Fixture f;
    int a = f.lt(f.x, 3);
    AlgebraicExpr ba = AlgebraicExpr::bracket(f.atoms, a);
    AlgebraicExpr bn = AlgebraicExpr::bracket(f.atoms, a, true);
    CHECK(expr_mul(f.atoms, ba, ba) == ba);       // [l][l] = [l]
    CHECK(expr_mul(f.atoms, ba, bn).is_zero());   // [l][not l] = 0
}

TEST_CASE("symbols multiply as a multiset") {
    Fixture f;
    AlgebraicExpr s = AlgebraicExpr::symbol("Phi(2)");
    AlgebraicExpr p = expr_mul(f.atoms, s, s);
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms().begin()->first.symbols == std::vector<std::string>{"Phi(2)", "Phi(2)"});
}

TEST_CASE("simplify_intervals intersects bounds") {
    Fixture f;
    SUBCASE("two uppers keep the tighter one") {
        AlgebraicExpr e = expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, f.lt(f.x, 3)),
                                   AlgebraicExpr::bracket(f.atoms, f.lt(f.x, 5)));
        AlgebraicExpr s = simplify_intervals(f.atoms, e);
        CHECK(s == AlgebraicExpr::bracket(f.atoms, f.lt(f.x, 3)));
    }
    SUBCASE("empty interval annihilates the monomial") {
        AlgebraicExpr e = expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, f.lt(f.x, 3)),
                                   AlgebraicExpr::bracket(f.atoms, f.gt(f.x, 5)));
        CHECK(simplify_intervals(f.atoms, e).is_zero());
    }
    SUBCASE("point interval becomes an equality bracket") {
        int le3 = f.atoms.intern({{{Rat(1), f.x, Rat(1)}}, Cmp::Le, Rat(3)});
        int ge3 = f.atoms.intern({{{Rat(1), f.x, Rat(1)}}, Cmp::Ge, Rat(3)});
        AlgebraicExpr e = expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, le3),
                                   AlgebraicExpr::bracket(f.atoms, ge3));
        AlgebraicExpr s = simplify_intervals(f.atoms, e);
        int eq3 = f.atoms.intern({{{Rat(1), f.x, Rat(1)}}, Cmp::Eq, Rat(3)});
        CHECK(s == AlgebraicExpr::bracket(f.atoms, eq3));
    }
    SUBCASE("nonlinear brackets pass through") {
        int nl = f.atoms.intern({{{Rat(1), f.x, Rat(2)}}, Cmp::Lt, Rat(4)});
        AlgebraicExpr e = AlgebraicExpr::bracket(f.atoms, nl);
        CHECK(simplify_intervals(f.atoms, e) == e);
    }
}

TEST_CASE("merge_complements realizes the neutral sum") {
    Fixture f;
    int a = f.lt(f.x, 3);
    SUBCASE("[l] + [not l] = 1") {
        AlgebraicExpr e = expr_add(AlgebraicExpr::bracket(f.atoms, a),
                                   AlgebraicExpr::bracket(f.atoms, a, true));
        CHECK(merge_complements(f.atoms, e) == AlgebraicExpr::constant(1));
    }
    SUBCASE("shared residue: c[l]R + c[not l]R = cR") {
        int b = f.lt(f.y, 1);
        AlgebraicExpr R = AlgebraicExpr::bracket(f.atoms, b);
        AlgebraicExpr e = expr_add(
            expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, a), R),
            expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, a, true), R));
        CHECK(merge_complements(f.atoms, e) == R);
    }
    SUBCASE("different coefficients are left alone") {
        AlgebraicExpr e = expr_add(AlgebraicExpr::bracket(f.atoms, a),
                                   AlgebraicExpr::bracket(f.atoms, a, true));
        AlgebraicExpr scaled;
        bool first = true;
        for (auto& [m, c] : e.terms()) {
            scaled.add_term(m, first ? c : c * 2);
            first = false;
        }
        CHECK(merge_complements(f.atoms, scaled) == scaled);
    }
    SUBCASE("cascading merges reach a fixpoint") {
        // [x<3][y<1] + [x>=3][y<1] + [y>=1]  =  1
        int b = f.lt(f.y, 1);
        AlgebraicExpr e = expr_add(
            expr_add(
                expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, a),
                         AlgebraicExpr::bracket(f.atoms, b)),
                expr_mul(f.atoms, AlgebraicExpr::bracket(f.atoms, a, true),
                         AlgebraicExpr::bracket(f.atoms, b))),
            AlgebraicExpr::bracket(f.atoms, b, true));
        CHECK(merge_complements(f.atoms, e) == AlgebraicExpr::constant(1));
    }
}

TEST_CASE("pointwise eval agrees with bracket semantics") {
    Fixture f;
    int a = f.lt(f.x, 3);
    AlgebraicExpr e = expr_add(AlgebraicExpr::constant(Rat(1) / 2),
                               AlgebraicExpr::bracket(f.atoms, a));
    CHECK(e.eval(f.atoms, {Rat(0), Rat(0)}) == Rat(3) / 2);
    CHECK(e.eval(f.atoms, {Rat(5), Rat(0)}) == Rat(1) / 2);
    AlgebraicExpr s = AlgebraicExpr::symbol("k");
    CHECK(s.eval(f.atoms, {Rat(0), Rat(0)}, {{"k", Rat(7)}}) == 7);
    CHECK_THROWS_AS(s.eval(f.atoms, {Rat(0), Rat(0)}), ModelError);
}

TEST_CASE("semiring element prunes dead bindings") {
    Fixture f;
    WeightSpec w;
    // (1, {x}) identifies with (1, {})
    SemiringElement one = SemiringElement::make(f.atoms, AlgebraicExpr::constant(1), {f.x});
    CHECK(one.bindings.empty());
    SemiringElement zero = SemiringElement::make(f.atoms, AlgebraicExpr{}, {f.x, f.y});
    CHECK(zero.bindings.empty());
    // a bracket over x keeps the x binding
    int a = f.lt(f.x, 3);
    SemiringElement b =
        SemiringElement::make(f.atoms, AlgebraicExpr::bracket(f.atoms, a), {f.x, f.y});
    CHECK(b.bindings == std::set<int>{f.x});
}
