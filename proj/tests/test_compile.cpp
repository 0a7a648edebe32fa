#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "hwmi/ddnnf.hpp"
#include "hwmi/oracle.hpp"
#include "hwmi/rng.hpp"

using namespace hwmi;

namespace {

// random propositional formula over vars[0..n)
int random_formula(FormulaFactory& fac, const std::vector<int>& vars, std::mt19937& g,
                   int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 5);
    switch (kind(g)) {
        case 0:
        case 1: {
            std::uniform_int_distribution<int> v(0, (int)vars.size() - 1);
            int leaf = fac.bool_atom(vars[v(g)]);
            return g() % 2 ? leaf : fac.negate(leaf);
        }
        case 2:
            return fac.negate(random_formula(fac, vars, g, depth - 1));
        case 3:
            return fac.conj({random_formula(fac, vars, g, depth - 1),
                             random_formula(fac, vars, g, depth - 1)});
        case 4:
            return fac.disj({random_formula(fac, vars, g, depth - 1),
                             random_formula(fac, vars, g, depth - 1)});
        default:
            return fac.implies(random_formula(fac, vars, g, depth - 1),
                               random_formula(fac, vars, g, depth - 1));
    }
}

bool eval_circuit(DdnnfCircuit& c, int id, const std::vector<char>& bools) {
    const CircuitNode& n = c.node(id);
    switch (n.kind) {
        case CircuitNode::False_: return false;
        case CircuitNode::True_: return true;
        case CircuitNode::Lit: return bools[n.var] == (n.pos ? 1 : 0);
        case CircuitNode::And:
            for (int k : n.kids)
                if (!eval_circuit(c, k, bools)) return false;
            return true;
        case CircuitNode::Decision:
            return eval_circuit(c, bools[n.var] ? n.high : n.low, bools);
        case CircuitNode::FreeOr:
            for (int k : n.kids)
                if (eval_circuit(c, k, bools)) return true;
            return false;
    }
    return false;
}

} // namespace

TEST_CASE("compiled circuits agree with the formula on every assignment") {
    std::mt19937 g(7);
    for (int iter = 0; iter < 60; ++iter) {
        VariableRegistry reg;
        AtomTable atoms(reg);
        FormulaFactory fac(reg, atoms);
        int n = 2 + iter % 9;   // up to 10 variables
        std::vector<int> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(reg.add("v" + std::to_string(i), VarKind::Boolean));
        int f = random_formula(fac, vars, g, 5);
        DdnnfCircuit c = compile(fac, f);
        VerifyReport rep = verify_ddnnf(c, reg);
        CHECK(rep.ok());
        CHECK(rep.violations.empty());

        std::vector<char> bools(n, 0);
        for (int m = 0; m < (1 << n); ++m) {
            for (int i = 0; i < n; ++i) bools[i] = (m >> i) & 1;
            REQUIRE(eval_circuit(c, c.root(), bools) == fac.eval_prop(f, bools));
        }
    }
}

TEST_CASE("verify_ddnnf flags broken hand-built circuits") {
    VariableRegistry reg;
    int a = reg.add("a", VarKind::Boolean);
    int b = reg.add("b", VarKind::Boolean);

    SUBCASE("non-decomposable AND") {
        DdnnfCircuit c;
        int n = c.conj({c.lit(a, true), c.decision(a, c.ctrue(), c.lit(b, true))});
        c.set_root(n);
        VerifyReport rep = verify_ddnnf(c, reg);
        CHECK_FALSE(rep.decomposable);
        CHECK_FALSE(rep.violations.empty());
    }
    SUBCASE("non-deterministic FreeOr") {
        DdnnfCircuit c;
        int n = c.free_or({c.lit(a, true), c.lit(b, true)});   // both true for a=b=1
        c.set_root(n);
        VerifyReport rep = verify_ddnnf(c, reg);
        CHECK(rep.determinism_exhaustive);
        CHECK_FALSE(rep.deterministic);
    }
    SUBCASE("deterministic FreeOr passes") {
        DdnnfCircuit c;
        int n = c.free_or({c.lit(a, true), c.conj({c.lit(a, false), c.lit(b, true)})});
        c.set_root(n);
        CHECK(verify_ddnnf(c, reg).ok());
    }
}

TEST_CASE("smoothing enables model counting") {
    VariableRegistry reg;
    std::vector<int> scope;
    for (int i = 0; i < 5; ++i)
        scope.push_back(reg.add("v" + std::to_string(i), VarKind::Boolean));

    SUBCASE("TRUE over n variables has 2^n models") {
        DdnnfCircuit c;
        c.set_root(c.ctrue());
        CHECK_FALSE(is_smooth(c, scope));
        CHECK_THROWS_AS(model_count(c, scope), ModelError);
        DdnnfCircuit s = smooth(c, scope);
        CHECK(is_smooth(s, scope));
        CHECK(model_count(s, scope) == 32);
    }
    SUBCASE("single literal over n variables") {
        DdnnfCircuit c;
        c.set_root(c.lit(scope[0], true));
        DdnnfCircuit s = smooth(c, scope);
        CHECK(is_smooth(s, scope));
        CHECK(model_count(s, scope) == 16);
    }
}

TEST_CASE("model_count matches enumeration on random formulas") {
    std::mt19937 g(11);
    for (int iter = 0; iter < 40; ++iter) {
        VariableRegistry reg;
        AtomTable atoms(reg);
        FormulaFactory fac(reg, atoms);
        int n = 3 + iter % 7;
        std::vector<int> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(reg.add("v" + std::to_string(i), VarKind::Boolean));
        int f = random_formula(fac, vars, g, 4);
        DdnnfCircuit c = compile(fac, f);
        DdnnfCircuit s = smooth(c, vars);
        CHECK(verify_ddnnf(s, reg).ok());
        // enumeration counts over vars(f); scale up to the declared scope
        BigInt expect = enumerate_models(fac, f);
        size_t free_vars = vars.size() - fac.bool_vars(f).size();
        if (f == fac.ftrue() || f == fac.ffalse()) free_vars = vars.size();
        for (size_t i = 0; i < free_vars; ++i) expect *= 2;
        CHECK(model_count(s, vars) == expect);
    }
}

TEST_CASE("variable order override is honored") {
    VariableRegistry reg;
    AtomTable atoms(reg);
    FormulaFactory fac(reg, atoms);
    int a = reg.add("a", VarKind::Boolean);
    int b = reg.add("b", VarKind::Boolean);
    int f = fac.iff(fac.bool_atom(a), fac.bool_atom(b));
    CompileOptions opts;
    opts.order = std::vector<int>{b, a};
    DdnnfCircuit c = compile(fac, f, opts);
    CHECK(c.node(c.root()).kind == CircuitNode::Decision);
    CHECK(c.node(c.root()).var == b);
    // both orders produce equivalent circuits
    std::vector<char> bools(2);
    DdnnfCircuit d = compile(fac, f);
    for (int m = 0; m < 4; ++m) {
        bools[0] = m & 1;
        bools[1] = (m >> 1) & 1;
        CHECK(eval_circuit(c, c.root(), bools) == eval_circuit(d, d.root(), bools));
    }
}

TEST_CASE("compiler enforces the variable cap") {
    VariableRegistry reg;
    AtomTable atoms(reg);
    FormulaFactory fac(reg, atoms);
    std::vector<int> kids;
    for (int i = 0; i < 70; ++i)
        kids.push_back(fac.bool_atom(reg.add("v" + std::to_string(i), VarKind::Boolean)));
    int f = fac.disj(kids);
    CHECK_THROWS_AS(compile(fac, f), CompileError);
}

TEST_CASE("circuit files round-trip") {
    std::mt19937 g(23);
    VariableRegistry reg;
    AtomTable atoms(reg);
    FormulaFactory fac(reg, atoms);
    std::vector<int> vars;
    for (int i = 0; i < 6; ++i)
        vars.push_back(reg.add("v" + std::to_string(i), VarKind::Boolean));
    int f = random_formula(fac, vars, g, 5);
    DdnnfCircuit c = compile(fac, f);

    std::stringstream ss;
    write_circuit(ss, c, reg.size());
    DdnnfCircuit r = read_circuit(ss, reg);
    std::vector<char> bools(6);
    for (int m = 0; m < 64; ++m) {
        for (int i = 0; i < 6; ++i) bools[i] = (m >> i) & 1;
        REQUIRE(eval_circuit(r, r.root(), bools) == fac.eval_prop(f, bools));
    }

    std::stringstream bad("ddnnf 2 1\nL 5\n");
    CHECK_THROWS_AS(read_circuit(bad, reg), ModelError);
}
