#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hwmi/ddnnf.hpp"
#include "hwmi/model.hpp"
#include "hwmi/semiring.hpp"

namespace hwmi {

// One summand of the factored result:
//   coef * integral of expr against the densities of `vars`.
// `coef` is the probability of the discrete guard configuration; monomials
// inside `expr` were divided by it, so coef * expr reproduces the raw
// evaluation result.
struct Integrand {
    Rat coef{1};
    std::vector<GuardLit> guard;
    AlgebraicExpr expr;
    std::set<int> vars;
};

struct IntegrateOptions {
    uint64_t seed = 0;
    long mc_samples = 100000;
    long timeout_ms = 60000;
};

struct WmiResult {
    double value = 0;
    double error_bound = 0;         // 0 on exact paths
    bool exact = false;
    std::string method;             // closed-form | polytope | quadrature | monte-carlo
    std::string exact_form;         // printable closed form when exact
    std::optional<Rat> exact_value; // present when the value is rational
    double ground_ms = 0, kc_ms = 0, eval_ms = 0, integrate_ms = 0;
    std::vector<std::string> warnings;
};

// Splits the monomials of an evaluation result by the discrete guard
// configuration implied by their density bindings and factors out each
// configuration's probability.
std::vector<Integrand> attach_densities(const AtomTable& atoms, const WeightSpec& weights,
                                        const SemiringElement& elem,
                                        std::vector<std::string>* warnings = nullptr);

// Integrates the summands against their densities.  Chooses, in order:
// per-variable CDF differences (univariate linear constraints), exact
// polytope decomposition (linear constraints, polynomial densities),
// adaptive quadrature (at most two variables), Monte Carlo estimation.
WmiResult integrate(const AtomTable& atoms, const VariableRegistry& reg,
                    const WeightSpec& weights, const std::vector<Integrand>& integrands,
                    const IntegrateOptions& opts = {});

struct SolveOptions {
    CompileOptions compile;
    IntegrateOptions integrate;
};

// Full pipeline for one query formula: abstraction, compilation, algebraic
// circuit evaluation, density attachment, integration.
WmiResult solve_wmi(Model& m, const std::string& formula_name,
                    const SolveOptions& opts = {});

} // namespace hwmi
