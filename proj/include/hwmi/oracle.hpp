#pragma once

#include "hwmi/integrate.hpp"
#include "hwmi/model.hpp"
#include "hwmi/semiring.hpp"

namespace hwmi {

// Independent reference implementations used to cross-check the pipeline.
// They share no code with the compiler or the circuit evaluator.

// AMC by brute-force enumeration of all assignments to the Boolean
// variables of the propositional formula (capped at 22 variables).
SemiringElement enumerate_amc(FormulaFactory& fac, int prop, const WeightSpec& weights,
                              const AbstractionMap& map);

// Satisfying-assignment count over vars(prop).
BigInt enumerate_models(FormulaFactory& fac, int prop);

// Exact WMC over a purely Boolean formula by enumeration.
Rat enumerate_wmc(FormulaFactory& fac, int prop, const WeightSpec& weights);

struct McEstimate {
    double value = 0;
    double error_bound = 0;   // two standard errors
    long samples = 0;
};

// Monte-Carlo WMI straight from the model: sample every Boolean from its
// Bernoulli weight and every real variable from its density (inverse-CDF
// with counter-based uniforms), then average the formula indicator.
// Deterministic for a fixed seed.
McEstimate mc_wmi(Model& m, const std::string& formula_name, uint64_t seed,
                  long samples);

} // namespace hwmi
