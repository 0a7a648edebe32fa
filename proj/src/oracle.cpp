#include "hwmi/oracle.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "hwmi/rng.hpp"

namespace hwmi {

SemiringElement enumerate_amc(FormulaFactory& fac, int prop, const WeightSpec& weights,
                              const AbstractionMap& map) {
    const std::vector<int>& vars = fac.vars(prop);
    if (vars.size() > 22) throw ModelError("enumeration oracle capped at 22 variables");
    DensitySemiring sem(fac.atoms(), weights, map);
    SemiringElement total = sem.zero();
    size_t max_var = 0;
    for (int v : vars) max_var = std::max(max_var, static_cast<size_t>(v));
    std::vector<char> bools(max_var + 1, 0);
    for (size_t mask = 0; mask < (size_t{1} << vars.size()); ++mask) {
        for (size_t i = 0; i < vars.size(); ++i) bools[vars[i]] = (mask >> i) & 1;
        if (!fac.eval_prop(prop, bools)) continue;
        SemiringElement w = sem.one();
        for (size_t i = 0; i < vars.size(); ++i)
            w = sem.times(w, sem.label(vars[i], bools[vars[i]] != 0));
        total = sem.plus(total, w);
    }
    return sem.simplify(std::move(total));
}

BigInt enumerate_models(FormulaFactory& fac, int prop) {
    const std::vector<int>& vars = fac.vars(prop);
    if (vars.size() > 22) throw ModelError("enumeration oracle capped at 22 variables");
    size_t max_var = 0;
    for (int v : vars) max_var = std::max(max_var, static_cast<size_t>(v));
    std::vector<char> bools(max_var + 1, 0);
    BigInt count = 0;
    for (size_t mask = 0; mask < (size_t{1} << vars.size()); ++mask) {
        for (size_t i = 0; i < vars.size(); ++i) bools[vars[i]] = (mask >> i) & 1;
        if (fac.eval_prop(prop, bools)) ++count;
    }
    return count;
}

Rat enumerate_wmc(FormulaFactory& fac, int prop, const WeightSpec& weights) {
    const std::vector<int>& vars = fac.vars(prop);
    if (vars.size() > 22) throw ModelError("enumeration oracle capped at 22 variables");
    size_t max_var = 0;
    for (int v : vars) max_var = std::max(max_var, static_cast<size_t>(v));
    std::vector<char> bools(max_var + 1, 0);
    Rat total = 0;
    for (size_t mask = 0; mask < (size_t{1} << vars.size()); ++mask) {
        for (size_t i = 0; i < vars.size(); ++i) bools[vars[i]] = (mask >> i) & 1;
        if (!fac.eval_prop(prop, bools)) continue;
        Rat w = 1;
        for (size_t i = 0; i < vars.size(); ++i) {
            Rat p = weights.bool_weight(vars[i]);
            w *= bools[vars[i]] ? p : 1 - p;
        }
        total += w;
    }
    return total;
}

McEstimate mc_wmi(Model& m, const std::string& formula_name, uint64_t seed,
                  long samples) {
    int f = m.formula(formula_name);
    AssignmentD a;
    a.bools.assign(m.reg.size(), 0);
    a.reals.assign(m.reg.size(), 0.0);

    // hoist rational->double conversions out of the sampling loop
    std::vector<std::pair<int, double>> bools;
    for (const auto& [v, p] : m.weights.bool_weights) bools.emplace_back(v, to_double(p));
    struct Sampler {
        int var;
        Density::Kind kind;
        double p1, p2;
        const Density* d;
    };
    static const boost::math::normal_distribution<double> std_normal;
    std::vector<Sampler> reals;
    for (const auto& e : m.weights.densities)
        reals.push_back({e.var, e.density.kind, to_double(e.density.p1),
                         to_double(e.density.p2), &e.density});

    double sum = 0, sumsq = 0;
    long N = std::max(1L, samples);
    for (long k = 0; k < N; ++k) {
        for (const auto& [v, p] : bools)
            a.bools[v] = u01(seed, static_cast<uint64_t>(v) + 1, k) < p;
        for (const auto& s : reals) {
            double u = u01(seed, static_cast<uint64_t>(s.var) + 1, k);
            switch (s.kind) {
                case Density::Normal:
                    a.reals[s.var] = s.p1 + s.p2 * boost::math::quantile(std_normal, u);
                    break;
                case Density::Uniform:
                    a.reals[s.var] = s.p1 + u * (s.p2 - s.p1);
                    break;
                default:
                    a.reals[s.var] = s.d->quantile(u);
                    break;
            }
        }
        double x = m.fac.eval_d(f, a) ? 1.0 : 0.0;
        sum += x;
        sumsq += x * x;
    }
    McEstimate est;
    est.samples = N;
    est.value = sum / N;
    double var = std::max(0.0, sumsq / N - est.value * est.value);
    est.error_bound = 2.0 * std::sqrt(var / N);
    return est;
}

} // namespace hwmi
