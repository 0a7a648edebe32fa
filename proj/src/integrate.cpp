#include "hwmi/integrate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "hwmi/abstraction.hpp"
#include "hwmi/polyint.hpp"
#include "hwmi/rng.hpp"

namespace hwmi {

namespace {

void warn_once(std::vector<std::string>* sink, const std::string& msg) {
    if (!sink) return;
    if (std::find(sink->begin(), sink->end(), msg) == sink->end()) sink->push_back(msg);
}

} // namespace

std::vector<Integrand> attach_densities(const AtomTable& atoms, const WeightSpec& weights,
                                        const SemiringElement& elem,
                                        std::vector<std::string>* warnings) {
    std::map<std::vector<GuardLit>, Integrand> groups;
    for (const auto& [mono, coef] : elem.expr.terms()) {
        if (!mono.symbols.empty()) throw ModelError("unresolved symbol in evaluation result");
        std::set<int> mvars;
        for (int a : mono.brackets)
            for (int v : atoms.vars(a)) mvars.insert(v);
        // guard configuration implied by the density aliases this monomial
        // uses; monomials mixing aliases of incompatible guards integrate the
        // same way but are not attributed to any configuration
        std::map<int, bool> guard;
        bool contradictory = false;
        for (int v : mvars) {
            const DensityEntry* e = weights.entry_for(v);
            if (!e) throw ModelError("no density for variable in evaluation result");
            for (const auto& g : e->guard) {
                auto [it, fresh] = guard.emplace(g.var, g.pos);
                if (!fresh && it->second != g.pos) contradictory = true;
            }
        }
        if (contradictory) guard.clear();
        std::vector<GuardLit> key;
        for (auto& [v, pos] : guard) key.push_back({v, pos});
        Integrand& g = groups[key];
        g.guard = key;
        AlgebraicExpr t;
        t.add_term(mono, coef);
        g.expr = expr_add(g.expr, t);
        g.vars.insert(mvars.begin(), mvars.end());
    }
    std::vector<Integrand> out;
    for (auto& [key, g] : groups) {
        Rat p = 1;
        for (const auto& l : g.guard) {
            Rat w = weights.bool_weight(l.var);
            p *= l.pos ? w : 1 - w;
        }
        if (p == 0) continue;
        g.coef = p;
        AlgebraicExpr scaled;
        for (const auto& [m, c] : g.expr.terms()) scaled.add_term(m, c / p);
        g.expr = std::move(scaled);
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

// ---------- classification ----------

bool all_univariate_linear(const AtomTable& atoms, const std::vector<Integrand>& gs) {
    for (const auto& g : gs)
        for (const auto& [m, c] : g.expr.terms())
            for (int a : m.brackets)
                if (!linear_univariate(atoms.at(a))) return false;
    return true;
}

bool all_linear_polynomial(const AtomTable& atoms, const WeightSpec& weights,
                           const std::vector<Integrand>& gs) {
    for (const auto& g : gs) {
        for (const auto& [m, c] : g.expr.terms())
            for (int a : m.brackets)
                if (!atoms.at(a).linear()) return false;
        for (int v : g.vars)
            if (!weights.entry_for(v)->density.polynomial()) return false;
    }
    return true;
}

// ---------- path (a): per-variable CDF differences ----------

struct VarBounds {
    std::optional<Rat> lo, up;
    bool lo_strict = false, up_strict = false;
    bool has_eq = false;
    Rat eq_value;
};

// Canonical univariate linear atom: (+-1)x cmp b.
void apply_bracket(const NraAtom& a, std::map<int, VarBounds>& bounds,
                   std::vector<std::string>* warnings) {
    int v = a.terms.front().var;
    bool pos_lead = a.terms.front().coef > 0;
    VarBounds& b = bounds[v];
    switch (a.cmp) {
        case Cmp::Lt:
        case Cmp::Le: {
            bool strict = a.cmp == Cmp::Lt;
            if (pos_lead) {   // x < b
                if (!b.up || a.bound < *b.up) b.up = a.bound, b.up_strict = strict;
                else if (a.bound == *b.up) b.up_strict = b.up_strict || strict;
            } else {          // -x < b  i.e.  x > -b
                Rat lo = -a.bound;
                if (!b.lo || lo > *b.lo) b.lo = lo, b.lo_strict = strict;
                else if (lo == *b.lo) b.lo_strict = b.lo_strict || strict;
            }
            break;
        }
        case Cmp::Eq:
            warn_once(warnings, "equality constraint over a continuous variable has measure zero");
            b.has_eq = true;
            b.eq_value = pos_lead ? a.bound : -a.bound;
            break;
        case Cmp::Ne:
            // complement of a measure-zero set: full mass
            break;
        default: throw ModelError("non-canonical comparator in bracket");
    }
}

std::string phi_arg(const Rat& z) { return rat_to_decimal_string(z); }

// CDF difference for one variable: value, and a printable factor.
struct CdfFactor {
    double value = 1;
    std::optional<Rat> exact;
    std::string form = "1";
};

CdfFactor cdf_factor(const Density& d, const VarBounds& b) {
    CdfFactor f;
    if (b.has_eq) {
        f.value = 0;
        f.exact = Rat(0);
        f.form = "0";
        return f;
    }
    if (b.lo && b.up && (*b.lo > *b.up || (*b.lo == *b.up && (b.lo_strict || b.up_strict)))) {
        f.value = 0;
        f.exact = Rat(0);
        f.form = "0";
        return f;
    }
    if (!b.lo && !b.up) return f;
    double flo = b.lo ? d.cdf(to_double(*b.lo)) : 0.0;
    double fup = b.up ? d.cdf(to_double(*b.up)) : 1.0;
    f.value = std::max(0.0, fup - flo);
    if (d.polynomial()) {
        f.exact = d.mass_exact(b.lo, b.up);
        f.form = rat_to_decimal_string(*f.exact);
        return f;
    }
    auto render = [&](const Rat& x) -> std::string {
        if (d.kind == Density::Normal)
            return "Phi(" + phi_arg((x - d.p1) / d.p2) + ")";
        std::ostringstream os;
        os << "F[" << d.to_string() << "](" << rat_to_decimal_string(x) << ")";
        return os.str();
    };
    if (b.lo && b.up)
        f.form = "(" + render(*b.up) + " - " + render(*b.lo) + ")";
    else if (b.up)
        f.form = render(*b.up);
    else
        f.form = "(1 - " + render(*b.lo) + ")";
    return f;
}

void integrate_cdf(const AtomTable& atoms, const WeightSpec& weights,
                   const std::vector<Integrand>& gs, WmiResult& res) {
    double total = 0;
    Rat exact_total = 0;
    bool all_exact = true;
    std::ostringstream form;
    bool first_g = true;
    for (const auto& g : gs) {
        double gval = 0;
        Rat gexact = 0;
        std::ostringstream gform;
        bool first_m = true;
        for (const auto& [m, c] : g.expr.terms()) {
            std::map<int, VarBounds> bounds;
            for (int a : m.brackets) apply_bracket(atoms.at(a), bounds, &res.warnings);
            double val = to_double(c);
            std::optional<Rat> ex = c;
            std::string mform = rat_to_decimal_string(c);
            for (auto& [v, b] : bounds) {
                CdfFactor f = cdf_factor(weights.entry_for(v)->density, b);
                val *= f.value;
                if (ex && f.exact)
                    *ex *= *f.exact;
                else
                    ex.reset();
                if (f.form != "1") mform += "*" + f.form;
            }
            gval += val;
            if (ex)
                gexact += *ex;
            else
                all_exact = false;
            gform << (first_m ? "" : " + ") << mform;
            first_m = false;
        }
        total += to_double(g.coef) * gval;
        exact_total += g.coef * gexact;
        std::string prefix =
            g.coef == 1 ? "" : rat_to_decimal_string(g.coef) + " * ";
        form << (first_g ? "" : " + ") << prefix << "(" << gform.str() << ")";
        first_g = false;
    }
    res.method = "closed-form";
    res.exact = true;
    res.exact_form = gs.empty() ? "0" : form.str();
    if (all_exact) {
        res.exact_value = exact_total;
        res.value = to_double(exact_total);
    } else {
        res.value = total;
    }
}

// ---------- path (b): exact polytope decomposition ----------

Rat integrate_monomial_polytope(const AtomTable& atoms, const WeightSpec& weights,
                                const Monomial& m, const std::set<int>& vars,
                                std::vector<std::string>* warnings, const Deadline& dl) {
    std::vector<LinConstraint> cons;
    for (int a : m.brackets) {
        const NraAtom& atom = atoms.at(a);
        switch (atom.cmp) {
            case Cmp::Lt:
            case Cmp::Le: {
                LinExpr e;
                e.c0 = -atom.bound;
                for (const auto& t : atom.terms) e.coef[t.var] += t.coef;
                e.drop_zeros();
                cons.push_back({std::move(e)});
                break;
            }
            case Cmp::Eq:
                warn_once(warnings,
                          "equality constraint over a continuous variable has measure zero");
                return 0;
            case Cmp::Ne: break;
            default: throw ModelError("non-canonical comparator in bracket");
        }
    }
    // fold in the density pieces: cartesian product over per-variable pieces
    std::vector<int> vlist(vars.begin(), vars.end());
    std::vector<std::vector<PwPiece>> pieces;
    for (int v : vlist) pieces.push_back(weights.entry_for(v)->density.as_pieces());
    Rat total = 0;
    std::vector<size_t> idx(vlist.size(), 0);
    while (true) {
        Poly p = Poly::constant(1);
        std::vector<LinConstraint> c = cons;
        for (size_t i = 0; i < vlist.size(); ++i) {
            const PwPiece& pc = pieces[i][idx[i]];
            p = p * Poly::from_coeffs(vlist[i], pc.coefs);
            LinExpr lo;   // lo - x <= 0
            lo.c0 = pc.lo;
            lo.coef[vlist[i]] = -1;
            LinExpr hi;   // x - hi <= 0
            hi.c0 = -pc.hi;
            hi.coef[vlist[i]] = 1;
            c.push_back({std::move(lo)});
            c.push_back({std::move(hi)});
        }
        total += integrate_polytope(p, std::move(c), vlist, dl);
        // advance the odometer
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < pieces[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
        if (idx.empty()) break;
    }
    return total;
}

void integrate_exact_polytope(const AtomTable& atoms, const WeightSpec& weights,
                              const std::vector<Integrand>& gs, WmiResult& res,
                              const Deadline& dl) {
    Rat total = 0;
    for (const auto& g : gs) {
        Rat gval = 0;
        for (const auto& [m, c] : g.expr.terms())
            gval += c * integrate_monomial_polytope(atoms, weights, m, g.vars, &res.warnings, dl);
        total += g.coef * gval;
    }
    res.method = "polytope";
    res.exact = true;
    res.exact_value = total;
    res.exact_form = rat_to_string(total);
    res.value = to_double(total);
}

// ---------- path (c): numeric ----------

double expr_eval_d(const AtomTable& atoms, const AlgebraicExpr& e,
                   const std::vector<double>& reals) {
    double sum = 0;
    for (const auto& [m, c] : e.terms()) {
        bool alive = true;
        for (int a : m.brackets)
            if (!atom_holds_d(atoms.at(a), reals)) {
                alive = false;
                break;
            }
        if (alive) sum += to_double(c);
    }
    return sum;
}

struct NumericEstimate {
    double value = 0;
    double error = 0;
    bool used_mc = false;
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double m, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol,
               int depth) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, depth);
}

NumericEstimate estimate_integrand(const AtomTable& atoms, const VariableRegistry& reg,
                                   const WeightSpec& weights, const Integrand& g,
                                   const IntegrateOptions& opts, uint64_t stream_base,
                                   const Deadline& dl) {
    std::vector<int> vlist(g.vars.begin(), g.vars.end());
    std::vector<const Density*> dens;
    for (int v : vlist) dens.push_back(&weights.entry_for(v)->density);
    std::vector<double> reals(reg.size(), 0.0);

    NumericEstimate est;
    size_t n = vlist.size();
    if (n == 0) {
        est.value = expr_eval_d(atoms, g.expr, reals);
        return est;
    }
    if (n <= 2) {
        const double eps = 1e-10;
        auto value_at = [&](const std::vector<double>& u) {
            dl.check();
            for (size_t i = 0; i < n; ++i) reals[vlist[i]] = dens[i]->quantile(u[i]);
            return expr_eval_d(atoms, g.expr, reals);
        };
        if (n == 1) {
            est.value = simpson([&](double u) { return value_at({u}); }, eps, 1 - eps,
                                1e-10, 40);
            est.error = 1e-7;
        } else {
            est.value = simpson(
                [&](double u1) {
                    return simpson([&](double u2) { return value_at({u1, u2}); }, eps,
                                   1 - eps, 1e-8, 24);
                },
                eps, 1 - eps, 1e-8, 24);
            est.error = 1e-5;
        }
        return est;
    }
    est.used_mc = true;
    double sum = 0, sumsq = 0;
    long N = std::max(1L, opts.mc_samples);
    for (long k = 0; k < N; ++k) {
        dl.check();
        for (size_t i = 0; i < n; ++i)
            reals[vlist[i]] =
                dens[i]->quantile(u01(opts.seed, stream_base + i, static_cast<uint64_t>(k)));
        double x = expr_eval_d(atoms, g.expr, reals);
        sum += x;
        sumsq += x * x;
    }
    est.value = sum / N;
    double var = std::max(0.0, sumsq / N - est.value * est.value);
    est.error = 2.0 * std::sqrt(var / N);
    return est;
}

void integrate_numeric(const AtomTable& atoms, const VariableRegistry& reg,
                       const WeightSpec& weights, const std::vector<Integrand>& gs,
                       const IntegrateOptions& opts, WmiResult& res, const Deadline& dl) {
    double total = 0, err = 0;
    bool any_mc = false;
    uint64_t stream = 1;
    for (const auto& g : gs) {
        NumericEstimate e = estimate_integrand(atoms, reg, weights, g, opts, stream, dl);
        stream += g.vars.size() + 1;
        double c = to_double(g.coef);
        total += c * e.value;
        err += c * e.error;
        any_mc = any_mc || e.used_mc;
    }
    res.method = any_mc ? "monte-carlo" : "quadrature";
    res.exact = false;
    res.value = total;
    res.error_bound = err;
}

} // namespace

WmiResult integrate(const AtomTable& atoms, const VariableRegistry& reg,
                    const WeightSpec& weights, const std::vector<Integrand>& integrands,
                    const IntegrateOptions& opts) {
    WmiResult res;
    if (integrands.empty()) {
        res.method = "closed-form";
        res.exact = true;
        res.exact_value = Rat(0);
        res.exact_form = "0";
        return res;
    }
    Deadline dl(opts.timeout_ms);
    if (all_univariate_linear(atoms, integrands))
        integrate_cdf(atoms, weights, integrands, res);
    else if (all_linear_polynomial(atoms, weights, integrands))
        integrate_exact_polytope(atoms, weights, integrands, res, dl);
    else
        integrate_numeric(atoms, reg, weights, integrands, opts, res, dl);
    return res;
}

WmiResult solve_wmi(Model& m, const std::string& formula_name, const SolveOptions& opts) {
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };

    int f = m.formula(formula_name);

    auto t0 = clock::now();
    AbstractionMap map;
    int prop = abstract(m.fac, f, m.reg, map);
    DdnnfCircuit circuit = compile(m.fac, prop, opts.compile);
    auto t1 = clock::now();

    DensitySemiring sem(m.atoms, m.weights, map, Deadline(opts.compile.timeout_ms));
    SemiringElement elem = amc_evaluate(circuit, sem);
    auto t2 = clock::now();

    std::vector<std::string> warnings;
    std::vector<Integrand> gs = attach_densities(m.atoms, m.weights, elem, &warnings);
    WmiResult res = integrate(m.atoms, m.reg, m.weights, gs, opts.integrate);
    auto t3 = clock::now();

    res.warnings.insert(res.warnings.begin(), warnings.begin(), warnings.end());
    res.kc_ms = ms(t0, t1);
    res.eval_ms = ms(t1, t2);
    res.integrate_ms = ms(t2, t3);
    return res;
}

} // namespace hwmi
