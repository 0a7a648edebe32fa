// End-to-end acceptance suite: one pass/fail line per criterion.
#include <boost/math/distributions/normal.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hwmi/halpl.hpp"
#include "hwmi/integrate.hpp"
#include "hwmi/oracle.hpp"

using namespace hwmi;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s%s%s\n", n, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double phi(double z) {
    static const boost::math::normal N01;
    return cdf(N01, z);
}

// --- random propositional / hybrid formula helpers -------------------------

int random_tree(FormulaFactory& fac, const std::vector<int>& leaves, std::mt19937& g,
                int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 4);
    switch (kind(g)) {
        case 0:
        case 1: {
            std::uniform_int_distribution<int> v(0, (int)leaves.size() - 1);
            return g() % 2 ? leaves[v(g)] : fac.negate(leaves[v(g)]);
        }
        case 2:
            return fac.negate(random_tree(fac, leaves, g, depth - 1));
        case 3:
            return fac.conj({random_tree(fac, leaves, g, depth - 1),
                             random_tree(fac, leaves, g, depth - 1)});
        default:
            return fac.disj({random_tree(fac, leaves, g, depth - 1),
                             random_tree(fac, leaves, g, depth - 1)});
    }
}

// --- criterion 1: closed-form mixture anchor -------------------------------

void criterion1() {
    auto m = parse_model_file("models/broken.hwmi");
    auto t0 = Clock::now();
    WmiResult r = solve_wmi(*m, "broken");
    double solve_ms = ms_since(t0);

    double direct = 0.01 * (phi(2) - phi(0)) + (1 - phi(2));
    bool ok = true;
    std::ostringstream why;
    if (std::abs(r.value - direct) > 1e-9) {
        ok = false;
        why << "value " << r.value << " vs direct " << direct << "; ";
    }
    if (r.exact_form.find("Phi(2)") == std::string::npos ||
        r.exact_form.find("Phi(0)") == std::string::npos) {
        ok = false;
        why << "closed form missing Phi terms; ";
    }
    if (solve_ms > 1000) {
        ok = false;
        why << "solve took " << solve_ms << " ms; ";
    }
    t0 = Clock::now();
    McEstimate mc = mc_wmi(*m, "broken", 20240817, 10000000);
    double mc_ms = ms_since(t0);
    double se = mc.error_bound / 2;
    if (std::abs(r.value - mc.value) > 3 * se) {
        ok = false;
        why << "mc " << mc.value << " ± " << se << " disagrees; ";
    }
    if (mc_ms > 30000) {
        ok = false;
        why << "oracle took " << mc_ms << " ms; ";
    }
    std::ostringstream d;
    d << "value " << r.value << ", solve " << solve_ms << " ms, mc(1e7) " << mc.value
      << " in " << mc_ms / 1000 << " s" << (ok ? "" : "; " + why.str());
    report(1, ok, d.str());
}

// --- criterion 2: machine program grounding + mixture value ----------------

std::vector<std::string> sorted_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l))
        if (!l.empty()) out.push_back(l);
    std::sort(out.begin(), out.end());
    return out;
}

void criterion2() {
    HalProgram p = parse_halpl_file("models/machine.halpl");
    std::string dump;
    auto m = halpl_to_model(p, &dump);

    std::ifstream gf("tests/golden/machine_ground.txt");
    std::ostringstream gs;
    gs << gf.rdbuf();
    bool ok = true;
    std::ostringstream why;
    if (sorted_lines(dump) != sorted_lines(gs.str())) {
        ok = false;
        why << "grounding differs from the golden clause set; ";
    }
    WmiResult r = solve_wmi(*m, "broken");
    double mix0 = 0.01 * (phi(2) - phi(0)) + (1 - phi(2));
    double mix1 = 0.01 * (phi(0.6) - phi(-1.4)) + (1 - phi(0.6));
    double want = 0.8 * mix0 + 0.2 * mix1;
    if (std::abs(r.value - want) > 1e-9) {
        ok = false;
        why << "value " << r.value << " vs " << want << "; ";
    }
    std::ostringstream d;
    d << "grounding matches, value " << r.value << (ok ? "" : "; " + why.str());
    report(2, ok, ok ? d.str() : why.str());
}

// --- criterion 3: 200 random hybrid models vs the MC oracle ----------------

void criterion3() {
    auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream why;
    int checked = 0;
    for (int i = 0; i < 200 && ok; ++i) {
        std::mt19937 g(1000 + i);
        Model m;
        std::vector<int> leaves;
        int nb = (int)(g() % 7);        // up to 6 Booleans
        int nr = 1 + (int)(g() % 3);    // 1..3 reals
        for (int b = 0; b < nb; ++b) {
            int v = m.reg.add("b" + std::to_string(b), VarKind::Boolean);
            m.weights.bool_weights[v] = Rat(1 + (int)(g() % 99), 100);
            leaves.push_back(m.fac.bool_atom(v));
        }
        std::vector<int> rvars;
        for (int x = 0; x < nr; ++x) {
            int v = m.reg.add("x" + std::to_string(x), VarKind::Real);
            rvars.push_back(v);
            if (g() % 2)
                m.weights.add_density(
                    {v, v, {}, Density::normal(Rat((int)(g() % 11) - 5),
                                               Rat(1 + (int)(g() % 5), 2))});
            else {
                int lo = (int)(g() % 9) - 4;
                m.weights.add_density(
                    {v, v, {}, Density::uniform(Rat(lo), Rat(lo + 1 + (int)(g() % 6)))});
            }
        }
        int na = 1 + (int)(g() % 6);    // up to 6 linear univariate atoms
        for (int a = 0; a < na; ++a) {
            int v = rvars[g() % rvars.size()];
            Cmp cmp = g() % 2 ? Cmp::Lt : Cmp::Le;
            Rat bound((int)(g() % 17) - 8, 2);
            leaves.push_back(m.fac.constraint({{{Rat(1), v, Rat(1)}}, cmp, bound}));
        }
        int f = random_tree(m.fac, leaves, g, 4);
        m.formulas.emplace_back("f", f);

        WmiResult r = solve_wmi(m, "f");
        McEstimate mc = mc_wmi(m, "f", 555000 + i, 1000000);
        double tol = std::max(3 * mc.error_bound / 2, 1e-3);
        if (std::abs(r.value - mc.value) > tol) {
            ok = false;
            why << "model " << i << ": pipeline " << r.value << " vs mc " << mc.value
                << " (tol " << tol << ")";
        }
        ++checked;
    }
    double total_ms = ms_since(t0);
    if (total_ms > 300000) {
        ok = false;
        why << "; took " << total_ms / 1000 << " s";
    }
    std::ostringstream d;
    d << checked << " models in " << total_ms / 1000 << " s"
      << (ok ? "" : "; " + why.str());
    report(3, ok, d.str());
}

// --- criterion 4: semiring axioms ------------------------------------------

struct AxiomRig {
    Model m;
    AbstractionMap map;
    std::vector<int> label_vars;   // Boolean + abstraction variables
    int bool_var, lin_var, nonlin_var;

    AxiomRig() {
        bool_var = m.reg.add("b", VarKind::Boolean);
        m.weights.bool_weights[bool_var] = Rat(3, 10);
        int x = m.reg.add("x", VarKind::Real);
        int y = m.reg.add("y", VarKind::Real);
        m.weights.add_density({x, x, {}, Density::normal(Rat(0), Rat(1))});
        m.weights.add_density({y, y, {}, Density::uniform(Rat(0), Rat(1))});
        label_vars.push_back(bool_var);
        auto abs_var = [&](NraAtom raw) {
            int id = m.atoms.intern(raw);
            bool pos = true;
            int rep = AbstractionMap::representative(m.atoms, id, pos);
            int v = map.var_for(m.atoms, m.reg, rep);
            label_vars.push_back(v);
            return v;
        };
        lin_var = abs_var({{{Rat(1), x, Rat(1)}}, Cmp::Lt, Rat(1)});
        abs_var({{{Rat(1), y, Rat(1)}}, Cmp::Le, Rat(1, 2)});
        abs_var({{{Rat(1), x, Rat(1)}, {Rat(1), y, Rat(1)}}, Cmp::Lt, Rat(1)});
        nonlin_var = abs_var({{{Rat(1), x, Rat(2)}}, Cmp::Lt, Rat(4)});
    }
};

SemiringElement random_element(const DensitySemiring& s, const AxiomRig& rig,
                               std::mt19937& g, int depth) {
    if (depth <= 0) {
        switch (g() % 4) {
            case 0: return s.one();
            case 1: {
                int c = (int)(g() % 7) - 3;
                return {AlgebraicExpr::constant(Rat(c, 2)), {}};
            }
            default:
                return s.label(rig.label_vars[g() % rig.label_vars.size()], g() % 2);
        }
    }
    SemiringElement a = random_element(s, rig, g, depth - 1);
    SemiringElement b = random_element(s, rig, g, depth - 1);
    return g() % 2 ? s.plus(a, b) : s.times(a, b);
}

void criterion4() {
    AxiomRig rig;
    DensitySemiring s(rig.m.atoms, rig.m.weights, rig.map);
    std::mt19937 g(77);
    bool ok = true;
    std::ostringstream why;
    int instances = 0;
    for (int k = 0; k < 1000 && ok; ++k, ++instances) {
        SemiringElement a = random_element(s, rig, g, 2);
        SemiringElement b = random_element(s, rig, g, 2);
        SemiringElement c = random_element(s, rig, g, 2);
        auto eq = [&](const SemiringElement& u, const SemiringElement& v,
                      const char* law) {
            if (!(u == v)) {
                ok = false;
                why << "instance " << k << ": " << law << " violated";
            }
        };
        eq(s.plus(a, b), s.plus(b, a), "plus commutativity");
        eq(s.plus(s.plus(a, b), c), s.plus(a, s.plus(b, c)), "plus associativity");
        eq(s.times(a, b), s.times(b, a), "times commutativity");
        eq(s.times(s.times(a, b), c), s.times(a, s.times(b, c)), "times associativity");
        eq(s.times(a, s.plus(b, c)), s.plus(s.times(a, b), s.times(a, c)),
           "distributivity");
        eq(s.times(s.zero(), a), s.zero(), "annihilation");
        eq(s.times(s.one(), a), a, "times identity");
        eq(s.plus(s.zero(), a), a, "plus identity");
    }
    // neutral sum per literal type
    for (int v : {rig.bool_var, rig.lin_var, rig.nonlin_var}) {
        SemiringElement n = s.simplify(s.plus(s.label(v, true), s.label(v, false)));
        if (!(n == s.one())) {
            ok = false;
            why << "; neutral sum fails for variable " << rig.m.reg.name(v);
        }
    }
    std::ostringstream d;
    d << instances << " axiom instances, neutral sums for Boolean/linear/nonlinear"
      << (ok ? "" : "; " + why.str());
    report(4, ok, d.str());
}

// --- criterion 5: AMC on compiled circuits vs enumeration ------------------

void criterion5() {
    std::mt19937 g(501);
    bool ok = true;
    std::ostringstream why;
    int done = 0;
    for (int i = 0; i < 500 && ok; ++i, ++done) {
        Model m;
        std::vector<int> leaves, vars;
        int n = 1 + (int)(g() % 12);
        for (int v = 0; v < n; ++v) {
            int id = m.reg.add("v" + std::to_string(v), VarKind::Boolean);
            vars.push_back(id);
            m.weights.bool_weights[id] = Rat(1 + (int)(g() % 99), 100);
            leaves.push_back(m.fac.bool_atom(id));
        }
        int f = random_tree(m.fac, leaves, g, 5);
        DdnnfCircuit c = compile(m.fac, f);
        VerifyReport rep = verify_ddnnf(c, m.reg);
        if (!rep.ok() || !rep.violations.empty()) {
            ok = false;
            why << "formula " << i << ": verify_ddnnf reported violations";
            break;
        }
        AbstractionMap map;
        ProbabilitySemiring prob(m.weights, map);
        if (amc_evaluate(c, prob) != enumerate_wmc(m.fac, f, m.weights)) {
            ok = false;
            why << "formula " << i << ": probability semiring mismatch";
            break;
        }
        DensitySemiring dens(m.atoms, m.weights, map);
        if (!(amc_evaluate(c, dens) == enumerate_amc(m.fac, f, m.weights, map))) {
            ok = false;
            why << "formula " << i << ": density semiring mismatch";
            break;
        }
        DdnnfCircuit sm = smooth(c, m.fac.vars(f));
        CountingSemiring cnt;
        if (amc_evaluate(sm, cnt) != enumerate_models(m.fac, f)) {
            ok = false;
            why << "formula " << i << ": counting semiring mismatch";
            break;
        }
    }
    std::ostringstream d;
    d << done << " formulas under counting/probability/density"
      << (ok ? "" : "; " + why.str());
    report(5, ok, d.str());
}

// --- criterion 6: exact discrete benchmarks --------------------------------

void criterion6() {
    struct Case {
        const char* file;
        const char* query;
    } cases[] = {{"models/burglar_alarm.halpl", "calls"},
                 {"models/grass.halpl", "wet"},
                 {"models/noisy_or.halpl", "q"},
                 {"models/two_coins.halpl", "someHeads"},
                 {"models/murder_mystery.halpl", "gun"}};
    bool ok = true;
    std::ostringstream why;
    for (const auto& cs : cases) {
        HalProgram p = parse_halpl_file(cs.file);
        auto m = halpl_to_model(p);
        WmiResult r = solve_wmi(*m, cs.query);
        Rat want = enumerate_wmc(m->fac, m->formula(cs.query), m->weights);
        if (!r.exact_value || *r.exact_value != want || r.error_bound != 0) {
            ok = false;
            why << cs.file << " inexact or wrong; ";
        }
    }
    report(6, ok, ok ? "5 programs exact, error_bound 0" : why.str());
}

// --- criterion 7: compile once, relabel many -------------------------------

void criterion7() {
    std::mt19937 g(701);
    Model m;
    std::vector<int> leaves;
    int n = 20;
    std::vector<int> vars;
    for (int v = 0; v < n; ++v) {
        int id = m.reg.add("v" + std::to_string(v), VarKind::Boolean);
        vars.push_back(id);
        leaves.push_back(m.fac.bool_atom(id));
    }
    // random 3-CNF so compilation does measurable work
    std::vector<int> clauses;
    for (int c = 0; c < 45; ++c) {
        std::vector<int> lits;
        for (int j = 0; j < 3; ++j) {
            int l = leaves[g() % n];
            lits.push_back(g() % 2 ? l : m.fac.negate(l));
        }
        clauses.push_back(m.fac.disj(lits));
    }
    int f = m.fac.conj(clauses);

    std::vector<std::map<int, Rat>> specs;
    for (int s = 0; s < 10; ++s) {
        std::map<int, Rat> w;
        for (int id : vars) w[id] = Rat(1 + (int)(g() % 99), 100);
        specs.push_back(std::move(w));
    }

    AbstractionMap map;
    auto t0 = Clock::now();
    DdnnfCircuit c = compile(m.fac, f);
    double compile_once_ms = ms_since(t0);

    bool ok = true;
    std::ostringstream why;
    double relabel_ms = 0, fresh_ms = 0;
    for (const auto& spec : specs) {
        WeightSpec w;
        w.bool_weights = spec;

        auto t1 = Clock::now();
        ProbabilitySemiring prob(w, map);
        Rat reused = amc_evaluate(c, prob);
        relabel_ms += ms_since(t1);

        auto t2 = Clock::now();
        DdnnfCircuit fresh = compile(m.fac, f);
        ProbabilitySemiring prob2(w, map);
        Rat direct = amc_evaluate(fresh, prob2);
        fresh_ms += ms_since(t2);

        if (reused != direct) {
            ok = false;
            why << "value mismatch between reuse and fresh solve; ";
        }
    }
    if (relabel_ms >= fresh_ms) {
        ok = false;
        why << "relabel " << relabel_ms << " ms not faster than recompile " << fresh_ms
            << " ms";
    }
    std::ostringstream d;
    d << "compile once " << compile_once_ms << " ms; 10 relabels " << relabel_ms
      << " ms vs 10 fresh solves " << fresh_ms << " ms"
      << (ok ? "" : "; " + why.str());
    report(7, ok, d.str());
}

// --- criterion 8: bench table shape ----------------------------------------

void criterion8() {
    const char* bin = std::getenv("HWMI_BIN");
    std::string cmd = std::string(bin ? bin : "./build/hwmi") +
                      " bench --models-dir models --runs 2 --timeout-ms 1500 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        report(8, false, "cannot run the bench command");
        return;
    }
    std::string out;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) out += buf;
    int rc = pclose(pipe);

    bool ok = rc == 0;
    std::ostringstream why;
    if (!ok) why << "bench exited with " << rc << "; ";
    std::istringstream is(out);
    std::string line;
    std::getline(is, line);
    if (line.find("kc[ms]") == std::string::npos ||
        line.find("eval[ms]") == std::string::npos) {
        ok = false;
        why << "missing KC/Eval columns; ";
    }
    int rows = 0, discrete = 0, hybrid = 0;
    bool click_timeout = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream ls(line);
        std::string name, dom;
        ls >> name >> dom;
        if (dom == "D") ++discrete;
        if (dom == "H") ++hybrid;
        if (name == "ClickGraph")
            click_timeout = line.find("--") != std::string::npos &&
                            line.find("timeout") != std::string::npos;
    }
    if (rows != 10) {
        ok = false;
        why << rows << " rows instead of 10; ";
    }
    if (discrete != 5 || hybrid != 5) {
        ok = false;
        why << "domain tags D=" << discrete << " H=" << hybrid << "; ";
    }
    if (!click_timeout) {
        ok = false;
        why << "ClickGraph not recorded as timeout; ";
    }
    std::ostringstream d;
    d << "10 rows, D/H tags, ClickGraph timeout \"--\""
      << (ok ? "" : "; " + why.str());
    report(8, ok, d.str());
}

} // namespace

int main() {
    try {
        criterion1();
        criterion2();
        criterion3();
        criterion4();
        criterion5();
        criterion6();
        criterion7();
        criterion8();
    } catch (const std::exception& e) {
        std::printf("acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
