#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hwmi/abstraction.hpp"
#include "hwmi/halpl.hpp"
#include "hwmi/integrate.hpp"
#include "hwmi/oracle.hpp"

using json = nlohmann::json;
using namespace hwmi;

namespace {

struct LoadedModel {
    std::unique_ptr<Model> model;
    double ground_ms = 0;
    std::string ground_dump;
};

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

LoadedModel load(const std::string& path, bool want_dump) {
    LoadedModel lm;
    auto t0 = std::chrono::steady_clock::now();
    if (ends_with(path, ".halpl")) {
        HalProgram p = parse_halpl_file(path);
        lm.model = halpl_to_model(p, want_dump ? &lm.ground_dump : nullptr);
    } else {
        lm.model = parse_model_file(path);
    }
    lm.ground_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    return lm;
}

std::vector<std::string> pick_queries(const Model& m, std::vector<std::string> chosen) {
    if (!chosen.empty()) {
        for (const auto& q : chosen)
            if (!m.has_formula(q)) throw ModelError("unknown query: " + q);
        return chosen;
    }
    if (m.queries.empty()) throw ModelError("model declares no queries");
    return m.queries;
}

json result_json(const std::string& query, const WmiResult& r) {
    json j;
    j["query"] = query;
    j["value"] = r.value;
    j["error_bound"] = r.error_bound;
    j["method"] = r.method;
    j["exact"] = r.exact;
    j["timings"] = {{"ground_ms", r.ground_ms},
                    {"kc_ms", r.kc_ms},
                    {"eval_ms", r.eval_ms},
                    {"integrate_ms", r.integrate_ms}};
    if (r.exact) j["exact_form"] = r.exact_form;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

void print_pretty(const std::string& query, const WmiResult& r) {
    printf("%s = %.12g", query.c_str(), r.value);
    if (r.exact)
        printf("  (exact, %s)\n", r.method.c_str());
    else
        printf("  +- %.3g  (%s)\n", r.error_bound, r.method.c_str());
    if (r.exact && !r.exact_form.empty()) printf("  form: %s\n", r.exact_form.c_str());
    printf("  timings: ground %.2fms, compile %.2fms, eval %.2fms, integrate %.2fms\n",
           r.ground_ms, r.kc_ms, r.eval_ms, r.integrate_ms);
    for (const auto& w : r.warnings) printf("  warning: %s\n", w.c_str());
}

std::optional<std::vector<int>> resolve_order(const Model& m, const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    std::vector<int> order;
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) {
        int v = m.reg.find(name);
        if (v < 0) throw ModelError("unknown variable in --var-order: " + name);
        order.push_back(v);
    }
    return order;
}

struct CommonOpts {
    uint64_t seed = 0;
    long mc_samples = 100000;
    long timeout_ms = 60000;
    std::string format = "pretty";
    std::string var_order;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "RNG seed for sampling-based paths");
    cmd->add_option("--mc-samples", o.mc_samples, "Monte-Carlo sample count");
    cmd->add_option("--timeout-ms", o.timeout_ms, "per-stage timeout in milliseconds");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "pretty"}));
    cmd->add_option("--var-order", o.var_order,
                    "comma-separated decision-variable order for compilation");
}

SolveOptions to_solve_options(const CommonOpts& o) {
    SolveOptions s;
    s.compile.timeout_ms = o.timeout_ms;
    s.integrate.timeout_ms = o.timeout_ms;
    s.integrate.seed = o.seed;
    s.integrate.mc_samples = o.mc_samples;
    return s;
}

int cmd_solve(const std::string& file, const CommonOpts& o,
              const std::vector<std::string>& queries, const std::string& semiring,
              bool dump_ground) {
    LoadedModel lm = load(file, dump_ground);
    if (dump_ground) {
        if (!ends_with(file, ".halpl"))
            throw ModelError("--dump-ground requires a .halpl program");
        fputs(lm.ground_dump.c_str(), stdout);
        return 0;
    }
    Model& m = *lm.model;
    SolveOptions so = to_solve_options(o);
    so.compile.order = resolve_order(m, o.var_order);

    json records = json::array();
    for (const auto& q : pick_queries(m, queries)) {
        if (semiring == "density") {
            WmiResult r = solve_wmi(m, q, so);
            r.ground_ms = lm.ground_ms;
            if (o.format == "json")
                records.push_back(result_json(q, r));
            else
                print_pretty(q, r);
        } else {
            AbstractionMap map;
            int prop = abstract(m.fac, m.formula(q), m.reg, map);
            DdnnfCircuit c = compile(m.fac, prop, so.compile);
            if (semiring == "counting") {
                DdnnfCircuit sm = smooth(c, m.fac.vars(prop));
                BigInt n = model_count(sm, m.fac.vars(prop));
                if (o.format == "json")
                    records.push_back({{"query", q}, {"model_count", n.str()}});
                else
                    printf("%s: %s models over %zu variables\n", q.c_str(), n.str().c_str(),
                           m.fac.vars(prop).size());
            } else {   // probability
                ProbabilitySemiring sem(m.weights, map);
                Rat p = amc_evaluate(c, sem);
                if (o.format == "json")
                    records.push_back({{"query", q},
                                       {"value", to_double(p)},
                                       {"exact_form", rat_to_string(p)},
                                       {"exact", true}});
                else
                    printf("%s = %.12g  (exact, %s)\n", q.c_str(), to_double(p),
                           rat_to_string(p).c_str());
            }
        }
    }
    if (o.format == "json") printf("%s\n", records.dump(2).c_str());
    return 0;
}

int cmd_compile(const std::string& file, const CommonOpts& o, std::string formula,
                const std::string& out_path) {
    LoadedModel lm = load(file, false);
    Model& m = *lm.model;
    if (formula.empty()) {
        auto qs = pick_queries(m, {});
        formula = qs.front();
    }
    AbstractionMap map;
    int prop = abstract(m.fac, m.formula(formula), m.reg, map);
    CompileOptions co;
    co.timeout_ms = o.timeout_ms;
    co.order = resolve_order(m, o.var_order);
    CompileStats stats;
    DdnnfCircuit c = compile(m.fac, prop, co, &stats);
    VerifyReport rep = verify_ddnnf(c, m.reg);
    if (!rep.ok()) throw ModelError("compiled circuit failed verification");
    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!out_path.empty()) {
        f.open(out_path);
        if (!f) throw ModelError("cannot write " + out_path);
        os = &f;
    }
    write_circuit(*os, c, static_cast<int>(m.reg.size()));
    fprintf(stderr, "%zu nodes, %zu decisions, %zu cache hits\n", c.size(), stats.decisions,
            stats.cache_hits);
    return 0;
}

int cmd_check(const std::string& file, const CommonOpts& o) {
    LoadedModel lm = load(file, false);
    Model& m = *lm.model;
    SolveOptions so = to_solve_options(o);
    bool all_ok = true;
    for (const auto& q : pick_queries(m, {})) {
        WmiResult r = solve_wmi(m, q, so);

        // oracle 1: brute-force AMC enumeration, then the same integrator
        AbstractionMap map;
        int prop = abstract(m.fac, m.formula(q), m.reg, map);
        double enum_val = r.value;
        bool enum_done = false;
        if (m.fac.vars(prop).size() <= 22) {
            SemiringElement e = enumerate_amc(m.fac, prop, m.weights, map);
            auto gs = attach_densities(m.atoms, m.weights, e);
            WmiResult er = integrate(m.atoms, m.reg, m.weights, gs, so.integrate);
            enum_val = er.value;
            enum_done = true;
        }

        // oracle 2: direct Monte Carlo over the model
        McEstimate mc = mc_wmi(m, q, o.seed, o.mc_samples);

        double tol = std::max(3.0 * mc.error_bound / 2.0, 1e-6);
        bool ok = (!enum_done || std::abs(enum_val - r.value) < 1e-9) &&
                  std::abs(mc.value - r.value) < tol + r.error_bound;
        all_ok = all_ok && ok;
        printf("%-20s pipeline=%.10g  enum=%s  mc=%.6g+-%.2g  %s\n", q.c_str(), r.value,
               enum_done ? std::to_string(enum_val).c_str() : "n/a", mc.value,
               mc.error_bound, ok ? "OK" : "MISMATCH");
    }
    return all_ok ? 0 : 2;
}

struct BenchCase {
    const char* name;
    const char* file;
    const char* query;
    char domain;   // D = discrete, H = hybrid
};

int cmd_bench(const CommonOpts& o, const std::string& models_dir, int runs) {
    const BenchCase cases[] = {
        {"BurglarAlarm", "burglar_alarm.halpl", "calls", 'D'},
        {"Grass", "grass.halpl", "wet", 'D'},
        {"NoisyOR", "noisy_or.halpl", "q", 'D'},
        {"TwoCoins", "two_coins.halpl", "someHeads", 'D'},
        {"MurderMystery", "murder_mystery.halpl", "gun", 'D'},
        {"CoinBias", "coin_bias.halpl", "heads", 'H'},
        {"ClinicalTrial", "clinical_trial.halpl", "effective", 'H'},
        {"AddFun/max", "addfun_max.halpl", "maxBig", 'H'},
        {"AddFun/sum", "addfun_sum.halpl", "sumBig", 'H'},
        {"ClickGraph", "click_graph.halpl", "similar", 'H'},
    };
    printf("%-15s %-3s %10s %10s %12s %12s  %s\n", "benchmark", "dom", "kc[ms]",
           "eval[ms]", "value", "oracle", "method");
    for (const BenchCase& bc : cases) {
        std::string path = models_dir + "/" + bc.file;
        double kc = 0, ev = 0;
        WmiResult last;
        bool failed = false;
        std::string note;
        try {
            LoadedModel lm = load(path, false);
            SolveOptions so = to_solve_options(o);
            for (int i = 0; i < runs; ++i) {
                WmiResult r = solve_wmi(*lm.model, bc.query, so);
                kc += r.kc_ms;
                ev += r.eval_ms + r.integrate_ms;
                last = r;
            }
            kc /= runs;
            ev /= runs;

            double oracle;
            if (bc.domain == 'D') {
                AbstractionMap map;
                int prop = abstract(lm.model->fac, lm.model->formula(bc.query),
                                    lm.model->reg, map);
                oracle = to_double(enumerate_wmc(lm.model->fac, prop, lm.model->weights));
            } else {
                oracle = mc_wmi(*lm.model, bc.query, o.seed, o.mc_samples).value;
            }
            printf("%-15s %-3c %10.3f %10.3f %12.6g %12.6g  %s\n", bc.name, bc.domain, kc,
                   ev, last.value, oracle, last.method.c_str());
        } catch (const TimeoutError&) {
            failed = true;
            note = "timeout";
        } catch (const ModelError& e) {
            failed = true;
            note = e.what();
        }
        if (failed)
            printf("%-15s %-3c %10s %10s %12s %12s  %s\n", bc.name, bc.domain, "--", "--",
                   "--", "--", note.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact weighted model integration over hybrid models"};
    app.require_subcommand(1);

    std::string file, semiring = "density", formula, out_path, models_dir = "models";
    std::vector<std::string> queries;
    bool dump_ground = false;
    int runs = 50;
    CommonOpts so_opts, co_opts, ck_opts, be_opts;
    be_opts.timeout_ms = 3000;

    CLI::App* solve = app.add_subcommand("solve", "solve the queries of a model");
    solve->add_option("file", file, "model file (.hwmi or .halpl)")->required();
    solve->add_option("--query", queries, "query name (repeatable; default: all)");
    solve->add_option("--semiring", semiring, "evaluation semiring")
        ->check(CLI::IsMember({"density", "counting", "probability"}));
    solve->add_flag("--dump-ground", dump_ground, "print the grounded program and exit");
    add_common(solve, so_opts);

    CLI::App* comp = app.add_subcommand("compile", "compile a formula and emit the circuit");
    comp->add_option("file", file, "model file")->required();
    comp->add_option("--formula", formula, "formula name (default: first query)");
    comp->add_option("-o,--output", out_path, "output path (default: stdout)");
    add_common(comp, co_opts);

    CLI::App* check = app.add_subcommand("check", "compare the pipeline against the oracles");
    check->add_option("file", file, "model file")->required();
    add_common(check, ck_opts);

    CLI::App* bench = app.add_subcommand("bench", "run the bundled benchmark suite");
    bench->add_option("--models-dir", models_dir, "benchmark model directory");
    bench->add_option("--runs", runs, "averaging runs per benchmark");
    add_common(bench, be_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(file, so_opts, queries, semiring, dump_ground);
        if (comp->parsed()) return cmd_compile(file, co_opts, formula, out_path);
        if (check->parsed()) return cmd_check(file, ck_opts);
        if (bench->parsed()) return cmd_bench(be_opts, models_dir, runs);
    } catch (const ParseError& e) {
        fprintf(stderr, "parse error: %s\n", e.what());
        return 1;
    } catch (const TimeoutError& e) {
        fprintf(stderr, "timeout: %s\n", e.what());
        return 3;
    } catch (const ModelError& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
