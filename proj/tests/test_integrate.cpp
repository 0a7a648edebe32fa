#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/normal.hpp>

#include "hwmi/halpl.hpp"
#include "hwmi/oracle.hpp"
#include "hwmi/polyint.hpp"

using namespace hwmi;

namespace {

// unit box 0 <= x_v <= 1 as constraints
std::vector<LinConstraint> unit_box(const std::vector<int>& vars) {
    std::vector<LinConstraint> cons;
    for (int v : vars) {
        LinExpr lo;                      // -x <= 0
        lo.coef[v] = -1;
        cons.push_back({lo});
        LinExpr hi;                      // x - 1 <= 0
        hi.coef[v] = 1;
        hi.c0 = -1;
        cons.push_back({hi});
    }
    return cons;
}

} // namespace

TEST_CASE("integrate_polytope on known volumes") {
    SUBCASE("interval integral of x over [0,1]") {
        auto cons = unit_box({0});
        CHECK(integrate_polytope(Poly::var(0), cons, {0}) == Rat(1, 2));
    }
    SUBCASE("triangle x <= y in the unit square") {
        auto cons = unit_box({0, 1});
        LinExpr e;   // x - y <= 0
        e.coef[0] = 1;
        e.coef[1] = -1;
        cons.push_back({e});
        CHECK(integrate_polytope(Poly::constant(Rat(1)), cons, {0, 1}) == Rat(1, 2));
    }
    SUBCASE("simplex x + y + z <= 1") {
        auto cons = unit_box({0, 1, 2});
        LinExpr e;
        e.coef[0] = e.coef[1] = e.coef[2] = 1;
        e.c0 = -1;
        cons.push_back({e});
        CHECK(integrate_polytope(Poly::constant(Rat(1)), cons, {0, 1, 2}) == Rat(1, 6));
    }
    SUBCASE("polynomial integrand over a triangle") {
        // int_{0<=y<=x<=1} x*y = 1/8
        auto cons = unit_box({0, 1});
        LinExpr e;   // y - x <= 0
        e.coef[1] = 1;
        e.coef[0] = -1;
        cons.push_back({e});
        CHECK(integrate_polytope(Poly::var(0) * Poly::var(1), cons, {0, 1}) == Rat(1, 8));
    }
    SUBCASE("unbounded variable throws") {
        std::vector<LinConstraint> cons;
        LinExpr lo;
        lo.coef[0] = -1;
        cons.push_back({lo});
        CHECK_THROWS_AS(integrate_polytope(Poly::constant(Rat(1)), cons, {0}), ModelError);
    }
    SUBCASE("infeasible region integrates to zero") {
        auto cons = unit_box({0});
        LinExpr e;   // x - 2 >= 0, i.e. 2 - x <= 0
        e.coef[0] = -1;
        e.c0 = 2;
        cons.push_back({e});
        CHECK(integrate_polytope(Poly::constant(Rat(1)), cons, {0}) == 0);
    }
}

TEST_CASE("density masses") {
    Density b = Density::beta(Rat(2), Rat(5));
    CHECK(b.polynomial());
    CHECK(b.mass_exact(std::nullopt, std::nullopt) == 1);
    // int_0^1/2 30 x (1-x)^4 dx = 57/64
    CHECK(b.mass_exact(std::nullopt, Rat(1, 2)) == Rat(57, 64));
    Density u = Density::uniform(Rat(-2), Rat(2));
    CHECK(u.mass_exact(Rat(0), Rat(1)) == Rat(1, 4));
    Density n = Density::normal(Rat(0), Rat(1));
    CHECK_FALSE(n.polynomial());
    CHECK(n.cdf(0) == doctest::Approx(0.5));
    CHECK(n.quantile(n.cdf(1.3)) == doctest::Approx(1.3));
}

TEST_CASE("closed-form CDF path on the mixture anchor") {
    auto m = parse_model_file("models/broken.hwmi");
    WmiResult r = solve_wmi(*m, "broken");
    CHECK(r.method == "closed-form");
    CHECK(r.exact);
    CHECK(r.error_bound == 0);
    boost::math::normal N01;
    double want = 0.01 * (cdf(N01, 2.0) - cdf(N01, 0.0)) + (1 - cdf(N01, 2.0));
    CHECK(std::abs(r.value - want) < 1e-12);
    CHECK(r.exact_form.find("Phi(2)") != std::string::npos);
}

TEST_CASE("polytope path on linear multivariate models") {
    SUBCASE("P(x > y), both uniform(0,1)") {
        auto m = parse_model(
            "var real x ~ uniform(0,1);\nvar real y ~ uniform(0,1);\n"
            "formula f := x > y;\nquery f;\n");
        WmiResult r = solve_wmi(*m, "f");
        CHECK(r.method == "polytope");
        REQUIRE(r.exact_value.has_value());
        CHECK(*r.exact_value == Rat(1, 2));
    }
    SUBCASE("P(x + y < 1) with a Boolean mixture") {
        auto m = parse_model(
            "var bool a ~ bernoulli(0.25);\n"
            "var real x ~ uniform(0,1);\nvar real y ~ uniform(0,1);\n"
            "formula f := a & x + y < 1;\nquery f;\n");
        WmiResult r = solve_wmi(*m, "f");
        REQUIRE(r.exact_value.has_value());
        CHECK(*r.exact_value == Rat(1, 8));
    }
    SUBCASE("beta density folds into the polytope") {
        auto m = parse_model(
            "var real b ~ beta(2,5);\nvar real u ~ uniform(0,1);\n"
            "formula f := u < b;\nquery f;\n");
        WmiResult r = solve_wmi(*m, "f");
        REQUIRE(r.exact_value.has_value());
        CHECK(*r.exact_value == Rat(2, 7));   // E[b] for beta(2,5)
    }
}

TEST_CASE("equality atoms carry zero measure and a warning") {
    auto m = parse_model(
        "var real x ~ uniform(0,1);\nformula f := x = 1/2;\nquery f;\n");
    WmiResult r = solve_wmi(*m, "f");
    CHECK(r.value == 0);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("quadrature path on nonlinear univariate atoms") {
    auto m = parse_model(
        "var real t ~ uniform(-2,2);\nformula f := t^2 < 1;\nquery f;\n");
    WmiResult r = solve_wmi(*m, "f");
    CHECK(r.method == "quadrature");
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("monte-carlo path is seed-deterministic") {
    auto text =
        "var real x ~ uniform(0,1);\nvar real y ~ uniform(0,1);\n"
        "var real z ~ uniform(0,1);\n"
        "formula f := x^2 + y^2 < 1 & z < 1/2;\nquery f;\n";
    SolveOptions opts;
    opts.integrate.seed = 99;
    opts.integrate.mc_samples = 50000;
    auto m3 = parse_model(text);
    WmiResult a = solve_wmi(*m3, "f", opts);
    auto m4 = parse_model(text);
    WmiResult b = solve_wmi(*m4, "f", opts);
    CHECK(a.method == "monte-carlo");
    CHECK(a.value == b.value);
    CHECK(a.error_bound > 0);
    CHECK(a.value == doctest::Approx(3.14159265 / 8).epsilon(0.05));
}

TEST_CASE("attach_densities factors guard probabilities") {
    HalProgram p = parse_halpl_file("models/machine.halpl");
    auto m = halpl_to_model(p);
    int f = m->formula("broken");
    AbstractionMap map;
    int prop = abstract(m->fac, f, m->reg, map);
    DdnnfCircuit c = compile(m->fac, prop);
    DensitySemiring sem(m->atoms, m->weights, map);
    SemiringElement e = amc_evaluate(c, sem);
    auto parts = attach_densities(m->atoms, m->weights, e);
    REQUIRE(!parts.empty());
    bool mixture = false;
    for (const auto& pt : parts)
        if (!pt.guard.empty()) mixture = true;
    CHECK(mixture);

    // the enumeration oracle mixes incompatible aliases in single monomials;
    // they integrate factor-wise to the same value
    SemiringElement en = enumerate_amc(m->fac, prop, m->weights, map);
    WmiResult r2 = integrate(m->atoms, m->reg, m->weights,
                             attach_densities(m->atoms, m->weights, en));

    WmiResult r = integrate(m->atoms, m->reg, m->weights, parts);
    boost::math::normal N01;
    double mix0 = 0.01 * (cdf(N01, 2.0) - cdf(N01, 0.0)) + (1 - cdf(N01, 2.0));
    double mix1 = 0.01 * (cdf(N01, 0.6) - cdf(N01, -1.4)) + (1 - cdf(N01, 0.6));
    CHECK(std::abs(r.value - (0.8 * mix0 + 0.2 * mix1)) < 1e-12);
    CHECK(std::abs(r2.value - r.value) < 1e-12);
}

TEST_CASE("solve honors the timeout") {
    auto m = parse_model_file("models/broken.hwmi");
    SolveOptions opts;
    opts.compile.timeout_ms = 0;
    CHECK_THROWS_AS(solve_wmi(*m, "broken", opts), TimeoutError);
}
