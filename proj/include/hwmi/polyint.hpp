#pragma once

#include <map>
#include <string>
#include <vector>

#include "hwmi/deadline.hpp"
#include "hwmi/rational.hpp"
#include "hwmi/registry.hpp"

namespace hwmi {

// c0 + sum coef[v] * x_v
struct LinExpr {
    Rat c0;
    std::map<int, Rat> coef;

    bool is_constant() const { return coef.empty(); }
    bool operator==(const LinExpr& o) const = default;

    LinExpr& operator+=(const LinExpr& o);
    LinExpr& operator-=(const LinExpr& o);
    LinExpr& operator*=(const Rat& k);
    void drop_zeros();
};

// expr <= 0 (strictness is irrelevant to the integral; everything is
// normalized to the closed form)
struct LinConstraint {
    LinExpr expr;
};

// Multivariate polynomial: exponent vector -> coefficient.
class Poly {
public:
    static Poly constant(Rat c);
    static Poly var(int v);
    static Poly from_linear(const LinExpr& e);
    // Univariate coefficient list c0 + c1 x + ... in variable v.
    static Poly from_coeffs(int v, const std::vector<Rat>& coeffs);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const;

    Poly& operator+=(const Poly& o);
    Poly& operator*=(const Rat& k);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator-(Poly a, const Poly& b);

    Poly antiderivative(int v) const;
    // Substitute x_v := e.
    Poly subst(int v, const LinExpr& e) const;
    int degree(int v) const;

    const std::map<std::map<int, int>, Rat>& terms() const { return terms_; }

private:
    std::map<std::map<int, int>, Rat> terms_;
};

// Exact value of  integral of p over { x : all constraints hold }  with
// respect to Lebesgue measure on the listed variables, by sequential
// elimination with case splits over active bounds.  Every variable must be
// bounded below and above by the constraints; throws ModelError otherwise.
Rat integrate_polytope(const Poly& p, std::vector<LinConstraint> cons,
                       std::vector<int> vars, const Deadline& dl = {});

} // namespace hwmi
