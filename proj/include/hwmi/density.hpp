#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hwmi/rational.hpp"

namespace hwmi {

struct PwPiece {
    Rat lo, hi;
    std::vector<Rat> coefs;   // polynomial in x, coefs[k] * x^k
};

// One-variable parametric distribution.
struct Density {
    enum Kind { Normal, Uniform, Beta, Piecewise };
    Kind kind = Normal;
    Rat p1, p2;                 // mu/sigma, lo/hi, alpha/beta
    std::vector<PwPiece> pieces;

    static Density normal(Rat mu, Rat sigma);
    static Density uniform(Rat lo, Rat hi);
    static Density beta(Rat a, Rat b);
    static Density piecewise(std::vector<PwPiece> pieces);

    bool operator==(const Density& o) const;
    std::string to_string() const;

    double cdf(double x) const;
    double quantile(double u) const;   // u in (0,1)
    double pdf(double x) const;

    // True when the density is exactly a piecewise polynomial with rational
    // coefficients (uniform, piecewise, beta with integer parameters).
    bool polynomial() const;
    std::vector<PwPiece> as_pieces() const;

    // Exact mass of (lo, hi] for polynomial densities.
    Rat mass_exact(const std::optional<Rat>& lo, const std::optional<Rat>& hi) const;
};

Rat poly_eval(const std::vector<Rat>& coefs, const Rat& x);
std::vector<Rat> poly_antiderivative(const std::vector<Rat>& coefs);

} // namespace hwmi
