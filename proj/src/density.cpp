#include "hwmi/density.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <sstream>

#include "hwmi/registry.hpp"

namespace hwmi {

Rat poly_eval(const std::vector<Rat>& coefs, const Rat& x) {
    Rat v(0);
    for (auto it = coefs.rbegin(); it != coefs.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<Rat> poly_antiderivative(const std::vector<Rat>& coefs) {
    std::vector<Rat> out(coefs.size() + 1, Rat(0));
    for (size_t k = 0; k < coefs.size(); ++k) out[k + 1] = coefs[k] / Rat(k + 1);
    return out;
}

Density Density::normal(Rat mu, Rat sigma) {
    if (sigma <= 0) throw ModelError("normal: sigma must be > 0");
    Density d;
    d.kind = Normal;
    d.p1 = std::move(mu);
    d.p2 = std::move(sigma);
    return d;
}

Density Density::uniform(Rat lo, Rat hi) {
    if (lo >= hi) throw ModelError("uniform: lo must be < hi");
    Density d;
    d.kind = Uniform;
    d.p1 = std::move(lo);
    d.p2 = std::move(hi);
    return d;
}

Density Density::beta(Rat a, Rat b) {
    if (a <= 0 || b <= 0) throw ModelError("beta: parameters must be > 0");
    Density d;
    d.kind = Beta;
    d.p1 = std::move(a);
    d.p2 = std::move(b);
    return d;
}

Density Density::piecewise(std::vector<PwPiece> pieces) {
    if (pieces.empty()) throw ModelError("piecewise: no pieces");
    Density d;
    d.kind = Piecewise;
    d.pieces = std::move(pieces);
    Rat mass(0);
    for (size_t i = 0; i < d.pieces.size(); ++i) {
        const auto& p = d.pieces[i];
        if (p.lo >= p.hi) throw ModelError("piecewise: empty interval");
        for (size_t j = i + 1; j < d.pieces.size(); ++j) {
            const auto& q = d.pieces[j];
            if (p.lo < q.hi && q.lo < p.hi)
                throw ModelError("piecewise: overlapping intervals");
        }
        auto F = poly_antiderivative(p.coefs);
        mass += poly_eval(F, p.hi) - poly_eval(F, p.lo);
    }
    if (std::fabs(to_double(mass) - 1.0) > 1e-12)
        throw ModelError("piecewise: total mass is not 1");
    return d;
}

bool Density::operator==(const Density& o) const {
    if (kind != o.kind || p1 != o.p1 || p2 != o.p2) return false;
    if (pieces.size() != o.pieces.size()) return false;
    for (size_t i = 0; i < pieces.size(); ++i)
        if (pieces[i].lo != o.pieces[i].lo || pieces[i].hi != o.pieces[i].hi ||
            pieces[i].coefs != o.pieces[i].coefs)
            return false;
    return true;
}

std::string Density::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Normal: os << "normal(" << rat_to_decimal_string(p1) << "," << rat_to_decimal_string(p2) << ")"; break;
        case Uniform: os << "uniform(" << rat_to_decimal_string(p1) << "," << rat_to_decimal_string(p2) << ")"; break;
        case Beta: os << "beta(" << rat_to_decimal_string(p1) << "," << rat_to_decimal_string(p2) << ")"; break;
        case Piecewise: os << "piecewise[" << pieces.size() << "]"; break;
    }
    return os.str();
}

double Density::cdf(double x) const {
    switch (kind) {
        case Normal:
            return boost::math::cdf(boost::math::normal_distribution<double>(to_double(p1), to_double(p2)), x);
        case Uniform: {
            double lo = to_double(p1), hi = to_double(p2);
            if (x <= lo) return 0;
            if (x >= hi) return 1;
            return (x - lo) / (hi - lo);
        }
        case Beta:
            if (x <= 0) return 0;
            if (x >= 1) return 1;
            return boost::math::cdf(boost::math::beta_distribution<double>(to_double(p1), to_double(p2)), x);
        case Piecewise: {
            double acc = 0;
            for (const auto& p : pieces) {
                double lo = to_double(p.lo), hi = to_double(p.hi);
                if (x <= lo) continue;
                double ub = std::min(x, hi);
                auto F = poly_antiderivative(p.coefs);
                double v = 0, lpow = 1, upow = 1;
                for (size_t k = 0; k < F.size(); ++k) {
                    v += to_double(F[k]) * (upow - lpow);
                    lpow *= lo;
                    upow *= ub;
                }
                acc += v;
            }
            return acc;
        }
    }
    return 0;
}

double Density::pdf(double x) const {
    switch (kind) {
        case Normal:
            return boost::math::pdf(boost::math::normal_distribution<double>(to_double(p1), to_double(p2)), x);
        case Uniform: {
            double lo = to_double(p1), hi = to_double(p2);
            return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
        }
        case Beta:
            if (x <= 0 || x >= 1) return 0;
            return boost::math::pdf(boost::math::beta_distribution<double>(to_double(p1), to_double(p2)), x);
        case Piecewise:
            for (const auto& p : pieces) {
                if (x >= to_double(p.lo) && x <= to_double(p.hi)) {
                    double v = 0, xp = 1;
                    for (const auto& c : p.coefs) {
                        v += to_double(c) * xp;
                        xp *= x;
                    }
                    return v;
                }
            }
            return 0;
    }
    return 0;
}

double Density::quantile(double u) const {
    const double eps = 1e-15;
    u = std::min(std::max(u, eps), 1 - eps);
    switch (kind) {
        case Normal:
            return boost::math::quantile(boost::math::normal_distribution<double>(to_double(p1), to_double(p2)), u);
        case Uniform: {
            double lo = to_double(p1), hi = to_double(p2);
            return lo + u * (hi - lo);
        }
        case Beta:
            return boost::math::quantile(boost::math::beta_distribution<double>(to_double(p1), to_double(p2)), u);
        case Piecewise: {
            // bisection on the cdf over the support
            double lo = to_double(pieces.front().lo), hi = to_double(pieces.front().hi);
            for (const auto& p : pieces) {
                lo = std::min(lo, to_double(p.lo));
                hi = std::max(hi, to_double(p.hi));
            }
            for (int i = 0; i < 80; ++i) {
                double mid = 0.5 * (lo + hi);
                if (cdf(mid) < u)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0;
}

bool Density::polynomial() const {
    switch (kind) {
        case Uniform:
        case Piecewise: return true;
        case Beta: return denominator(p1) == 1 && denominator(p2) == 1;
        case Normal: return false;
    }
    return false;
}

static std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<PwPiece> Density::as_pieces() const {
    switch (kind) {
        case Uniform:
            return {{p1, p2, {Rat(1) / (p2 - p1)}}};
        case Piecewise:
            return pieces;
        case Beta: {
            long a = p1.convert_to<long>(), b = p2.convert_to<long>();
            // x^(a-1) (1-x)^(b-1) / B(a,b), B(a,b) = (a-1)!(b-1)!/(a+b-1)!
            std::vector<Rat> poly{Rat(1)};
            for (long i = 0; i < a - 1; ++i) poly = poly_mul(poly, {Rat(0), Rat(1)});
            for (long i = 0; i < b - 1; ++i) poly = poly_mul(poly, {Rat(1), Rat(-1)});
            Rat inv_beta(1);
            for (long k = 2; k <= a + b - 1; ++k) inv_beta *= k;
            for (long k = 2; k <= a - 1; ++k) inv_beta /= k;
            for (long k = 2; k <= b - 1; ++k) inv_beta /= k;
            for (auto& c : poly) c *= inv_beta;
            return {{Rat(0), Rat(1), poly}};
        }
        case Normal:
            throw ModelError("normal density has no polynomial form");
    }
    return {};
}

Rat Density::mass_exact(const std::optional<Rat>& lo, const std::optional<Rat>& hi) const {
    Rat acc(0);
    for (const auto& p : as_pieces()) {
        Rat a = p.lo, b = p.hi;
        if (lo && *lo > a) a = *lo;
        if (hi && *hi < b) b = *hi;
        if (a >= b) continue;
        auto F = poly_antiderivative(p.coefs);
        acc += poly_eval(F, b) - poly_eval(F, a);
    }
    return acc;
}

} // namespace hwmi
