#include "hwmi/polyint.hpp"

#include <algorithm>

namespace hwmi {

LinExpr& LinExpr::operator+=(const LinExpr& o) {
    c0 += o.c0;
    for (auto& [v, c] : o.coef) coef[v] += c;
    drop_zeros();
    return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
    c0 -= o.c0;
    for (auto& [v, c] : o.coef) coef[v] -= c;
    drop_zeros();
    return *this;
}

LinExpr& LinExpr::operator*=(const Rat& k) {
    c0 *= k;
    for (auto& [v, c] : coef) c *= k;
    drop_zeros();
    return *this;
}

void LinExpr::drop_zeros() {
    for (auto it = coef.begin(); it != coef.end();)
        it = it->second == 0 ? coef.erase(it) : std::next(it);
}

Poly Poly::constant(Rat c) {
    Poly p;
    if (c != 0) p.terms_[{}] = std::move(c);
    return p;
}

Poly Poly::var(int v) {
    Poly p;
    p.terms_[{{v, 1}}] = 1;
    return p;
}

Poly Poly::from_linear(const LinExpr& e) {
    Poly p = constant(e.c0);
    for (auto& [v, c] : e.coef)
        if (c != 0) p.terms_[{{v, 1}}] += c;
    for (auto it = p.terms_.begin(); it != p.terms_.end();)
        it = it->second == 0 ? p.terms_.erase(it) : std::next(it);
    return p;
}

Poly Poly::from_coeffs(int v, const std::vector<Rat>& coeffs) {
    Poly p;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        std::map<int, int> e;
        if (i > 0) e[v] = static_cast<int>(i);
        p.terms_[e] += coeffs[i];
    }
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw ModelError("polynomial is not constant");
    return terms_.begin()->second;
}

Poly& Poly::operator+=(const Poly& o) {
    for (auto& [e, c] : o.terms_) {
        Rat& slot = terms_[e];
        slot += c;
        if (slot == 0) terms_.erase(e);
    }
    return *this;
}

Poly& Poly::operator*=(const Rat& k) {
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= k;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ea, ca] : a.terms_)
        for (auto& [eb, cb] : b.terms_) {
            std::map<int, int> e = ea;
            for (auto& [v, p] : eb) e[v] += p;
            Rat& slot = r.terms_[e];
            slot += ca * cb;
            if (slot == 0) r.terms_.erase(e);
        }
    return r;
}

Poly operator-(Poly a, const Poly& b) {
    Poly nb = b;
    nb *= Rat(-1);
    a += nb;
    return a;
}

Poly Poly::antiderivative(int v) const {
    Poly r;
    for (auto& [e, c] : terms_) {
        std::map<int, int> e2 = e;
        int p = e2.count(v) ? e2[v] : 0;
        e2[v] = p + 1;
        r.terms_[e2] += c / Rat(p + 1);
    }
    return r;
}

Poly Poly::subst(int v, const LinExpr& e) const {
    Poly repl = from_linear(e);
    // cache powers of the replacement
    std::vector<Poly> powers{constant(1)};
    Poly r;
    for (auto& [exp, c] : terms_) {
        auto it = exp.find(v);
        if (it == exp.end()) {
            Poly t;
            t.terms_[exp] = c;
            r += t;
            continue;
        }
        int p = it->second;
        while (static_cast<int>(powers.size()) <= p)
            powers.push_back(powers.back() * repl);
        std::map<int, int> rest = exp;
        rest.erase(v);
        Poly t;
        t.terms_[rest] = c;
        r += t * powers[p];
    }
    return r;
}

int Poly::degree(int v) const {
    int d = 0;
    for (auto& [e, c] : terms_) {
        auto it = e.find(v);
        if (it != e.end()) d = std::max(d, it->second);
    }
    return d;
}

namespace {

Rat eliminate(const Poly& p, std::vector<LinConstraint> cons, std::vector<int> vars,
              const Deadline& dl) {
    dl.check();
    // resolve constraints that became constant
    for (auto it = cons.begin(); it != cons.end();) {
        if (it->expr.is_constant()) {
            if (it->expr.c0 > 0) return 0;   // infeasible case
            it = cons.erase(it);
        } else {
            ++it;
        }
    }
    if (vars.empty()) {
        if (!p.is_constant()) throw ModelError("integrand mentions unintegrated variables");
        return p.constant_value();
    }

    // eliminate the variable with the fewest bound pairs
    size_t best = 0;
    long best_cost = -1;
    for (size_t i = 0; i < vars.size(); ++i) {
        long lo = 0, hi = 0;
        for (auto& c : cons) {
            auto it = c.expr.coef.find(vars[i]);
            if (it == c.expr.coef.end()) continue;
            (it->second < 0 ? lo : hi)++;
        }
        long cost = lo * hi;
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best = i;
        }
    }
    int v = vars[best];
    vars.erase(vars.begin() + best);

    // a*x + r <= 0:  a > 0 gives x <= -r/a (upper); a < 0 gives x >= -r/a (lower)
    std::vector<LinExpr> lowers, uppers;
    std::vector<LinConstraint> rest;
    for (auto& c : cons) {
        auto it = c.expr.coef.find(v);
        if (it == c.expr.coef.end()) {
            rest.push_back(std::move(c));
            continue;
        }
        Rat a = it->second;
        LinExpr bound = c.expr;
        bound.coef.erase(v);
        bound *= Rat(-1) / a;
        auto& side = a < 0 ? lowers : uppers;
        if (std::find(side.begin(), side.end(), bound) == side.end())
            side.push_back(std::move(bound));
    }
    if (lowers.empty() || uppers.empty())
        throw ModelError("unbounded integration variable");

    Poly anti = p.antiderivative(v);
    Rat total = 0;
    for (size_t li = 0; li < lowers.size(); ++li)
        for (size_t ui = 0; ui < uppers.size(); ++ui) {
            // case: lowers[li] is the max lower bound, uppers[ui] the min upper
            std::vector<LinConstraint> sub = rest;
            for (size_t j = 0; j < lowers.size(); ++j) {
                if (j == li) continue;
                LinExpr g = lowers[j];
                g -= lowers[li];
                sub.push_back({std::move(g)});   // L_j <= L_li
            }
            for (size_t j = 0; j < uppers.size(); ++j) {
                if (j == ui) continue;
                LinExpr g = uppers[ui];
                g -= uppers[j];
                sub.push_back({std::move(g)});   // U_ui <= U_j
            }
            LinExpr nonempty = lowers[li];
            nonempty -= uppers[ui];
            sub.push_back({std::move(nonempty)});   // L <= U
            Poly piece = anti.subst(v, uppers[ui]) - anti.subst(v, lowers[li]);
            if (piece.is_zero()) continue;
            total += eliminate(piece, std::move(sub), vars, dl);
        }
    return total;
}

} // namespace

Rat integrate_polytope(const Poly& p, std::vector<LinConstraint> cons,
                       std::vector<int> vars, const Deadline& dl) {
    if (p.is_zero()) return 0;
    return eliminate(p, std::move(cons), std::move(vars), dl);
}

} // namespace hwmi
