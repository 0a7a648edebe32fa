#include "hwmi/atom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hwmi {

const char* cmp_to_string(Cmp c) {
    switch (c) {
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Ge: return ">=";
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "!=";
    }
    return "?";
}

static Cmp flip(Cmp c) {
    switch (c) {
        case Cmp::Lt: return Cmp::Gt;
        case Cmp::Le: return Cmp::Ge;
        case Cmp::Gt: return Cmp::Lt;
        case Cmp::Ge: return Cmp::Le;
        default: return c;
    }
}

NraAtom canonicalize(const NraAtom& a, const VariableRegistry& reg) {
    NraAtom r;
    r.cmp = a.cmp;
    r.bound = a.bound;

    // merge like terms, drop zeros
    std::vector<AtomTerm> terms = a.terms;
    std::sort(terms.begin(), terms.end(), [&](const AtomTerm& x, const AtomTerm& y) {
        if (x.var != y.var) return reg.name(x.var) < reg.name(y.var);
        return x.power < y.power;
    });
    for (const auto& t : terms) {
        if (t.power <= 0) throw ModelError("atom power must be positive");
        if (!r.terms.empty() && r.terms.back().var == t.var && r.terms.back().power == t.power)
            r.terms.back().coef += t.coef;
        else
            r.terms.push_back(t);
    }
    r.terms.erase(std::remove_if(r.terms.begin(), r.terms.end(),
                                 [](const AtomTerm& t) { return t.coef == 0; }),
                  r.terms.end());
    if (r.terms.empty()) throw ModelError("atom has no non-zero term");

    // scale by the signed leading coefficient (so it becomes +1) and flip
    // the comparator when the leading coefficient was negative
    Rat lead = r.terms.front().coef;
    for (auto& t : r.terms) t.coef /= lead;
    r.bound /= lead;
    if (lead < 0) r.cmp = flip(r.cmp);

    // keep only {<, <=, =, !=}
    if (r.cmp == Cmp::Gt || r.cmp == Cmp::Ge) {
        for (auto& t : r.terms) t.coef = -t.coef;
        r.bound = -r.bound;
        r.cmp = r.cmp == Cmp::Gt ? Cmp::Lt : Cmp::Le;
    }
    return r;
}

NraAtom complement_atom(const NraAtom& canonical, const VariableRegistry& reg) {
    NraAtom n = canonical;
    switch (canonical.cmp) {
        case Cmp::Lt: n.cmp = Cmp::Ge; break;
        case Cmp::Le: n.cmp = Cmp::Gt; break;
        case Cmp::Gt: n.cmp = Cmp::Le; break;
        case Cmp::Ge: n.cmp = Cmp::Lt; break;
        case Cmp::Eq: n.cmp = Cmp::Ne; break;
        case Cmp::Ne: n.cmp = Cmp::Eq; break;
    }
    return canonicalize(n, reg);
}

static bool compare(int c, Cmp cmp) {
    // c: sign of lhs - bound
    switch (cmp) {
        case Cmp::Lt: return c < 0;
        case Cmp::Le: return c <= 0;
        case Cmp::Gt: return c > 0;
        case Cmp::Ge: return c >= 0;
        case Cmp::Eq: return c == 0;
        case Cmp::Ne: return c != 0;
    }
    return false;
}

bool atom_holds(const NraAtom& a, const std::vector<Rat>& reals) {
    bool exact = true;
    for (const auto& t : a.terms)
        if (denominator(t.power) != 1) exact = false;
    if (exact) {
        Rat lhs(0);
        for (const auto& t : a.terms)
            lhs += t.coef * pow_int(reals.at(t.var), t.power.convert_to<long>());
        Rat d = lhs - a.bound;
        return compare(d.sign(), a.cmp);
    }
    std::vector<double> dv(reals.size());
    for (size_t i = 0; i < reals.size(); ++i) dv[i] = to_double(reals[i]);
    return atom_holds_d(a, dv);
}

bool atom_holds_d(const NraAtom& a, const std::vector<double>& reals) {
    double lhs = 0;
    for (const auto& t : a.terms)
        lhs += to_double(t.coef) * std::pow(reals.at(t.var), to_double(t.power));
    double d = lhs - to_double(a.bound);
    return compare(d < 0 ? -1 : (d > 0 ? 1 : 0), a.cmp);
}

std::vector<int> atom_vars(const NraAtom& a) {
    std::vector<int> v;
    for (const auto& t : a.terms)
        if (std::find(v.begin(), v.end(), t.var) == v.end()) v.push_back(t.var);
    std::sort(v.begin(), v.end());
    return v;
}

std::string atom_to_string(const NraAtom& a, const VariableRegistry& reg) {
    // print with positive leading coefficient for readability
    NraAtom p = a;
    if (!p.terms.empty() && p.terms.front().coef < 0) {
        for (auto& t : p.terms) t.coef = -t.coef;
        p.bound = -p.bound;
        p.cmp = flip(p.cmp);
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms) {
        Rat c = t.coef;
        if (!first) {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        } else if (c < 0) {
            os << "-";
            c = -c;
        }
        first = false;
        if (c != 1) os << rat_to_decimal_string(c) << "*";
        os << reg.name(t.var);
        if (t.power != 1) os << "^" << rat_to_string(t.power);
    }
    os << " " << cmp_to_string(p.cmp) << " " << rat_to_decimal_string(p.bound);
    return os.str();
}

int AtomTable::intern(const NraAtom& raw) {
    NraAtom c = canonicalize(raw, reg_);
    std::string key = atom_to_string(c, reg_);
    // atom_to_string normalizes the sign, so two atoms differing only in
    // overall sign would collide; include the raw leading sign in the key.
    key += c.terms.front().coef < 0 ? "#n" : "#p";
    auto it = by_key_.find(key);
    if (it != by_key_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    AtomD d{{}, to_double(c.bound), c.cmp};
    for (const auto& t : c.terms)
        d.terms.push_back({to_double(t.coef), t.var, to_double(t.power)});
    atoms_.push_back(c);
    atoms_d_.push_back(std::move(d));
    complements_.push_back(-1);
    varsets_.push_back(atom_vars(c));
    by_key_.emplace(std::move(key), id);
    return id;
}

bool AtomTable::holds_d(int id, const std::vector<double>& reals) const {
    const AtomD& a = atoms_d_.at(id);
    double lhs = 0;
    for (const auto& t : a.terms) {
        double x = reals[t.var];
        lhs += t.coef * (t.power == 1 ? x : std::pow(x, t.power));
    }
    double d = lhs - a.bound;
    return compare(d < 0 ? -1 : (d > 0 ? 1 : 0), a.cmp);
}

int AtomTable::complement(int id) {
    if (complements_.at(id) >= 0) return complements_[id];
    int cid = intern(complement_atom(atoms_[id], reg_));
    if (static_cast<int>(complements_.size()) <= cid) complements_.resize(cid + 1, -1);
    complements_[id] = cid;
    complements_[cid] = id;
    return cid;
}

} // namespace hwmi
