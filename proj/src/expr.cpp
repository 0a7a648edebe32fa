#include "hwmi/expr.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace hwmi {

bool linear_univariate(const NraAtom& atom) {
    return atom.terms.size() == 1 && atom.terms.front().power == 1;
}

AlgebraicExpr AlgebraicExpr::constant(Rat c) {
    AlgebraicExpr e;
    if (c != 0) e.terms_.emplace(Monomial{}, std::move(c));
    return e;
}

AlgebraicExpr AlgebraicExpr::bracket(AtomTable& atoms, int atom_id, bool negated) {
    AlgebraicExpr e;
    IversonBracket b = IversonBracket::make(atoms, atom_id, negated);
    e.terms_.emplace(Monomial{{b.atom}, {}}, Rat(1));
    return e;
}

AlgebraicExpr AlgebraicExpr::symbol(const std::string& name) {
    AlgebraicExpr e;
    e.terms_.emplace(Monomial{{}, {name}}, Rat(1));
    return e;
}

bool AlgebraicExpr::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Monomial{};
}

Rat AlgebraicExpr::constant_value() const {
    if (terms_.empty()) return Rat(0);
    return terms_.begin()->second;
}

void AlgebraicExpr::add_term(Monomial m, Rat c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::vector<int> AlgebraicExpr::real_vars(const AtomTable& atoms) const {
    std::vector<int> out;
    for (const auto& [m, c] : terms_)
        for (int a : m.brackets)
            for (int v : atoms.vars(a))
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

Rat AlgebraicExpr::eval(const AtomTable& atoms, const std::vector<Rat>& reals,
                        const std::map<std::string, Rat>& symenv) const {
    Rat acc(0);
    for (const auto& [m, c] : terms_) {
        Rat v = c;
        for (int a : m.brackets)
            if (!atom_holds(atoms.at(a), reals)) {
                v = 0;
                break;
            }
        if (v == 0) continue;
        for (const auto& s : m.symbols) {
            auto it = symenv.find(s);
            if (it == symenv.end()) throw ModelError("unbound symbol: " + s);
            v *= it->second;
        }
        acc += v;
    }
    return acc;
}

AlgebraicExpr expr_add(const AlgebraicExpr& a, const AlgebraicExpr& b) {
    AlgebraicExpr r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

// nullopt when the merged monomial contains [l]*[not l]
static std::optional<Monomial> merge_monomials(AtomTable& atoms, const Monomial& a,
                                               const Monomial& b) {
    Monomial m;
    m.brackets = a.brackets;
    m.brackets.insert(m.brackets.end(), b.brackets.begin(), b.brackets.end());
    std::sort(m.brackets.begin(), m.brackets.end());
    m.brackets.erase(std::unique(m.brackets.begin(), m.brackets.end()), m.brackets.end());
    for (int x : m.brackets)
        if (std::binary_search(m.brackets.begin(), m.brackets.end(), atoms.complement(x)))
            return std::nullopt;
    m.symbols = a.symbols;
    m.symbols.insert(m.symbols.end(), b.symbols.begin(), b.symbols.end());
    std::sort(m.symbols.begin(), m.symbols.end());
    return m;
}

AlgebraicExpr expr_mul(AtomTable& atoms, const AlgebraicExpr& a, const AlgebraicExpr& b) {
    AlgebraicExpr r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            auto m = merge_monomials(atoms, ma, mb);
            if (m) r.add_term(std::move(*m), ca * cb);
        }
    return r;
}

namespace {

struct Bound {
    Rat value;
    bool strict = false;
};

// true if l is a tighter (or equally tight) lower bound than r
bool tighter_lower(const Bound& l, const Bound& r) {
    return l.value > r.value || (l.value == r.value && l.strict);
}
bool tighter_upper(const Bound& l, const Bound& r) {
    return l.value < r.value || (l.value == r.value && l.strict);
}

} // namespace

AlgebraicExpr simplify_intervals(AtomTable& atoms, const AlgebraicExpr& e) {
    AlgebraicExpr out;
    for (const auto& [m, c] : e.terms()) {
        std::map<int, std::optional<Bound>> lowers, uppers;   // per variable
        std::vector<int> passthrough;
        bool dead = false;

        for (int a : m.brackets) {
            const NraAtom& atom = atoms.at(a);
            if (!linear_univariate(atom) || atom.cmp == Cmp::Eq || atom.cmp == Cmp::Ne) {
                passthrough.push_back(a);
                continue;
            }
            int v = atom.terms.front().var;
            bool strict = atom.cmp == Cmp::Lt;
            if (atom.terms.front().coef > 0) {
                Bound b{atom.bound, strict};
                auto& u = uppers[v];
                if (!u || tighter_upper(b, *u)) u = b;
                lowers.try_emplace(v);
            } else {
                Bound b{-atom.bound, strict};   // -x < -c  <=>  x > c
                auto& l = lowers[v];
                if (!l || tighter_lower(b, *l)) l = b;
                uppers.try_emplace(v);
            }
        }

        Monomial nm;
        nm.symbols = m.symbols;
        nm.brackets = passthrough;
        for (auto& [v, lo] : lowers) {
            auto& up = uppers[v];
            if (lo && up) {
                if (lo->value > up->value ||
                    (lo->value == up->value && (lo->strict || up->strict))) {
                    dead = true;
                    break;
                }
                if (lo->value == up->value) {
                    // degenerate point interval: keep as an equality bracket
                    nm.brackets.push_back(
                        atoms.intern({{{Rat(1), v, Rat(1)}}, Cmp::Eq, lo->value}));
                    continue;
                }
            }
            if (lo)
                nm.brackets.push_back(atoms.intern(
                    {{{Rat(-1), v, Rat(1)}}, lo->strict ? Cmp::Lt : Cmp::Le, -lo->value}));
            if (up)
                nm.brackets.push_back(atoms.intern(
                    {{{Rat(1), v, Rat(1)}}, up->strict ? Cmp::Lt : Cmp::Le, up->value}));
        }
        if (dead) continue;
        std::sort(nm.brackets.begin(), nm.brackets.end());
        nm.brackets.erase(std::unique(nm.brackets.begin(), nm.brackets.end()), nm.brackets.end());
        out.add_term(std::move(nm), c);
    }
    return out;
}

static std::string compact(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    return s;
}

std::string AlgebraicExpr::to_string(const AtomTable& atoms) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat coef = c;
        if (!first) {
            os << (coef < 0 ? " - " : " + ");
            if (coef < 0) coef = -coef;
        }
        first = false;
        bool printed = false;
        if (coef != 1 || (m.brackets.empty() && m.symbols.empty())) {
            os << rat_to_decimal_string(coef);
            printed = true;
        }
        for (const auto& s : m.symbols) {
            if (printed) os << "*";
            os << s;
            printed = true;
        }
        for (int a : m.brackets) {
            if (printed) os << "*";
            os << "[" << compact(atoms.str(a)) << "]";
            printed = true;
        }
    }
    return os.str();
}

std::string AlgebraicExpr::to_json(const AtomTable& atoms) const {
    std::ostringstream os;
    os << "{\"monomials\":[";
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << ",";
        first = false;
        os << "{\"coef\":\"" << rat_to_string(c) << "\",\"brackets\":[";
        for (size_t i = 0; i < m.brackets.size(); ++i)
            os << (i ? "," : "") << "\"" << compact(atoms.str(m.brackets[i])) << "\"";
        os << "],\"symbols\":[";
        for (size_t i = 0; i < m.symbols.size(); ++i)
            os << (i ? "," : "") << "\"" << m.symbols[i] << "\"";
        os << "]}";
    }
    os << "]}";
    return os.str();
}


AlgebraicExpr merge_complements(AtomTable& atoms, const AlgebraicExpr& e) {
    AlgebraicExpr cur = e;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = cur.terms_.begin(); it != cur.terms_.end() && !changed; ++it) {
            const Monomial& m = it->first;
            for (size_t bi = 0; bi < m.brackets.size() && !changed; ++bi) {
                Monomial partner = m;
                partner.brackets[bi] = atoms.complement(m.brackets[bi]);
                std::sort(partner.brackets.begin(), partner.brackets.end());
                auto pit = cur.terms_.find(partner);
                if (pit == cur.terms_.end() || pit->second != it->second) continue;
                Monomial self = m;
                Monomial merged = m;
                merged.brackets.erase(merged.brackets.begin() + bi);
                Rat c = it->second;
                cur.terms_.erase(partner);
                cur.terms_.erase(self);
                Rat& slot = cur.terms_[merged];
                slot += c;
                if (slot == 0) cur.terms_.erase(merged);
                changed = true;
            }
        }
    }
    return cur;
}

} // namespace hwmi
