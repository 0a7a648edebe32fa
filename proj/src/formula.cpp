#include "hwmi/formula.hpp"

#include <algorithm>
#include <sstream>

namespace hwmi {

FormulaFactory::FormulaFactory(const VariableRegistry& reg, AtomTable& atoms)
    : reg_(reg), atoms_(atoms) {
    nodes_.push_back({FKind::False_, -1, -1, {}});
    nodes_.push_back({FKind::True_, -1, -1, {}});
    vars_cache_.resize(2);
}

std::string FormulaFactory::key(const FNode& n) const {
    std::ostringstream os;
    os << static_cast<int>(n.kind) << ":" << n.var << ":" << n.atom;
    for (int k : n.kids) os << "," << k;
    return os.str();
}

int FormulaFactory::make(FNode n) {
    std::string k = key(n);
    auto it = unique_.find(k);
    if (it != unique_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    vars_cache_.emplace_back();
    unique_.emplace(std::move(k), id);
    return id;
}

int FormulaFactory::bool_atom(int var) {
    if (reg_.kind(var) != VarKind::Boolean)
        throw ModelError("real variable used as a Boolean atom: " + reg_.name(var));
    return make({FKind::BoolAtom, var, -1, {}});
}

int FormulaFactory::constraint(const NraAtom& raw) {
    return constraint_id(atoms_.intern(raw));
}

int FormulaFactory::constraint_id(int atom_id) {
    return make({FKind::Constraint, -1, atom_id, {}});
}

int FormulaFactory::negate(int f) {
    const FNode& n = nodes_.at(f);
    switch (n.kind) {
        case FKind::False_: return ftrue();
        case FKind::True_: return ffalse();
        case FKind::Not: return n.kids[0];
        case FKind::Constraint: return constraint_id(atoms_.complement(n.atom));
        default: return make({FKind::Not, -1, -1, {f}});
    }
}

int FormulaFactory::conj(std::vector<int> kids) {
    std::vector<int> flat;
    for (int k : kids) {
        if (k == ffalse()) return ffalse();
        if (k == ftrue()) continue;
        if (nodes_[k].kind == FKind::And)
            flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (int k : flat) {
        int nk = negate(k);
        if (std::binary_search(flat.begin(), flat.end(), nk)) return ffalse();
    }
    if (flat.empty()) return ftrue();
    if (flat.size() == 1) return flat[0];
    return make({FKind::And, -1, -1, std::move(flat)});
}

int FormulaFactory::disj(std::vector<int> kids) {
    std::vector<int> flat;
    for (int k : kids) {
        if (k == ftrue()) return ftrue();
        if (k == ffalse()) continue;
        if (nodes_[k].kind == FKind::Or)
            flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    for (int k : flat) {
        int nk = negate(k);
        if (std::binary_search(flat.begin(), flat.end(), nk)) return ftrue();
    }
    if (flat.empty()) return ffalse();
    if (flat.size() == 1) return flat[0];
    return make({FKind::Or, -1, -1, std::move(flat)});
}

int FormulaFactory::implies(int a, int b) {
    if (a == ftrue()) return b;
    if (a == ffalse()) return ftrue();
    if (b == ftrue()) return ftrue();
    if (b == ffalse()) return negate(a);
    if (a == b) return ftrue();
    return make({FKind::Implies, -1, -1, {a, b}});
}

int FormulaFactory::iff(int a, int b) {
    if (a == ftrue()) return b;
    if (b == ftrue()) return a;
    if (a == ffalse()) return negate(b);
    if (b == ffalse()) return negate(a);
    if (a == b) return ftrue();
    if (a > b) std::swap(a, b);
    return make({FKind::Iff, -1, -1, {a, b}});
}

bool FormulaFactory::eval(int f, const Assignment& a) const {
    const FNode& n = nodes_.at(f);
    switch (n.kind) {
        case FKind::False_: return false;
        case FKind::True_: return true;
        case FKind::BoolAtom:
            if (n.var >= static_cast<int>(a.bools.size()))
                throw ModelError("assignment missing variable " + reg_.name(n.var));
            return a.bools[n.var] != 0;
        case FKind::Constraint: return atom_holds(atoms_.at(n.atom), a.reals);
        case FKind::Not: return !eval(n.kids[0], a);
        case FKind::And:
            for (int k : n.kids)
                if (!eval(k, a)) return false;
            return true;
        case FKind::Or:
            for (int k : n.kids)
                if (eval(k, a)) return true;
            return false;
        case FKind::Implies: return !eval(n.kids[0], a) || eval(n.kids[1], a);
        case FKind::Iff: return eval(n.kids[0], a) == eval(n.kids[1], a);
    }
    return false;
}

bool FormulaFactory::eval_d(int f, const AssignmentD& a) const {
    const FNode& n = nodes_.at(f);
    switch (n.kind) {
        case FKind::False_: return false;
        case FKind::True_: return true;
        case FKind::BoolAtom: return a.bools[n.var] != 0;
        case FKind::Constraint: return atoms_.holds_d(n.atom, a.reals);
        case FKind::Not: return !eval_d(n.kids[0], a);
        case FKind::And:
            for (int k : n.kids)
                if (!eval_d(k, a)) return false;
            return true;
        case FKind::Or:
            for (int k : n.kids)
                if (eval_d(k, a)) return true;
            return false;
        case FKind::Implies: return !eval_d(n.kids[0], a) || eval_d(n.kids[1], a);
        case FKind::Iff: return eval_d(n.kids[0], a) == eval_d(n.kids[1], a);
    }
    return false;
}

bool FormulaFactory::eval_prop(int f, const std::vector<char>& bools) const {
    const FNode& n = nodes_.at(f);
    switch (n.kind) {
        case FKind::False_: return false;
        case FKind::True_: return true;
        case FKind::BoolAtom: return bools[n.var] != 0;
        case FKind::Constraint:
            throw ModelError("eval_prop on a formula with constraint leaves");
        case FKind::Not: return !eval_prop(n.kids[0], bools);
        case FKind::And:
            for (int k : n.kids)
                if (!eval_prop(k, bools)) return false;
            return true;
        case FKind::Or:
            for (int k : n.kids)
                if (eval_prop(k, bools)) return true;
            return false;
        case FKind::Implies: return !eval_prop(n.kids[0], bools) || eval_prop(n.kids[1], bools);
        case FKind::Iff: return eval_prop(n.kids[0], bools) == eval_prop(n.kids[1], bools);
    }
    return false;
}

const std::vector<int>& FormulaFactory::vars(int f) {
    if (vars_cache_.size() < nodes_.size()) vars_cache_.resize(nodes_.size());
    std::vector<int>& cached = vars_cache_[f];
    if (!cached.empty() || f <= 1) return cached;
    const FNode& n = nodes_[f];
    std::set<int> s;
    if (n.kind == FKind::BoolAtom) {
        s.insert(n.var);
    } else if (n.kind == FKind::Constraint) {
        for (int v : atoms_.vars(n.atom)) s.insert(v);
    } else {
        for (int k : n.kids)
            for (int v : vars(k)) s.insert(v);
    }
    cached.assign(s.begin(), s.end());
    return vars_cache_[f];
}

std::vector<int> FormulaFactory::bool_vars(int f) {
    std::vector<int> out;
    for (int v : vars(f))
        if (reg_.kind(v) == VarKind::Boolean) out.push_back(v);
    return out;
}

int FormulaFactory::cofactor(int f, int var, bool value) {
    if (f <= 1) return f;
    long long ck = (static_cast<long long>(f) << 21) | (static_cast<long long>(var) << 1) |
                   (value ? 1 : 0);
    auto it = cofactor_cache_.find(ck);
    if (it != cofactor_cache_.end()) return it->second;
    const FNode n = nodes_[f];
    int r = f;
    switch (n.kind) {
        case FKind::BoolAtom:
            if (n.var == var) r = value ? ftrue() : ffalse();
            break;
        case FKind::Constraint:
            break;
        case FKind::Not:
            r = negate(cofactor(n.kids[0], var, value));
            break;
        case FKind::And:
        case FKind::Or: {
            std::vector<int> kids;
            kids.reserve(n.kids.size());
            for (int k : n.kids) kids.push_back(cofactor(k, var, value));
            r = n.kind == FKind::And ? conj(std::move(kids)) : disj(std::move(kids));
            break;
        }
        case FKind::Implies:
            r = implies(cofactor(n.kids[0], var, value), cofactor(n.kids[1], var, value));
            break;
        case FKind::Iff:
            r = iff(cofactor(n.kids[0], var, value), cofactor(n.kids[1], var, value));
            break;
        default:
            break;
    }
    cofactor_cache_.emplace(ck, r);
    return r;
}

bool FormulaFactory::is_literal(int f) const {
    const FNode& n = nodes_.at(f);
    if (n.kind == FKind::BoolAtom) return true;
    return n.kind == FKind::Not && nodes_[n.kids[0]].kind == FKind::BoolAtom;
}

std::pair<int, bool> FormulaFactory::literal(int f) const {
    const FNode& n = nodes_.at(f);
    if (n.kind == FKind::BoolAtom) return {n.var, true};
    return {nodes_[n.kids[0]].var, false};
}

std::string FormulaFactory::to_string(int f) const {
    const FNode& n = nodes_.at(f);
    auto join = [&](const char* op) {
        std::string s = "(";
        for (size_t i = 0; i < n.kids.size(); ++i) {
            if (i) s += op;
            s += to_string(n.kids[i]);
        }
        return s + ")";
    };
    switch (n.kind) {
        case FKind::False_: return "false";
        case FKind::True_: return "true";
        case FKind::BoolAtom: return reg_.name(n.var);
        case FKind::Constraint: return "(" + atoms_.str(n.atom) + ")";
        case FKind::Not: return "!" + to_string(n.kids[0]);
        case FKind::And: return join(" & ");
        case FKind::Or: return join(" | ");
        case FKind::Implies: return join(" -> ");
        case FKind::Iff: return join(" <-> ");
    }
    return "?";
}

} // namespace hwmi
