#pragma once

#include <functional>
#include <set>
#include <unordered_map>

#include "hwmi/abstraction.hpp"
#include "hwmi/ddnnf.hpp"
#include "hwmi/deadline.hpp"
#include "hwmi/expr.hpp"
#include "hwmi/weights.hpp"

namespace hwmi {

// Element of the probability-density semiring: an algebraic expression over
// Iverson brackets paired with the set of real variables whose densities are
// bound to it.  Bindings not mentioned by any bracket of the expression are
// pruned, which realizes the identifications (1, F) = (1, {}) and
// (0, F) = (0, {}).
struct SemiringElement {
    AlgebraicExpr expr;
    std::set<int> bindings;

    static SemiringElement make(const AtomTable& atoms, AlgebraicExpr e, std::set<int> b);

    bool operator==(const SemiringElement& o) const {
        return expr == o.expr && bindings == o.bindings;
    }

    std::string to_string(const AtomTable& atoms, const VariableRegistry& reg) const;
};

// Labeling + operations of the density semiring.  Boolean variables map to
// (p, {}) / (1-p, {}); abstraction variables map to the bracket of their atom
// (complement bracket for the negative literal) bound to the atom's real
// variables.
class DensitySemiring {
public:
    using Value = SemiringElement;

    DensitySemiring(AtomTable& atoms, const WeightSpec& weights, const AbstractionMap& map,
                    Deadline dl = {})
        : atoms_(atoms), weights_(weights), map_(map), dl_(dl) {}

    Value zero() const { return {AlgebraicExpr{}, {}}; }
    Value one() const { return {AlgebraicExpr::constant(1), {}}; }
    Value plus(const Value& a, const Value& b) const;
    Value times(const Value& a, const Value& b) const;
    Value label(int var, bool pos) const;
    // Interval reasoning on every intermediate keeps expressions small.
    Value simplify(Value v) const;

private:
    AtomTable& atoms_;
    const WeightSpec& weights_;
    const AbstractionMap& map_;
    Deadline dl_;
};

class CountingSemiring {
public:
    using Value = BigInt;
    Value zero() const { return 0; }
    Value one() const { return 1; }
    Value plus(const Value& a, const Value& b) const { return a + b; }
    Value times(const Value& a, const Value& b) const { return a * b; }
    Value label(int, bool) const { return 1; }
    Value simplify(Value v) const { return v; }
};

// Exact WMC over purely Boolean models; rejects abstraction variables.
class ProbabilitySemiring {
public:
    using Value = Rat;
    ProbabilitySemiring(const WeightSpec& weights, const AbstractionMap& map)
        : weights_(weights), map_(map) {}
    Value zero() const { return 0; }
    Value one() const { return 1; }
    Value plus(const Value& a, const Value& b) const { return a + b; }
    Value times(const Value& a, const Value& b) const { return a * b; }
    Value label(int var, bool pos) const {
        if (map_.has_var(var))
            throw ModelError("probability semiring cannot label constraint literals");
        Rat p = weights_.bool_weight(var);
        return pos ? p : 1 - p;
    }
    Value simplify(Value v) const { return v; }

private:
    const WeightSpec& weights_;
    const AbstractionMap& map_;
};

// Bottom-up circuit evaluation.  Decision nodes contribute
// (label(!v) * low) + (label(v) * high); smoothing is the caller's job when
// the semiring needs it (the density and probability semirings do).
template <class S>
typename S::Value amc_evaluate(DdnnfCircuit& c, S& s) {
    std::unordered_map<int, typename S::Value> memo;
    std::function<typename S::Value(int)> go = [&](int id) -> typename S::Value {
        auto it = memo.find(id);
        if (it != memo.end()) return it->second;
        const CircuitNode& n = c.node(id);
        typename S::Value r;
        switch (n.kind) {
            case CircuitNode::False_: r = s.zero(); break;
            case CircuitNode::True_: r = s.one(); break;
            case CircuitNode::Lit: r = s.label(n.var, n.pos); break;
            case CircuitNode::And: {
                r = s.one();
                for (int k : n.kids) r = s.times(r, go(k));
                break;
            }
            case CircuitNode::Decision:
                r = s.plus(s.times(s.label(n.var, false), go(n.low)),
                           s.times(s.label(n.var, true), go(n.high)));
                break;
            case CircuitNode::FreeOr: {
                r = s.zero();
                for (int k : n.kids) r = s.plus(r, go(k));
                break;
            }
        }
        r = s.simplify(std::move(r));
        memo.emplace(id, r);
        return r;
    };
    return go(c.root());
}

} // namespace hwmi
