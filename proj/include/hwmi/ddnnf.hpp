#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hwmi/formula.hpp"

namespace hwmi {

struct CompileError : ModelError {
    using ModelError::ModelError;
};
struct TimeoutError : ModelError {
    using ModelError::ModelError;
};

// Rooted DAG of decomposable AND / deterministic OR / literal / constant
// nodes.  Decision nodes are binary ORs (not v & low) | (v & high), so
// determinism holds by construction.  FreeOr is an unrestricted OR used by
// smoothing gadgets and hand-built circuits; the compiler never emits it.
struct CircuitNode {
    enum Kind { False_, True_, Lit, And, Decision, FreeOr };
    Kind kind;
    int var = -1;       // Lit / Decision decision variable
    bool pos = true;    // Lit polarity
    int low = -1, high = -1;
    std::vector<int> kids;   // And / FreeOr
};

class DdnnfCircuit {
public:
    DdnnfCircuit();

    int cfalse() const { return 0; }
    int ctrue() const { return 1; }
    int lit(int var, bool pos);
    int conj(std::vector<int> kids);
    int decision(int var, int low, int high);
    int free_or(std::vector<int> kids);

    int root() const { return root_; }
    void set_root(int r) { root_ = r; }
    const CircuitNode& node(int id) const { return nodes_.at(id); }
    size_t size() const { return nodes_.size(); }

    // Sorted variable set of the sub-circuit (decision variables included).
    const std::vector<int>& scope(int id);

private:
    int make(CircuitNode n);

    std::vector<CircuitNode> nodes_;
    std::unordered_map<std::string, int> unique_;
    std::vector<std::vector<int>> scope_cache_;
    std::vector<char> scope_done_;
    int root_ = -1;
};

struct CompileOptions {
    int var_cap = 64;
    long timeout_ms = 60000;
    std::optional<std::vector<int>> order;   // decision order override
    bool use_cache = true;
};

struct CompileStats {
    size_t cache_hits = 0;
    size_t decisions = 0;
};

// Exhaustive Shannon-expansion compilation of a propositional formula with
// unit propagation, disjoint-component splitting and formula caching.
DdnnfCircuit compile(FormulaFactory& fac, int f, const CompileOptions& opts = {},
                     CompileStats* stats = nullptr);

// Frequency-descending decision order (ties broken lexicographically).
std::vector<int> default_order(FormulaFactory& fac, int f);

struct VerifyReport {
    bool decomposable = true;
    bool deterministic = true;
    bool determinism_exhaustive = false;   // else: by-construction certificate
    std::vector<std::string> violations;
    bool ok() const { return decomposable && deterministic; }
};

VerifyReport verify_ddnnf(DdnnfCircuit& c, const VariableRegistry& reg);

// Pads OR branches with (v | !v) gadgets until every OR node's children
// mention the same variables and the root mentions all of `scope`.
DdnnfCircuit smooth(DdnnfCircuit& c, const std::vector<int>& scope);

bool is_smooth(DdnnfCircuit& c, const std::vector<int>& scope);

// Exact model count over n_vars variables; requires a smoothed circuit.
BigInt model_count(DdnnfCircuit& c, const std::vector<int>& scope);

// Line-oriented text format; see docs/formats.md.
void write_circuit(std::ostream& os, DdnnfCircuit& c, int n_vars);
DdnnfCircuit read_circuit(std::istream& is, const VariableRegistry& reg);

} // namespace hwmi
