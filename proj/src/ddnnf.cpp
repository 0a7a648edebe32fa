#include "hwmi/ddnnf.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace hwmi {

DdnnfCircuit::DdnnfCircuit() {
    nodes_.push_back({CircuitNode::False_});
    nodes_.push_back({CircuitNode::True_});
    scope_cache_.resize(2);
    scope_done_.assign(2, 1);
}

int DdnnfCircuit::make(CircuitNode n) {
    std::ostringstream os;
    os << n.kind << ":" << n.var << ":" << n.pos << ":" << n.low << ":" << n.high;
    for (int k : n.kids) os << "," << k;
    std::string key = os.str();
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    scope_cache_.emplace_back();
    scope_done_.push_back(0);
    unique_.emplace(std::move(key), id);
    return id;
}

int DdnnfCircuit::lit(int var, bool pos) {
    CircuitNode n{CircuitNode::Lit};
    n.var = var;
    n.pos = pos;
    return make(std::move(n));
}

int DdnnfCircuit::conj(std::vector<int> kids) {
    std::vector<int> flat;
    for (int k : kids) {
        if (k == cfalse()) return cfalse();
        if (k == ctrue()) continue;
        if (nodes_[k].kind == CircuitNode::And)
            flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return ctrue();
    if (flat.size() == 1) return flat[0];
    CircuitNode n{CircuitNode::And};
    n.kids = std::move(flat);
    return make(std::move(n));
}

int DdnnfCircuit::decision(int var, int low, int high) {
    if (low == high) return low;
    if (low == cfalse()) return conj({lit(var, true), high});
    if (high == cfalse()) return conj({lit(var, false), low});
    CircuitNode n{CircuitNode::Decision};
    n.var = var;
    n.low = low;
    n.high = high;
    return make(std::move(n));
}

int DdnnfCircuit::free_or(std::vector<int> kids) {
    CircuitNode n{CircuitNode::FreeOr};
    n.kids = std::move(kids);
    return make(std::move(n));
}

const std::vector<int>& DdnnfCircuit::scope(int id) {
    if (scope_cache_.size() < nodes_.size()) {
        scope_cache_.resize(nodes_.size());
        scope_done_.resize(nodes_.size(), 0);
    }
    if (scope_done_[id]) return scope_cache_[id];
    const CircuitNode& n = nodes_[id];
    std::set<int> s;
    switch (n.kind) {
        case CircuitNode::Lit: s.insert(n.var); break;
        case CircuitNode::Decision:
            s.insert(n.var);
            for (int v : scope(n.low)) s.insert(v);
            for (int v : scope(n.high)) s.insert(v);
            break;
        case CircuitNode::And:
        case CircuitNode::FreeOr:
            for (int k : n.kids)
                for (int v : scope(k)) s.insert(v);
            break;
        default: break;
    }
    scope_cache_[id].assign(s.begin(), s.end());
    scope_done_[id] = 1;
    return scope_cache_[id];
}

std::vector<int> default_order(FormulaFactory& fac, int f) {
    std::map<int, int> freq;
    // count leaf occurrences
    std::vector<int> stack{f};
    while (!stack.empty()) {
        int g = stack.back();
        stack.pop_back();
        const FNode& n = fac.node(g);
        if (n.kind == FKind::BoolAtom)
            ++freq[n.var];
        else
            for (int k : n.kids) stack.push_back(k);
    }
    std::vector<int> order;
    for (auto& [v, c] : freq) order.push_back(v);
    const VariableRegistry& reg = fac.registry();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (freq[a] != freq[b]) return freq[a] > freq[b];
        return reg.name(a) < reg.name(b);
    });
    return order;
}

namespace {

class Compiler {
public:
    Compiler(FormulaFactory& fac, const CompileOptions& opts, CompileStats* stats)
        : fac_(fac), opts_(opts), stats_(stats),
          deadline_(std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(opts.timeout_ms)) {}

    DdnnfCircuit run(int f) {
        if (static_cast<int>(fac_.vars(f).size()) > opts_.var_cap)
            throw CompileError("variable cap exceeded (" +
                               std::to_string(fac_.vars(f).size()) + " > " +
                               std::to_string(opts_.var_cap) + ")");
        order_ = opts_.order ? *opts_.order : default_order(fac_, f);
        circuit_.set_root(go(f));
        return std::move(circuit_);
    }

private:
    int go(int f) {
        if (++ticks_ % 256 == 0 && std::chrono::steady_clock::now() > deadline_)
            throw TimeoutError("compilation timed out");
        if (f == fac_.ffalse()) return circuit_.cfalse();
        if (f == fac_.ftrue()) return circuit_.ctrue();
        if (fac_.is_literal(f)) {
            auto [v, pos] = fac_.literal(f);
            return circuit_.lit(v, pos);
        }
        if (opts_.use_cache) {
            auto it = cache_.find(f);
            if (it != cache_.end()) {
                if (stats_) ++stats_->cache_hits;
                return it->second;
            }
        }
        int result = expand(f);
        if (opts_.use_cache) cache_.emplace(f, result);
        return result;
    }

    int expand(int f) {
        const FNode& n = fac_.node(f);
        if (n.kind == FKind::And) {
            // unit propagation: condition the residual on literal children
            std::vector<int> lit_nodes, rest;
            std::vector<std::pair<int, bool>> units;
            for (int k : n.kids) {
                if (fac_.is_literal(k)) {
                    auto [v, pos] = fac_.literal(k);
                    units.emplace_back(v, pos);
                    lit_nodes.push_back(circuit_.lit(v, pos));
                } else {
                    rest.push_back(k);
                }
            }
            if (!units.empty()) {
                int residual = fac_.conj(rest);
                for (auto [v, pos] : units) residual = fac_.cofactor(residual, v, pos);
                lit_nodes.push_back(go(residual));
                return circuit_.conj(std::move(lit_nodes));
            }
            // split into variable-disjoint components
            auto groups = components(n.kids);
            if (groups.size() > 1) {
                std::vector<int> parts;
                for (auto& g : groups) parts.push_back(go(fac_.conj(std::move(g))));
                return circuit_.conj(std::move(parts));
            }
        }
        // Shannon expansion on the first order variable present in f
        const std::vector<int>& fv = fac_.vars(f);
        int v = -1;
        for (int cand : order_)
            if (std::binary_search(fv.begin(), fv.end(), cand)) {
                v = cand;
                break;
            }
        if (v < 0) {
            // formula mentions variables outside the precomputed order
            v = fv.front();
        }
        if (stats_) ++stats_->decisions;
        int l = go(fac_.cofactor(f, v, false));
        int h = go(fac_.cofactor(f, v, true));
        return circuit_.decision(v, l, h);
    }

    std::vector<std::vector<int>> components(const std::vector<int>& kids) {
        size_t n = kids.size();
        std::vector<int> parent(n);
        for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) {
                const auto& a = fac_.vars(kids[i]);
                const auto& b = fac_.vars(kids[j]);
                bool overlap = false;
                for (int x : a)
                    if (std::binary_search(b.begin(), b.end(), x)) {
                        overlap = true;
                        break;
                    }
                if (overlap) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
            }
        std::map<int, std::vector<int>> by_root;
        for (size_t i = 0; i < n; ++i) by_root[find(static_cast<int>(i))].push_back(kids[i]);
        std::vector<std::vector<int>> out;
        for (auto& [r, g] : by_root) out.push_back(std::move(g));
        return out;
    }

    FormulaFactory& fac_;
    const CompileOptions& opts_;
    CompileStats* stats_;
    std::chrono::steady_clock::time_point deadline_;
    std::vector<int> order_;
    DdnnfCircuit circuit_;
    std::unordered_map<int, int> cache_;
    size_t ticks_ = 0;
};

} // namespace

DdnnfCircuit compile(FormulaFactory& fac, int f, const CompileOptions& opts,
                     CompileStats* stats) {
    return Compiler(fac, opts, stats).run(f);
}

namespace {

bool node_truth(DdnnfCircuit& c, int id, const std::map<int, bool>& assign) {
    const CircuitNode& n = c.node(id);
    switch (n.kind) {
        case CircuitNode::False_: return false;
        case CircuitNode::True_: return true;
        case CircuitNode::Lit: return assign.at(n.var) == n.pos;
        case CircuitNode::And:
            for (int k : n.kids)
                if (!node_truth(c, k, assign)) return false;
            return true;
        case CircuitNode::Decision:
            return assign.at(n.var) ? node_truth(c, n.high, assign)
                                    : node_truth(c, n.low, assign);
        case CircuitNode::FreeOr:
            for (int k : n.kids)
                if (node_truth(c, k, assign)) return true;
            return false;
    }
    return false;
}

void reachable(DdnnfCircuit& c, int id, std::set<int>& seen) {
    if (!seen.insert(id).second) return;
    const CircuitNode& n = c.node(id);
    if (n.kind == CircuitNode::Decision) {
        reachable(c, n.low, seen);
        reachable(c, n.high, seen);
    }
    for (int k : n.kids) reachable(c, k, seen);
}

} // namespace

VerifyReport verify_ddnnf(DdnnfCircuit& c, const VariableRegistry& reg) {
    VerifyReport rep;
    std::set<int> nodes;
    reachable(c, c.root(), nodes);

    for (int id : nodes) {
        const CircuitNode& n = c.node(id);
        if (n.kind == CircuitNode::And) {
            for (size_t i = 0; i < n.kids.size(); ++i)
                for (size_t j = i + 1; j < n.kids.size(); ++j) {
                    const auto& a = c.scope(n.kids[i]);
                    const auto& b = c.scope(n.kids[j]);
                    for (int v : a)
                        if (std::binary_search(b.begin(), b.end(), v)) {
                            rep.decomposable = false;
                            rep.violations.push_back("AND node " + std::to_string(id) +
                                                     " children share variable " + reg.name(v));
                        }
                }
        }
    }

    const std::vector<int>& sc = c.scope(c.root());
    bool has_free_or = false;
    for (int id : nodes)
        if (c.node(id).kind == CircuitNode::FreeOr) has_free_or = true;

    if (sc.size() <= 20 && has_free_or) {
        rep.determinism_exhaustive = true;
        std::map<int, bool> assign;
        size_t n = sc.size();
        for (size_t m = 0; m < (size_t{1} << n); ++m) {
            for (size_t i = 0; i < n; ++i) assign[sc[i]] = (m >> i) & 1;
            for (int id : nodes) {
                const CircuitNode& node = c.node(id);
                if (node.kind != CircuitNode::FreeOr) continue;
                int sat = 0;
                for (int k : node.kids)
                    if (node_truth(c, k, assign)) ++sat;
                if (sat > 1) {
                    rep.deterministic = false;
                    rep.violations.push_back("OR node " + std::to_string(id) +
                                             " has overlapping children");
                    break;
                }
            }
            if (!rep.deterministic) break;
        }
    } else if (has_free_or) {
        rep.violations.push_back("free OR nodes present; determinism not certified");
    } else {
        // decision nodes are deterministic by construction
        rep.determinism_exhaustive = false;
    }
    return rep;
}

namespace {

struct Smoother {
    DdnnfCircuit& src;
    DdnnfCircuit out;
    std::unordered_map<int, int> memo;

    // (v | !v): deterministic, scope {v}; decision() would fold it to TRUE
    int gadget(int var) { return out.free_or({out.lit(var, false), out.lit(var, true)}); }

    // `have` by value: gadget() grows out's node tables, which can reallocate
    // the scope cache a caller-side reference would point into
    int pad(int id, std::vector<int> have, const std::vector<int>& want) {
        std::vector<int> kids{id};
        for (int v : want)
            if (!std::binary_search(have.begin(), have.end(), v)) kids.push_back(gadget(v));
        return out.conj(std::move(kids));
    }

    int go(int id) {
        auto it = memo.find(id);
        if (it != memo.end()) return it->second;
        const CircuitNode& n = src.node(id);
        int r;
        switch (n.kind) {
            case CircuitNode::False_: r = out.cfalse(); break;
            case CircuitNode::True_: r = out.ctrue(); break;
            case CircuitNode::Lit: r = out.lit(n.var, n.pos); break;
            case CircuitNode::And: {
                std::vector<int> kids;
                for (int k : n.kids) kids.push_back(go(k));
                r = out.conj(std::move(kids));
                break;
            }
            case CircuitNode::Decision: {
                std::vector<int> target;   // union of branch scopes minus v
                std::set<int> u(src.scope(n.low).begin(), src.scope(n.low).end());
                for (int v : src.scope(n.high)) u.insert(v);
                u.erase(n.var);
                target.assign(u.begin(), u.end());
                int l = pad(go(n.low), src.scope(n.low), target);
                int h = pad(go(n.high), src.scope(n.high), target);
                r = out.decision(n.var, l, h);
                if (out.node(r).kind != CircuitNode::Decision && l == h) {
                    // (not v & x) | (v & x): keep the decision explicit via a gadget
                    r = out.conj({gadget(n.var), l});
                }
                break;
            }
            case CircuitNode::FreeOr: {
                std::set<int> u;
                for (int k : n.kids)
                    for (int v : src.scope(k)) u.insert(v);
                std::vector<int> target(u.begin(), u.end());
                std::vector<int> kids;
                for (int k : n.kids) kids.push_back(pad(go(k), src.scope(k), target));
                r = out.free_or(std::move(kids));
                break;
            }
            default: r = out.cfalse(); break;
        }
        memo.emplace(id, r);
        return r;
    }
};

} // namespace

DdnnfCircuit smooth(DdnnfCircuit& c, const std::vector<int>& scope) {
    Smoother s{c, DdnnfCircuit{}, {}};
    int r = s.go(c.root());
    if (r != s.out.cfalse()) {
        std::vector<int> want(scope.begin(), scope.end());
        std::sort(want.begin(), want.end());
        r = s.pad(r, s.out.scope(r), want);
    }
    s.out.set_root(r);
    return std::move(s.out);
}

bool is_smooth(DdnnfCircuit& c, const std::vector<int>& scope) {
    std::set<int> nodes;
    reachable(c, c.root(), nodes);
    for (int id : nodes) {
        const CircuitNode& n = c.node(id);
        if (n.kind == CircuitNode::Decision) {
            std::set<int> l(c.scope(n.low).begin(), c.scope(n.low).end());
            std::set<int> h(c.scope(n.high).begin(), c.scope(n.high).end());
            l.insert(n.var);
            h.insert(n.var);
            if (l != h) return false;
        } else if (n.kind == CircuitNode::FreeOr) {
            for (size_t i = 1; i < n.kids.size(); ++i)
                if (c.scope(n.kids[i]) != c.scope(n.kids[0])) return false;
        }
    }
    if (c.root() == c.cfalse()) return true;
    std::vector<int> want(scope.begin(), scope.end());
    std::sort(want.begin(), want.end());
    return c.scope(c.root()) == want;
}

BigInt model_count(DdnnfCircuit& c, const std::vector<int>& scope) {
    if (!is_smooth(c, scope)) throw ModelError("model_count requires a smoothed circuit");
    std::unordered_map<int, BigInt> memo;
    std::function<BigInt(int)> go = [&](int id) -> BigInt {
        auto it = memo.find(id);
        if (it != memo.end()) return it->second;
        const CircuitNode& n = c.node(id);
        BigInt r;
        switch (n.kind) {
            case CircuitNode::False_: r = 0; break;
            case CircuitNode::True_: r = 1; break;
            case CircuitNode::Lit: r = 1; break;
            case CircuitNode::And: {
                r = 1;
                for (int k : n.kids) r *= go(k);
                break;
            }
            case CircuitNode::Decision: r = go(n.low) + go(n.high); break;
            case CircuitNode::FreeOr: {
                r = 0;
                for (int k : n.kids) r += go(k);
                break;
            }
        }
        memo.emplace(id, r);
        return r;
    };
    return go(c.root());
}

void write_circuit(std::ostream& os, DdnnfCircuit& c, int n_vars) {
    std::set<int> nodes;
    reachable(c, c.root(), nodes);
    // post-order so the root comes last and children precede parents
    std::vector<int> order;
    std::set<int> seen;
    std::function<void(int)> post = [&](int id) {
        if (!seen.insert(id).second) return;
        const CircuitNode& n = c.node(id);
        if (n.kind == CircuitNode::Decision) {
            post(n.low);
            post(n.high);
        }
        for (int k : n.kids) post(k);
        order.push_back(id);
    };
    post(c.root());
    std::map<int, int> index;
    for (size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);
    os << "ddnnf " << order.size() << " " << n_vars << "\n";
    for (int id : order) {
        const CircuitNode& n = c.node(id);
        switch (n.kind) {
            case CircuitNode::False_: os << "F\n"; break;
            case CircuitNode::True_: os << "T\n"; break;
            case CircuitNode::Lit:
                os << "L " << (n.pos ? n.var + 1 : -(n.var + 1)) << "\n";
                break;
            case CircuitNode::And:
                os << "A " << n.kids.size();
                for (int k : n.kids) os << " " << index[k];
                os << "\n";
                break;
            case CircuitNode::Decision:
                os << "O " << n.var + 1 << " " << index[n.low] << " " << index[n.high] << "\n";
                break;
            case CircuitNode::FreeOr:
                throw ModelError("cannot serialize a free OR node");
        }
    }
}

DdnnfCircuit read_circuit(std::istream& is, const VariableRegistry& reg) {
    std::string tag;
    size_t n_nodes = 0;
    int n_vars = 0;
    is >> tag >> n_nodes >> n_vars;
    if (tag != "ddnnf") throw ModelError("bad circuit header");
    DdnnfCircuit c;
    std::vector<int> ids;
    for (size_t i = 0; i < n_nodes; ++i) {
        std::string kind;
        if (!(is >> kind)) throw ModelError("truncated circuit file");
        if (kind == "T") {
            ids.push_back(c.ctrue());
        } else if (kind == "F") {
            ids.push_back(c.cfalse());
        } else if (kind == "L") {
            int v;
            is >> v;
            int var = std::abs(v) - 1;
            if (var < 0 || var >= n_vars) throw ModelError("literal out of range");
            ids.push_back(c.lit(var, v > 0));
        } else if (kind == "A") {
            size_t k;
            is >> k;
            std::vector<int> kids;
            for (size_t j = 0; j < k; ++j) {
                size_t x;
                is >> x;
                if (x >= ids.size()) throw ModelError("forward reference in circuit file");
                kids.push_back(ids[x]);
            }
            ids.push_back(c.conj(std::move(kids)));
        } else if (kind == "O") {
            int v;
            size_t lo, hi;
            is >> v >> lo >> hi;
            if (lo >= ids.size() || hi >= ids.size())
                throw ModelError("forward reference in circuit file");
            ids.push_back(c.decision(v - 1, ids[lo], ids[hi]));
        } else {
            throw ModelError("unknown node kind: " + kind);
        }
    }
    if (ids.empty()) throw ModelError("empty circuit file");
    c.set_root(ids.back());
    VerifyReport rep = verify_ddnnf(c, reg);
    if (!rep.ok()) throw ModelError("circuit violates d-DNNF invariants: " + rep.violations.front());
    return c;
}

} // namespace hwmi
