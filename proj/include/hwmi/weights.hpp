#pragma once

#include <map>
#include <vector>

#include "hwmi/density.hpp"
#include "hwmi/registry.hpp"

namespace hwmi {

struct GuardLit {
    int var = -1;
    bool pos = true;
    auto operator<=>(const GuardLit&) const = default;
};

// {var ~ density} possibly conditioned on a conjunction of Boolean literals.
// `family` groups the symbolic values of one source variable (e.g. the two
// guarded aliases of a mixture); equals `var` when unguarded.
struct DensityEntry {
    int var = -1;
    int family = -1;
    std::vector<GuardLit> guard;
    Density density;

    bool operator==(const DensityEntry& o) const {
        return var == o.var && family == o.family && guard == o.guard && density == o.density;
    }
    bool operator<(const DensityEntry& o) const {
        if (var != o.var) return var < o.var;
        if (family != o.family) return family < o.family;
        return guard < o.guard;
    }
};

// Factorized weights: one probability per Boolean variable, one density
// entry (or guarded set of entries) per real variable.
struct WeightSpec {
    std::map<int, Rat> bool_weights;
    std::vector<DensityEntry> densities;   // kept sorted by (var, family, guard)

    void add_density(DensityEntry e) {
        densities.push_back(std::move(e));
        std::sort(densities.begin(), densities.end());
    }

    const DensityEntry* entry_for(int var) const {
        for (const auto& e : densities)
            if (e.var == var) return &e;
        return nullptr;
    }

    std::vector<const DensityEntry*> entries_for(int var) const {
        std::vector<const DensityEntry*> out;
        for (const auto& e : densities)
            if (e.var == var) out.push_back(&e);
        return out;
    }

    Rat bool_weight(int var) const {
        auto it = bool_weights.find(var);
        if (it == bool_weights.end()) throw ModelError("unlabeled Boolean variable");
        return it->second;
    }
};

} // namespace hwmi
