#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hwmi {

enum class VarKind { Boolean, Real };

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Names are unique; a name is never both boolean and real.
class VariableRegistry {
public:
    int add(const std::string& name, VarKind kind) {
        auto it = by_name_.find(name);
        if (it != by_name_.end())
            throw ModelError("duplicate variable: " + name);
        int id = static_cast<int>(names_.size());
        names_.push_back(name);
        kinds_.push_back(kind);
        by_name_.emplace(name, id);
        return id;
    }

    int find(const std::string& name) const {
        auto it = by_name_.find(name);
        return it == by_name_.end() ? -1 : it->second;
    }

    int require(const std::string& name) const {
        int id = find(name);
        if (id < 0) throw ModelError("unknown variable: " + name);
        return id;
    }

    const std::string& name(int id) const { return names_.at(id); }
    VarKind kind(int id) const { return kinds_.at(id); }
    bool is_real(int id) const { return kinds_.at(id) == VarKind::Real; }
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::vector<VarKind> kinds_;
    std::unordered_map<std::string, int> by_name_;
};

} // namespace hwmi
