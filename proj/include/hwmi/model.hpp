#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hwmi/formula.hpp"
#include "hwmi/weights.hpp"

namespace hwmi {

// A parsed hybrid model: registry, interned atoms, hash-consed formulas,
// factorized weights, named formulas and queries.
struct Model {
    VariableRegistry reg;
    AtomTable atoms{reg};
    FormulaFactory fac{reg, atoms};
    WeightSpec weights;
    std::vector<std::pair<std::string, int>> formulas;
    std::vector<std::string> queries;

    Model() = default;
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;

    int formula(const std::string& name) const {
        for (const auto& [n, f] : formulas)
            if (n == name) return f;
        throw ModelError("unknown formula: " + name);
    }
    bool has_formula(const std::string& name) const {
        for (const auto& [n, f] : formulas)
            if (n == name) return true;
        return false;
    }
};

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

// Parses the `.hwmi` model format.  See docs/formats.md for the grammar.
std::unique_ptr<Model> parse_model(const std::string& text);
std::unique_ptr<Model> parse_model_file(const std::string& path);

} // namespace hwmi
