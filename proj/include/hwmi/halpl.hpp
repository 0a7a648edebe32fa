#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hwmi/density.hpp"
#include "hwmi/model.hpp"

namespace hwmi {

// One arithmetic condition as written inside conS(...): parsed linear/power
// terms over logic variables, plus the original fragments for faithful
// re-rendering under a substitution.
struct HalCond {
    struct Term {
        Rat coef;
        std::string lvar;
        Rat power{1};
    };
    std::vector<Term> terms;
    Cmp cmp = Cmp::Le;
    Rat bound;
    std::vector<std::string> lvars;                      // order of appearance
    std::vector<std::pair<std::string, bool>> frags;     // (text, is_logic_var)

    std::string render(const std::map<std::string, std::string>& subst) const;
};

struct HalBodyLit {
    enum Kind { Atom, ValS, ConS } kind = Atom;
    bool pos = true;
    std::string atom;         // Atom
    std::string family;       // ValS: continuous variable
    std::string lvar;         // ValS: bound logic variable
    int cond = -1;            // ConS: index into HalProgram::conditions
};

struct HalFact {
    Rat p;
    std::string name;
};

struct HalDistClause {
    Density density;
    std::string var;
    std::vector<std::pair<std::string, bool>> guard;   // (fact atom, polarity)
};

struct HalRule {
    std::string head;
    std::vector<HalBodyLit> body;
};

struct HalProgram {
    std::vector<HalFact> facts;
    std::vector<HalDistClause> dists;
    std::vector<HalRule> rules;
    std::vector<HalCond> conditions;
    std::vector<std::string> queries;
};

// Parses the `.halpl` surface syntax (probabilistic facts `p::a.`,
// distributional clauses `normal(20,5)::t :- body.`, definite clauses with
// `valS/2` and `conS/1`, `query(q).`).  See docs/formats.md.
HalProgram parse_halpl(const std::string& text);
HalProgram parse_halpl_file(const std::string& path);

struct ExclusivityReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Pairwise satisfiability of guard bodies per continuous variable, by
// exhaustive propositional enumeration over the discrete atoms involved.
ExclusivityReport check_mutual_exclusivity(const HalProgram& p);

// Grounds the conS schema over all guard combinations, reduces the program
// by Clark completion (inlining, acyclic only) and emits a Model whose
// named formulas are the program's queries.  `dump` (optional) receives the
// grounded program listing.  Throws ModelError on exclusivity violations,
// cyclic programs, or unbound symbols.
std::unique_ptr<Model> halpl_to_model(const HalProgram& p, std::string* dump = nullptr);

} // namespace hwmi
