#include "hwmi/halpl.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace hwmi {

std::string HalCond::render(const std::map<std::string, std::string>& subst) const {
    std::string out;
    for (const auto& [txt, is_lvar] : frags) out += is_lvar ? subst.at(txt) : txt;
    return out;
}

namespace {

// ---------------------------------------------------------------- lexer

struct Tok {
    enum T { Ident, LVar, Num, Punct, End } t = End;
    std::string s;
    Rat num;
    int line = 0, col = 0;
};

struct Lexer {
    const std::string& src;
    size_t i = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

    void bump() {
        if (i < src.size() && src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }

    void skip() {
        while (i < src.size()) {
            if (std::isspace(static_cast<unsigned char>(src[i]))) {
                bump();
            } else if (src[i] == '%') {
                while (i < src.size() && src[i] != '\n') bump();
            } else {
                break;
            }
        }
    }

    Tok next() {
        skip();
        Tok t;
        t.line = line;
        t.col = col;
        if (i >= src.size()) return t;
        char c = src[i];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                t.s += src[i];
                bump();
            }
            t.t = std::isupper(static_cast<unsigned char>(c)) ? Tok::LVar : Tok::Ident;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                t.s += src[i];
                bump();
            }
            if (i + 1 < src.size() && src[i] == '.' &&
                std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                t.s += src[i];
                bump();
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    t.s += src[i];
                    bump();
                }
            }
            auto r = parse_rational(t.s);
            if (!r) fail("malformed number '" + t.s + "'");
            t.t = Tok::Num;
            t.num = *r;
            return t;
        }
        t.t = Tok::Punct;
        auto two = [&](const char* p) {
            if (i + 1 < src.size() && src[i] == p[0] && src[i + 1] == p[1]) {
                t.s = p;
                bump();
                bump();
                return true;
            }
            return false;
        };
        if (two("::") || two(":-") || two("\\+") || two("=<") || two("<=") || two(">=") ||
            two("\\=") || two("!=") || two("=="))
            return t;
        if (std::strchr("().,+-*/^<>=", c)) {
            t.s = std::string(1, c);
            bump();
            return t;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

// ---------------------------------------------------------------- parser

struct HalParser {
    Lexer lex;
    Tok cur;
    HalProgram prog;

    explicit HalParser(const std::string& text) : lex(text) { cur = lex.next(); }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur.line, cur.col); }

    void advance() { cur = lex.next(); }

    bool at(const char* p) const { return cur.t == Tok::Punct && cur.s == p; }

    void expect(const char* p) {
        if (!at(p)) fail(std::string("expected '") + p + "'");
        advance();
    }

    std::string ident(const char* what) {
        if (cur.t != Tok::Ident) fail(std::string("expected ") + what);
        std::string s = cur.s;
        advance();
        return s;
    }

    HalProgram parse() {
        while (cur.t != Tok::End) clause();
        return std::move(prog);
    }

    void clause() {
        if (cur.t == Tok::Num) {
            HalFact f;
            f.p = cur.num;
            if (f.p < 0 || f.p > 1) fail("fact probability outside [0,1]");
            advance();
            expect("::");
            f.name = ident("fact name");
            expect(".");
            prog.facts.push_back(std::move(f));
            return;
        }
        if (cur.t != Tok::Ident) fail("expected clause");
        std::string name = cur.s;
        advance();
        if (name == "query" && at("(")) {
            advance();
            prog.queries.push_back(ident("query atom"));
            expect(")");
            expect(".");
            return;
        }
        if (at("(")) {
            dist_clause(name);
            return;
        }
        HalRule r;
        r.head = name;
        if (at(":-")) {
            advance();
            body(r.body);
        }
        expect(".");
        prog.rules.push_back(std::move(r));
    }

    Rat signed_num() {
        bool neg = false;
        if (at("-")) {
            neg = true;
            advance();
        }
        if (cur.t != Tok::Num) fail("expected number");
        Rat v = cur.num;
        advance();
        return neg ? -v : v;
    }

    void dist_clause(const std::string& kind) {
        expect("(");
        Rat a = signed_num();
        expect(",");
        Rat b = signed_num();
        expect(")");
        HalDistClause d;
        if (kind == "normal")
            d.density = Density::normal(a, b);
        else if (kind == "uniform")
            d.density = Density::uniform(a, b);
        else if (kind == "beta")
            d.density = Density::beta(a, b);
        else
            fail("unknown density '" + kind + "'");
        expect("::");
        d.var = ident("continuous variable");
        if (at(":-")) {
            advance();
            while (true) {
                bool pos = true;
                if (at("\\+")) {
                    pos = false;
                    advance();
                } else if (cur.t == Tok::Ident && cur.s == "not") {
                    pos = false;
                    advance();
                    if (at("(")) {
                        advance();
                        d.guard.emplace_back(ident("atom"), false);
                        expect(")");
                        goto next;
                    }
                }
                d.guard.emplace_back(ident("atom"), pos);
            next:
                if (!at(",")) break;
                advance();
            }
        }
        expect(".");
        prog.dists.push_back(std::move(d));
    }

    void body(std::vector<HalBodyLit>& out) {
        while (true) {
            out.push_back(body_lit());
            if (!at(",")) break;
            advance();
        }
    }

    HalBodyLit body_lit() {
        HalBodyLit l;
        if (at("\\+")) {
            l.pos = false;
            advance();
        } else if (cur.t == Tok::Ident && cur.s == "not") {
            advance();
            if (at("(")) {
                advance();
                HalBodyLit inner = body_lit();
                expect(")");
                inner.pos = !inner.pos;
                return inner;
            }
            l.pos = false;
        }
        if (cur.t != Tok::Ident) fail("expected body literal");
        std::string name = cur.s;
        advance();
        if (name == "valS") {
            if (!l.pos) fail("negated valS/2 is not allowed");
            expect("(");
            l.kind = HalBodyLit::ValS;
            l.family = ident("continuous variable");
            if (!at(",")) fail("valS/2 expects two arguments");
            advance();
            if (cur.t != Tok::LVar) fail("valS/2 expects a logic variable as second argument");
            l.lvar = cur.s;
            advance();
            if (at(",")) fail("valS/2 expects two arguments");
            expect(")");
            return l;
        }
        if (name == "conS") {
            expect("(");
            l.kind = HalBodyLit::ConS;
            l.cond = static_cast<int>(prog.conditions.size());
            prog.conditions.push_back(condition());
            if (at(",")) fail("conS/1 expects one argument");
            expect(")");
            return l;
        }
        l.kind = HalBodyLit::Atom;
        l.atom = name;
        return l;
    }

    // ---- arithmetic condition inside conS(...)

    struct Side {
        std::vector<HalCond::Term> terms;
        Rat constant;
    };

    void frag(HalCond& c, const std::string& s, bool lvar = false) {
        c.frags.emplace_back(s, lvar);
    }

    HalCond condition() {
        HalCond c;
        Side lhs = side(c);
        Cmp cmp;
        if (at("<")) cmp = Cmp::Lt;
        else if (at("<=") || at("=<")) cmp = Cmp::Le;
        else if (at(">")) cmp = Cmp::Gt;
        else if (at(">=")) cmp = Cmp::Ge;
        else if (at("=") || at("==")) cmp = Cmp::Eq;
        else if (at("\\=") || at("!=")) cmp = Cmp::Ne;
        else fail("expected comparison operator");
        frag(c, cur.s == "=<" ? "<=" : cur.s);
        advance();
        Side rhs = side(c);
        c.cmp = cmp;
        c.bound = rhs.constant - lhs.constant;
        c.terms = std::move(lhs.terms);
        for (auto& t : rhs.terms) {
            t.coef = -t.coef;
            c.terms.push_back(std::move(t));
        }
        for (const auto& t : c.terms)
            if (std::find(c.lvars.begin(), c.lvars.end(), t.lvar) == c.lvars.end())
                c.lvars.push_back(t.lvar);
        return c;
    }

    Side side(HalCond& c) {
        Side s;
        bool neg = false;
        if (at("-")) {
            frag(c, "-");
            advance();
            neg = true;
        }
        addend(c, s, neg);
        while (at("+") || at("-")) {
            bool minus = cur.s == "-";
            frag(c, cur.s);
            advance();
            addend(c, s, minus);
        }
        return s;
    }

    void addend(HalCond& c, Side& s, bool neg) {
        Rat coef = neg ? -1 : 1;
        std::string lvar;
        Rat power = 1;
        bool have_lvar = false, have_any = false;
        while (true) {
            if (cur.t == Tok::Num) {
                frag(c, cur.s);
                coef *= cur.num;
                advance();
            } else if (cur.t == Tok::LVar) {
                if (have_lvar) fail("products of logic variables are not supported");
                have_lvar = true;
                lvar = cur.s;
                frag(c, cur.s, true);
                advance();
                if (at("^")) {
                    frag(c, "^");
                    advance();
                    if (cur.t != Tok::Num) fail("expected exponent");
                    frag(c, cur.s);
                    power = cur.num;
                    advance();
                }
            } else {
                if (!have_any) fail("expected arithmetic term");
                break;
            }
            have_any = true;
            if (at("*")) {
                frag(c, "*");
                advance();
                continue;
            }
            if (at("/")) {
                frag(c, "/");
                advance();
                if (cur.t != Tok::Num || cur.num == 0) fail("expected nonzero divisor");
                frag(c, cur.s);
                coef /= cur.num;
                advance();
            }
            break;
        }
        if (have_lvar)
            s.terms.push_back({coef, lvar, power});
        else
            s.constant += coef;
    }
};

// ---------------------------------------------------------------- grounding

std::string guard_text(const std::vector<std::pair<std::string, bool>>& guard) {
    std::string s;
    for (size_t i = 0; i < guard.size(); ++i) {
        if (i) s += ", ";
        s += (guard[i].second ? "" : "\\+") + guard[i].first;
    }
    return s;
}

std::string alias_name(const std::string& var,
                       const std::vector<std::pair<std::string, bool>>& guard) {
    if (guard.empty()) return var;
    std::string s = var + "|";
    for (size_t i = 0; i < guard.size(); ++i) {
        if (i) s += ",";
        s += (guard[i].second ? "" : "~") + guard[i].first;
    }
    return s;
}

struct Grounder {
    const HalProgram& p;
    std::unique_ptr<Model> m = std::make_unique<Model>();

    std::map<std::string, int> fact_var;
    std::map<std::string, std::vector<size_t>> fam_dists;   // family -> dist indices
    std::vector<std::string> fam_order;
    std::vector<int> alias_var;                              // per dist index
    std::map<std::string, std::vector<const HalRule*>> rules_by_head;

    struct GroundConS {
        int formula = 0;
        std::vector<std::string> dump_lines;
    };
    std::map<std::string, GroundConS> ground_cons;
    std::vector<std::string> cons_order;
    // per (rule, body position): ground conS key, for rule rendering
    std::map<std::pair<size_t, size_t>, std::string> rule_cons_key;

    explicit Grounder(const HalProgram& prog) : p(prog) {}

    std::unique_ptr<Model> run(std::string* dump) {
        declare_facts();
        declare_dists();
        ExclusivityReport rep = check_mutual_exclusivity(p);
        if (!rep.ok()) {
            std::string msg = "guards are not mutually exclusive:";
            for (const auto& v : rep.violations) msg += " " + v + ";";
            throw ModelError(msg);
        }
        index_rules();
        for (size_t r = 0; r < p.rules.size(); ++r) ground_rule_cons(r);
        for (const auto& q : p.queries) {
            std::set<std::string> pending;
            std::map<std::string, int> memo;
            int f = atom_formula(q, pending, memo);
            m->formulas.emplace_back(q, f);
            m->queries.push_back(q);
        }
        if (dump) *dump = render_dump();
        return std::move(m);
    }

    void declare_facts() {
        for (const auto& f : p.facts) {
            int v = m->reg.add(f.name, VarKind::Boolean);
            fact_var[f.name] = v;
            m->weights.bool_weights[v] = f.p;
        }
    }

    void declare_dists() {
        alias_var.resize(p.dists.size(), -1);
        for (size_t i = 0; i < p.dists.size(); ++i) {
            const HalDistClause& d = p.dists[i];
            if (fact_var.count(d.var))
                throw ModelError("'" + d.var + "' is both a fact and a continuous variable");
            if (!fam_dists.count(d.var)) fam_order.push_back(d.var);
            fam_dists[d.var].push_back(i);
            for (const auto& [g, pos] : d.guard)
                if (!fact_var.count(g))
                    throw ModelError("distributional clause guard '" + g +
                                     "' is not a probabilistic fact");
            int v = m->reg.add(alias_name(d.var, d.guard), VarKind::Real);
            alias_var[i] = v;
        }
        for (const auto& fam : fam_order) {
            const auto& idxs = fam_dists[fam];
            int family_id = alias_var[idxs.front()];
            for (size_t i : idxs) {
                DensityEntry e;
                e.var = alias_var[i];
                e.family = family_id;
                for (const auto& [g, pos] : p.dists[i].guard)
                    e.guard.push_back({fact_var[g], pos});
                std::sort(e.guard.begin(), e.guard.end());
                e.density = p.dists[i].density;
                m->weights.add_density(std::move(e));
            }
        }
    }

    void index_rules() {
        for (const auto& r : p.rules) {
            if (fact_var.count(r.head))
                throw ModelError("cannot redefine probabilistic fact '" + r.head + "'");
            if (fam_dists.count(r.head))
                throw ModelError("cannot redefine continuous variable '" + r.head + "'");
            rules_by_head[r.head].push_back(&r);
        }
    }

    // Expands every conS occurrence of one rule per the grounding schema.
    void ground_rule_cons(size_t ri) {
        const HalRule& r = p.rules[ri];
        std::map<std::string, std::string> binding;   // logic var -> family
        std::set<std::string> used_lvars;
        for (const auto& l : r.body) {
            if (l.kind != HalBodyLit::ValS) continue;
            if (!fam_dists.count(l.family))
                throw ModelError("continuous variable '" + l.family + "' is never defined");
            if (binding.count(l.lvar))
                throw ModelError("logic variable '" + l.lvar + "' bound twice");
            binding[l.lvar] = l.family;
        }
        for (size_t bi = 0; bi < r.body.size(); ++bi) {
            const auto& l = r.body[bi];
            if (l.kind != HalBodyLit::ConS) continue;
            const HalCond& cond = p.conditions[l.cond];
            for (const auto& lv : cond.lvars) {
                if (!binding.count(lv))
                    throw ModelError("unbound logic variable '" + lv + "' in conS condition");
                used_lvars.insert(lv);
            }
            std::string key = cond.render(binding);
            rule_cons_key[{ri, bi}] = key;
            if (ground_cons.count(key)) continue;
            expand_cons(cond, binding, key);
        }
        for (const auto& [lv, fam] : binding)
            if (!used_lvars.count(lv))
                throw ModelError("symbolic value '" + lv +
                                 "' is never used in a conS condition");
    }

    void expand_cons(const HalCond& cond, const std::map<std::string, std::string>& binding,
                     const std::string& key) {
        std::vector<std::string> fams;   // per logic var, in appearance order
        for (const auto& lv : cond.lvars) fams.push_back(binding.at(lv));
        GroundConS g;
        std::vector<int> disjuncts;
        std::vector<size_t> idx(fams.size(), 0);
        while (true) {
            // one guard combination: dist fam_dists[fams[i]][idx[i]] per position
            std::map<std::string, std::string> theta_h;
            std::vector<std::pair<std::string, bool>> guard_union;
            std::vector<int> kids;
            std::string densities;
            for (size_t i = 0; i < fams.size(); ++i) {
                const HalDistClause& d = p.dists[fam_dists[fams[i]][idx[i]]];
                std::string alias = alias_name(d.var, d.guard);
                theta_h[cond.lvars[i]] = alias;
                for (const auto& gl : d.guard)
                    if (std::find(guard_union.begin(), guard_union.end(), gl) ==
                        guard_union.end())
                        guard_union.push_back(gl);
                std::string dstr = d.density.to_string();
                dstr.insert(dstr.find('('), "_" + alias);
                densities += (densities.empty() ? "" : ", ") + dstr;
            }
            for (const auto& [a, pos] : guard_union) {
                int lit = m->fac.bool_atom(fact_var.at(a));
                kids.push_back(pos ? lit : m->fac.negate(lit));
            }
            NraAtom raw;
            for (const auto& t : cond.terms) {
                size_t pos = std::find(cond.lvars.begin(), cond.lvars.end(), t.lvar) -
                             cond.lvars.begin();
                raw.terms.push_back(
                    {t.coef, alias_var[fam_dists[fams[pos]][idx[pos]]], t.power});
            }
            raw.cmp = cond.cmp;
            raw.bound = cond.bound;
            kids.push_back(m->fac.constraint(raw));
            disjuncts.push_back(m->fac.conj(std::move(kids)));

            std::string line = "(" + cond.render(theta_h) + ", " + densities + ")::conS(" +
                               key + ")";
            std::string gt = guard_text(guard_union);
            if (!gt.empty()) line += " :- " + gt;
            g.dump_lines.push_back(line + ".");

            size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < fam_dists[fams[i]].size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
        }
        g.formula = m->fac.disj(std::move(disjuncts));
        ground_cons.emplace(key, std::move(g));
        cons_order.push_back(key);
    }

    int atom_formula(const std::string& name, std::set<std::string>& pending,
                     std::map<std::string, int>& memo) {
        auto it = memo.find(name);
        if (it != memo.end()) return it->second;
        auto fv = fact_var.find(name);
        if (fv != fact_var.end()) return m->fac.bool_atom(fv->second);
        auto rs = rules_by_head.find(name);
        if (rs == rules_by_head.end()) throw ModelError("undefined atom '" + name + "'");
        if (!pending.insert(name).second)
            throw ModelError("cyclic definition of '" + name + "'");
        std::vector<int> bodies;
        for (const HalRule* r : rs->second) {
            size_t ri = r - p.rules.data();
            std::vector<int> kids;
            for (size_t bi = 0; bi < r->body.size(); ++bi) {
                const auto& l = r->body[bi];
                int f;
                switch (l.kind) {
                    case HalBodyLit::ValS: continue;
                    case HalBodyLit::ConS:
                        f = ground_cons.at(rule_cons_key.at({ri, bi})).formula;
                        break;
                    case HalBodyLit::Atom: f = atom_formula(l.atom, pending, memo); break;
                }
                kids.push_back(l.pos ? f : m->fac.negate(f));
            }
            bodies.push_back(m->fac.conj(std::move(kids)));
        }
        pending.erase(name);
        int f = m->fac.disj(std::move(bodies));
        memo[name] = f;
        return f;
    }

    std::string render_dump() const {
        std::ostringstream os;
        for (const auto& f : p.facts)
            os << rat_to_decimal_string(f.p) << "::" << f.name << ".\n";
        for (const auto& key : cons_order)
            for (const auto& line : ground_cons.at(key).dump_lines) os << line << "\n";
        for (size_t ri = 0; ri < p.rules.size(); ++ri) {
            const HalRule& r = p.rules[ri];
            os << r.head;
            std::vector<std::string> parts;
            for (size_t bi = 0; bi < r.body.size(); ++bi) {
                const auto& l = r.body[bi];
                switch (l.kind) {
                    case HalBodyLit::ValS: break;
                    case HalBodyLit::ConS:
                        parts.push_back((l.pos ? "" : "\\+") + std::string("conS(") +
                                        rule_cons_key.at({ri, bi}) + ")");
                        break;
                    case HalBodyLit::Atom:
                        parts.push_back((l.pos ? "" : "\\+") + l.atom);
                        break;
                }
            }
            if (!parts.empty()) {
                os << " :- ";
                for (size_t i = 0; i < parts.size(); ++i)
                    os << (i ? ", " : "") << parts[i];
            }
            os << ".\n";
        }
        for (const auto& q : p.queries) os << "query(" << q << ").\n";
        return os.str();
    }
};

} // namespace

HalProgram parse_halpl(const std::string& text) { return HalParser(text).parse(); }

HalProgram parse_halpl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_halpl(ss.str());
}

ExclusivityReport check_mutual_exclusivity(const HalProgram& p) {
    ExclusivityReport rep;
    std::map<std::string, std::vector<const HalDistClause*>> fams;
    std::vector<std::string> order;
    for (const auto& d : p.dists) {
        if (!fams.count(d.var)) order.push_back(d.var);
        fams[d.var].push_back(&d);
    }
    for (const auto& fam : order) {
        const auto& ds = fams[fam];
        for (size_t i = 0; i < ds.size(); ++i)
            for (size_t j = i + 1; j < ds.size(); ++j) {
                // exhaustive propositional check over the atoms of both guards
                std::vector<std::string> atoms;
                for (const auto* d : {ds[i], ds[j]})
                    for (const auto& [a, pos] : d->guard)
                        if (std::find(atoms.begin(), atoms.end(), a) == atoms.end())
                            atoms.push_back(a);
                if (atoms.size() > 20) {
                    rep.violations.push_back(fam + ": too many guard atoms to check");
                    continue;
                }
                auto sat = [&](const HalDistClause* d, size_t mask) {
                    for (const auto& [a, pos] : d->guard) {
                        size_t k = std::find(atoms.begin(), atoms.end(), a) - atoms.begin();
                        if (((mask >> k) & 1) != static_cast<size_t>(pos)) return false;
                    }
                    return true;
                };
                for (size_t mask = 0; mask < (size_t{1} << atoms.size()); ++mask) {
                    if (sat(ds[i], mask) && sat(ds[j], mask)) {
                        rep.violations.push_back(
                            fam + ": guards {" + guard_text(ds[i]->guard) + "} and {" +
                            guard_text(ds[j]->guard) + "} are jointly satisfiable");
                        break;
                    }
                }
            }
    }
    return rep;
}

std::unique_ptr<Model> halpl_to_model(const HalProgram& p, std::string* dump) {
    return Grounder(p).run(dump);
}

} // namespace hwmi
