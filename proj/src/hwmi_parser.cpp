#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hwmi/model.hpp"

namespace hwmi {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    bool accept(const std::string& punct) {
        if (tok_.kind == Tok::Punct && tok_.text == punct) {
            advance();
            return true;
        }
        return false;
    }

    bool accept_word(const std::string& w) {
        if (tok_.kind == Tok::Ident && tok_.text == w) {
            advance();
            return true;
        }
        return false;
    }

    void expect(const std::string& punct) {
        if (!accept(punct)) fail("expected '" + punct + "'");
    }

    std::string expect_ident() {
        if (tok_.kind != Tok::Ident) fail("expected identifier");
        return next().text;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, tok_.line, tok_.col);
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        tok_ = {Tok::End, "", line_, col_};
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        int sl = line_, sc = col_;
        auto take = [&](size_t n) {
            std::string s = src_.substr(pos_, n);
            pos_ += n;
            col_ += static_cast<int>(n);
            return s;
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t n = 0;
            while (pos_ + n < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_ + n])) ||
                    src_[pos_ + n] == '_'))
                ++n;
            tok_ = {Tok::Ident, take(n), sl, sc};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t n = 0;
            while (pos_ + n < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_ + n])) ||
                    src_[pos_ + n] == '.'))
                ++n;
            tok_ = {Tok::Number, take(n), sl, sc};
            return;
        }
        for (const char* op : {"<->", ":=", "->", "<=", ">=", "!=", "~"}) {
            size_t n = std::strlen(op);
            if (src_.compare(pos_, n, op) == 0) {
                tok_ = {Tok::Punct, take(n), sl, sc};
                return;
            }
        }
        tok_ = {Tok::Punct, take(1), sl, sc};
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_{Tok::End, "", 1, 1};
};

class ModelParser {
public:
    explicit ModelParser(const std::string& src) : lex_(src) {}

    std::unique_ptr<Model> run() {
        auto m = std::make_unique<Model>();
        model_ = m.get();
        while (lex_.peek().kind != Tok::End) {
            if (lex_.accept_word("var"))
                parse_var();
            else if (lex_.accept_word("formula"))
                parse_formula_decl();
            else if (lex_.accept_word("query"))
                parse_query();
            else
                lex_.fail("expected 'var', 'formula' or 'query'");
        }
        for (const auto& q : model_->queries)
            if (!model_->has_formula(q)) lex_.fail("query names unknown formula: " + q);
        return m;
    }

private:
    Rat parse_number() {
        bool neg = lex_.accept("-");
        if (lex_.peek().kind != Tok::Number) lex_.fail("expected number");
        Token t = lex_.next();
        std::string text = t.text;
        if (lex_.accept("/")) {
            if (lex_.peek().kind != Tok::Number) lex_.fail("expected denominator");
            text += "/" + lex_.next().text;
        }
        auto r = parse_rational(text);
        if (!r) throw ParseError("malformed number: " + text, t.line, t.col);
        return neg ? -*r : *r;
    }

    Density parse_density(const std::string& varname) {
        std::string kind = lex_.expect_ident();
        lex_.expect("(");
        Density d;
        if (kind == "normal" || kind == "uniform" || kind == "beta") {
            Rat a = parse_number();
            lex_.expect(",");
            Rat b = parse_number();
            try {
                if (kind == "normal") d = Density::normal(a, b);
                else if (kind == "uniform") d = Density::uniform(a, b);
                else d = Density::beta(a, b);
            } catch (const ModelError& e) {
                lex_.fail(e.what());
            }
        } else if (kind == "piecewise") {
            std::vector<PwPiece> pieces;
            do {
                lex_.expect("[");
                PwPiece p;
                p.lo = parse_number();
                lex_.expect(",");
                p.hi = parse_number();
                lex_.expect("]");
                lex_.expect(":");
                p.coefs = parse_poly(varname);
                pieces.push_back(std::move(p));
            } while (lex_.accept(";"));
            try {
                d = Density::piecewise(std::move(pieces));
            } catch (const ModelError& e) {
                lex_.fail(e.what());
            }
        } else {
            lex_.fail("unknown density: " + kind);
        }
        lex_.expect(")");
        return d;
    }

    // polynomial in the declared variable, e.g. 2 - 2*t  or  6*t^2
    std::vector<Rat> parse_poly(const std::string& varname) {
        std::vector<Rat> coefs;
        auto put = [&](long p, const Rat& c) {
            if (static_cast<long>(coefs.size()) <= p) coefs.resize(p + 1, Rat(0));
            coefs[p] += c;
        };
        bool first = true;
        while (true) {
            int sgn = 1;
            if (lex_.accept("-")) sgn = -1;
            else if (lex_.accept("+")) sgn = 1;
            else if (!first) break;
            first = false;
            Rat c(1);
            bool have_coef = false;
            if (lex_.peek().kind == Tok::Number) {
                c = parse_number();
                have_coef = true;
            }
            long p = 0;
            if (lex_.peek().kind == Tok::Ident) {
                if (have_coef) lex_.expect("*");
            }
            if (lex_.peek().kind == Tok::Ident) {
                std::string v = lex_.expect_ident();
                if (v != varname) lex_.fail("piecewise polynomial must use '" + varname + "'");
                p = 1;
                if (lex_.accept("^")) {
                    Rat pw = parse_number();
                    if (denominator(pw) != 1 || pw <= 0) lex_.fail("polynomial power must be a positive integer");
                    p = pw.convert_to<long>();
                }
            } else if (!have_coef) {
                lex_.fail("expected polynomial term");
            }
            put(p, sgn > 0 ? c : -c);
            if (lex_.peek().kind == Tok::Punct &&
                (lex_.peek().text == "+" || lex_.peek().text == "-"))
                continue;
            break;
        }
        return coefs;
    }

    void parse_var() {
        bool is_bool;
        if (lex_.accept_word("bool")) is_bool = true;
        else if (lex_.accept_word("real")) is_bool = false;
        else {
            lex_.fail("expected 'bool' or 'real'");
        }
        Token nt = lex_.peek();
        std::string name = lex_.expect_ident();
        lex_.expect("~");
        if (is_bool) {
            if (!lex_.accept_word("bernoulli")) lex_.fail("expected 'bernoulli'");
            lex_.expect("(");
            Rat p = parse_number();
            lex_.expect(")");
            if (p < 0 || p > 1)
                throw ParseError("weight outside [0,1]: " + rat_to_string(p), nt.line, nt.col);
            int id;
            try {
                id = model_->reg.add(name, VarKind::Boolean);
            } catch (const ModelError& e) {
                throw ParseError(e.what(), nt.line, nt.col);
            }
            model_->weights.bool_weights.emplace(id, p);
        } else {
            Density d = parse_density(name);
            int id;
            try {
                id = model_->reg.add(name, VarKind::Real);
            } catch (const ModelError& e) {
                throw ParseError(e.what(), nt.line, nt.col);
            }
            model_->weights.add_density({id, id, {}, std::move(d)});
        }
        lex_.expect(";");
    }

    void parse_formula_decl() {
        std::string name = lex_.expect_ident();
        lex_.expect(":=");
        int f = parse_iff();
        lex_.expect(";");
        model_->formulas.emplace_back(name, f);
    }

    void parse_query() {
        std::string name = lex_.expect_ident();
        lex_.expect(";");
        model_->queries.push_back(name);
    }

    int parse_iff() {
        int f = parse_implies();
        while (lex_.accept("<->")) f = model_->fac.iff(f, parse_implies());
        return f;
    }

    int parse_implies() {
        int f = parse_or();
        if (lex_.accept("->")) return model_->fac.implies(f, parse_implies());
        return f;
    }

    int parse_or() {
        std::vector<int> kids{parse_and()};
        while (lex_.accept("|")) kids.push_back(parse_and());
        return kids.size() == 1 ? kids[0] : model_->fac.disj(std::move(kids));
    }

    int parse_and() {
        std::vector<int> kids{parse_unary()};
        while (lex_.accept("&")) kids.push_back(parse_unary());
        return kids.size() == 1 ? kids[0] : model_->fac.conj(std::move(kids));
    }

    bool at_arith_start() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Number) return true;
        if (t.kind == Tok::Punct && t.text == "-") return true;
        if (t.kind == Tok::Ident && t.text != "true" && t.text != "false") {
            int id = model_->reg.find(t.text);
            return id >= 0 && model_->reg.is_real(id);
        }
        return false;
    }

    int parse_unary() {
        if (lex_.accept("!")) return model_->fac.negate(parse_unary());
        if (at_arith_start()) return parse_comparison();
        if (lex_.accept("(")) {
            int f = parse_iff();
            lex_.expect(")");
            return f;
        }
        if (lex_.accept_word("true")) return model_->fac.ftrue();
        if (lex_.accept_word("false")) return model_->fac.ffalse();
        Token t = lex_.peek();
        std::string name = lex_.expect_ident();
        int id = model_->reg.find(name);
        if (id < 0) throw ParseError("unknown variable: " + name, t.line, t.col);
        if (model_->reg.is_real(id))
            throw ParseError("real variable used as Boolean atom: " + name, t.line, t.col);
        return model_->fac.bool_atom(id);
    }

    struct ArithSide {
        std::vector<AtomTerm> terms;
        Rat constant{0};
    };

    ArithSide parse_arith() {
        ArithSide side;
        bool first = true;
        while (true) {
            int sgn = 1;
            if (lex_.accept("-")) sgn = -1;
            else if (lex_.accept("+")) sgn = 1;
            else if (!first) break;
            first = false;
            Rat c(1);
            bool have_coef = false;
            if (lex_.peek().kind == Tok::Number) {
                Token t = lex_.next();
                std::string text = t.text;
                if (lex_.accept("/")) {
                    if (lex_.peek().kind != Tok::Number) lex_.fail("expected denominator");
                    text += "/" + lex_.next().text;
                }
                auto r = parse_rational(text);
                if (!r) throw ParseError("malformed number: " + text, t.line, t.col);
                c = *r;
                have_coef = true;
            }
            if (lex_.peek().kind == Tok::Ident &&
                lex_.peek().text != "true" && lex_.peek().text != "false") {
                if (have_coef) lex_.expect("*");
                Token vt = lex_.peek();
                std::string name = lex_.expect_ident();
                int id = model_->reg.find(name);
                if (id < 0) throw ParseError("unknown variable: " + name, vt.line, vt.col);
                if (!model_->reg.is_real(id))
                    throw ParseError("Boolean variable in arithmetic term: " + name, vt.line,
                                     vt.col);
                Rat power(1);
                if (lex_.accept("^")) {
                    power = parse_number();
                    if (power <= 0) lex_.fail("powers must be positive rationals");
                }
                side.terms.push_back({sgn > 0 ? c : -c, id, power});
            } else if (have_coef) {
                side.constant += sgn > 0 ? c : -c;
            } else {
                lex_.fail("expected arithmetic term");
            }
            if (lex_.peek().kind == Tok::Punct &&
                (lex_.peek().text == "+" || lex_.peek().text == "-"))
                continue;
            break;
        }
        return side;
    }

    int parse_comparison() {
        ArithSide lhs = parse_arith();
        Cmp cmp;
        if (lex_.accept("<=")) cmp = Cmp::Le;
        else if (lex_.accept(">=")) cmp = Cmp::Ge;
        else if (lex_.accept("!=")) cmp = Cmp::Ne;
        else if (lex_.accept("<")) cmp = Cmp::Lt;
        else if (lex_.accept(">")) cmp = Cmp::Gt;
        else if (lex_.accept("=")) cmp = Cmp::Eq;
        else {
            lex_.fail("expected comparison operator");
        }
        ArithSide rhs = parse_arith();

        NraAtom atom;
        atom.cmp = cmp;
        atom.terms = lhs.terms;
        for (auto t : rhs.terms) {
            t.coef = -t.coef;
            atom.terms.push_back(t);
        }
        atom.bound = rhs.constant - lhs.constant;
        if (atom.terms.empty()) {
            // constant comparison folds to a truth value
            int c = Rat(0) < atom.bound   ? -1
                    : Rat(0) > atom.bound ? 1
                                          : 0;
            bool holds;
            switch (cmp) {
                case Cmp::Lt: holds = c < 0; break;
                case Cmp::Le: holds = c <= 0; break;
                case Cmp::Gt: holds = c > 0; break;
                case Cmp::Ge: holds = c >= 0; break;
                case Cmp::Eq: holds = c == 0; break;
                case Cmp::Ne: holds = c != 0; break;
            }
            return holds ? model_->fac.ftrue() : model_->fac.ffalse();
        }
        return model_->fac.constraint(atom);
    }

    Lexer lex_;
    Model* model_ = nullptr;
};

} // namespace

std::unique_ptr<Model> parse_model(const std::string& text) {
    return ModelParser(text).run();
}

std::unique_ptr<Model> parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

} // namespace hwmi
