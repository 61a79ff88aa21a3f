#include "defcyc/formula.hpp"

#include "defcyc/errors.hpp"

#include <sstream>

namespace defcyc {

namespace {
std::shared_ptr<Term> mk_term(Term::Kind k) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    return t;
}
std::shared_ptr<Formula> mk_formula(Formula::Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}
} // namespace

TermPtr Term::variable(std::string name) {
    auto t = mk_term(Kind::Variable);
    t->name = std::move(name);
    return t;
}

TermPtr Term::param(std::string name, int element) {
    auto t = mk_term(Kind::Param);
    t->name = std::move(name);
    t->param_element = element;
    return t;
}

TermPtr Term::identity() { return mk_term(Kind::Identity); }

TermPtr Term::product(TermPtr a, TermPtr b) {
    auto t = mk_term(Kind::Product);
    t->left = std::move(a);
    t->right = std::move(b);
    return t;
}

TermPtr Term::inverse(TermPtr x) {
    auto t = mk_term(Kind::Inverse);
    t->arg = std::move(x);
    return t;
}

TermPtr Term::power(TermPtr x, long long k) {
    auto t = mk_term(Kind::Power);
    t->arg = std::move(x);
    t->exponent = k;
    return t;
}

FormulaPtr Formula::eq(TermPtr a, TermPtr b) {
    auto f = mk_formula(Kind::Eq);
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

FormulaPtr Formula::neq(TermPtr a, TermPtr b) { return negate(eq(std::move(a), std::move(b))); }

FormulaPtr Formula::negate(FormulaPtr x) {
    auto f = mk_formula(Kind::Not);
    f->children.push_back(std::move(x));
    return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
    if (fs.size() == 1) return fs[0];
    auto f = mk_formula(Kind::And);
    f->children = std::move(fs);
    return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
    if (fs.size() == 1) return fs[0];
    auto f = mk_formula(Kind::Or);
    f->children = std::move(fs);
    return f;
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
    auto f = mk_formula(Kind::Implies);
    f->children.push_back(std::move(a));
    f->children.push_back(std::move(b));
    return f;
}

FormulaPtr Formula::exists(std::vector<std::string> vars, FormulaPtr body) {
    auto f = mk_formula(Kind::Exists);
    f->vars = std::move(vars);
    f->body = std::move(body);
    return f;
}

FormulaPtr Formula::forall(std::vector<std::string> vars, FormulaPtr body) {
    auto f = mk_formula(Kind::ForAll);
    f->vars = std::move(vars);
    f->body = std::move(body);
    return f;
}

bool equal(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Term::Kind::Variable: return a.name == b.name;
    case Term::Kind::Param: return a.name == b.name && a.param_element == b.param_element;
    case Term::Kind::Identity: return true;
    case Term::Kind::Product: return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case Term::Kind::Inverse: return equal(*a.arg, *b.arg);
    case Term::Kind::Power: return a.exponent == b.exponent && equal(*a.arg, *b.arg);
    }
    return false;
}

bool equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Formula::Kind::Eq: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
        if (a.children.size() != b.children.size()) return false;
        for (std::size_t i = 0; i < a.children.size(); ++i)
            if (!equal(*a.children[i], *b.children[i])) return false;
        return true;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::ForAll:
        return a.vars == b.vars && equal(*a.body, *b.body);
    }
    return false;
}

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
    switch (t.kind) {
    case Term::Kind::Variable: out.insert(t.name); break;
    case Term::Kind::Product:
        term_vars(*t.left, out);
        term_vars(*t.right, out);
        break;
    case Term::Kind::Inverse:
    case Term::Kind::Power: term_vars(*t.arg, out); break;
    default: break;
    }
}

void free_vars_rec(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind) {
    case Formula::Kind::Eq: {
        std::set<std::string> vs;
        term_vars(*f.lhs, vs);
        term_vars(*f.rhs, vs);
        for (const auto& v : vs)
            if (!bound.count(v)) out.insert(v);
        break;
    }
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
        for (const auto& c : f.children) free_vars_rec(*c, bound, out);
        break;
    case Formula::Kind::Exists:
    case Formula::Kind::ForAll: {
        std::vector<std::string> added;
        for (const auto& v : f.vars)
            if (bound.insert(v).second) added.push_back(v);
        free_vars_rec(*f.body, bound, out);
        for (const auto& v : added) bound.erase(v);
        break;
    }
    }
}

} // namespace

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars_rec(f, bound, out);
    return out;
}

// --- Printing -------------------------------------------------------------

namespace {

bool is_name_leaf(const Term& t) {
    return t.kind == Term::Kind::Variable || t.kind == Term::Kind::Param;
}

std::string mult_print(const Term& t) {
    switch (t.kind) {
    case Term::Kind::Variable:
    case Term::Kind::Param: return t.name;
    case Term::Kind::Identity: return "1";
    case Term::Kind::Product: {
        // Left-associated chains print bare; right-nested products need
        // parens to reparse with the same shape.
        std::string l = mult_print(*t.left);
        std::string r = mult_print(*t.right);
        if (t.right->kind == Term::Kind::Product) r = "(" + r + ")";
        return l + "*" + r;
    }
    case Term::Kind::Inverse: {
        std::string inner = mult_print(*t.arg);
        if (!is_name_leaf(*t.arg) && t.arg->kind != Term::Kind::Identity)
            inner = "(" + inner + ")";
        return inner + "^-1";
    }
    case Term::Kind::Power: {
        std::string inner = mult_print(*t.arg);
        if (!is_name_leaf(*t.arg) && t.arg->kind != Term::Kind::Identity)
            inner = "(" + inner + ")";
        return inner + "^" + std::to_string(t.exponent);
    }
    }
    return {};
}

std::string add_sum(const Term& t);

// One additive summand (no leading sign): coefficient forms wrap anything
// that is not a bare name in parens.
std::string add_summand(const Term& t) {
    switch (t.kind) {
    case Term::Kind::Variable:
    case Term::Kind::Param: return t.name;
    case Term::Kind::Identity: return "0";
    case Term::Kind::Power: {
        if (t.exponent < 0) return "(" + add_sum(t) + ")";
        std::string inner =
            is_name_leaf(*t.arg) ? t.arg->name : "(" + add_sum(*t.arg) + ")";
        return std::to_string(t.exponent) + inner;
    }
    case Term::Kind::Inverse:
    case Term::Kind::Product: return "(" + add_sum(t) + ")";
    }
    return {};
}

std::string add_sum(const Term& t) {
    switch (t.kind) {
    case Term::Kind::Product: {
        std::string l = add_sum(*t.left);
        const Term& r = *t.right;
        // "a - x" reparses as minus-Inverse only for bare names; "a - 2x"
        // reparses as a negative coefficient. Anything else keeps its own
        // parenthesized sign so Inverse and negative Power stay distinct.
        if (r.kind == Term::Kind::Inverse && is_name_leaf(*r.arg))
            return l + " - " + r.arg->name;
        if (r.kind == Term::Kind::Power && r.exponent < 0)
            return l + " - " + add_summand(*Term::power(r.arg, -r.exponent));
        return l + " + " + add_summand(r);
    }
    case Term::Kind::Inverse:
        if (is_name_leaf(*t.arg)) return "-" + t.arg->name;
        return "-(" + add_sum(*t.arg) + ")";
    case Term::Kind::Power:
        if (t.exponent < 0) return "-" + add_summand(*Term::power(t.arg, -t.exponent));
        return add_summand(t);
    default: return add_summand(t);
    }
}

} // namespace

std::string print_term(const Term& t, Dialect d) {
    return d == Dialect::Multiplicative ? mult_print(t) : add_sum(t);
}

namespace {

int precedence_of(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
    }
}

std::string print_rec(const Formula& f, Dialect d, int parent_prec) {
    int prec = precedence_of(f.kind);
    std::string out;
    switch (f.kind) {
    case Formula::Kind::Eq:
        out = print_term(*f.lhs, d) + " = " + print_term(*f.rhs, d);
        break;
    case Formula::Kind::Not: {
        const Formula& inner = *f.children[0];
        if (inner.kind == Formula::Kind::Eq) {
            out = print_term(*inner.lhs, d) + " != " + print_term(*inner.rhs, d);
        } else {
            out = "!(" + print_rec(inner, d, 0) + ")";
        }
        break;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const char* sep = f.kind == Formula::Kind::And ? " & " : " | ";
        for (std::size_t i = 0; i < f.children.size(); ++i) {
            if (i) out += sep;
            // prec+1 forces parens on nested same-kind connectives, so the
            // parser reproduces the tree instead of flattening it.
            out += print_rec(*f.children[i], d, prec + 1);
        }
        if (f.children.empty()) {
            const char* taut = d == Dialect::Additive ? "0 = 0" : "1 = 1";
            out = f.kind == Formula::Kind::And ? taut : std::string("!(") + taut + ")";
        }
        break;
    }
    case Formula::Kind::Implies:
        out = print_rec(*f.children[0], d, prec + 1) + " -> " + print_rec(*f.children[1], d, prec);
        break;
    case Formula::Kind::Exists:
    case Formula::Kind::ForAll: {
        out = f.kind == Formula::Kind::Exists ? "exists" : "forall";
        for (const auto& v : f.vars) out += " " + v;
        out += " (" + print_rec(*f.body, d, 0) + ")";
        break;
    }
    }
    if (prec < 4 && prec < parent_prec) return "(" + out + ")";
    return out;
}

} // namespace

std::string print_formula(const Formula& f, Dialect d) { return print_rec(f, d, 0); }

// --- Parsing ----------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { Ident, Int, Symbol, End };
    Kind kind;
    std::string text;
    long long value = 0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    const std::string& source() const { return text_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= text_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text.clear();
            return;
        }
        char c = text_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
            tok_.kind = Token::Kind::Int;
            tok_.text = text_.substr(i_, j - i_);
            try {
                tok_.value = std::stoll(tok_.text);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal too large", i_);
            }
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            tok_.kind = Token::Kind::Ident;
            tok_.text = text_.substr(i_, j - i_);
            i_ = j;
            return;
        }
        // Multi-char symbols first.
        static const char* two[] = {"->", "!=", "^-"};
        for (const char* s : two) {
            if (text_.compare(i_, 2, s) == 0) {
                tok_.kind = Token::Kind::Symbol;
                tok_.text = s;
                i_ += 2;
                return;
            }
        }
        // UTF-8 middle dot as coefficient separator in the additive dialect.
        if (text_.compare(i_, 2, "\xc2\xb7") == 0) {
            tok_.kind = Token::Kind::Symbol;
            tok_.text = "\xc2\xb7";
            i_ += 2;
            return;
        }
        tok_.kind = Token::Kind::Symbol;
        tok_.text = std::string(1, c);
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, Dialect dialect, const std::set<std::string>& params)
        : lex_(text), dialect_(dialect), params_(params) {}

    FormulaPtr parse() {
        FormulaPtr f = formula();
        if (lex_.peek().kind != Token::Kind::End)
            throw ParseError("unexpected trailing input '" + lex_.peek().text + "'", lex_.peek().pos);
        return f;
    }

private:
    bool at_symbol(const char* s) const {
        return lex_.peek().kind == Token::Kind::Symbol && lex_.peek().text == s;
    }
    bool at_ident(const char* s) const {
        return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
    }
    void expect_symbol(const char* s) {
        if (!at_symbol(s))
            throw ParseError(std::string("expected '") + s + "'", lex_.peek().pos);
        lex_.take();
    }

    FormulaPtr formula() { return implication(); }

    FormulaPtr quantified() {
        bool universal = lex_.take().text == "forall";
        std::vector<std::string> vars;
        while (lex_.peek().kind == Token::Kind::Ident && !at_ident("forall") && !at_ident("exists"))
            vars.push_back(lex_.take().text);
        if (vars.empty())
            throw ParseError("quantifier needs at least one variable", lex_.peek().pos);
        FormulaPtr body;
        if (at_ident("forall") || at_ident("exists")) {
            // Chained quantifier without parens: forall y forall z (...)
            body = quantified();
        } else {
            expect_symbol("(");
            body = formula();
            expect_symbol(")");
        }
        return universal ? Formula::forall(std::move(vars), body)
                         : Formula::exists(std::move(vars), body);
    }

    FormulaPtr implication() {
        FormulaPtr left = disjunction();
        if (at_symbol("->")) {
            lex_.take();
            return Formula::implies(left, implication());
        }
        return left;
    }

    FormulaPtr disjunction() {
        std::vector<FormulaPtr> parts{conjunction()};
        while (at_symbol("|")) {
            lex_.take();
            parts.push_back(conjunction());
        }
        return Formula::disj(std::move(parts));
    }

    FormulaPtr conjunction() {
        std::vector<FormulaPtr> parts{atom()};
        while (at_symbol("&")) {
            lex_.take();
            parts.push_back(atom());
        }
        return Formula::conj(std::move(parts));
    }

    FormulaPtr atom() {
        if (at_symbol("!")) {
            lex_.take();
            return Formula::negate(atom());
        }
        if (at_ident("forall") || at_ident("exists")) return quantified();
        if (at_symbol("(") && paren_is_formula()) {
            lex_.take();
            FormulaPtr f = formula();
            expect_symbol(")");
            return f;
        }
        TermPtr l = term();
        if (at_symbol("=")) {
            lex_.take();
            return Formula::eq(l, term());
        }
        if (at_symbol("!=")) {
            lex_.take();
            return Formula::neq(l, term());
        }
        throw ParseError("expected '=' or '!='", lex_.peek().pos);
    }

    // A '(' opens a formula iff a relation or connective occurs anywhere
    // before its matching ')'; terms never contain '=', '&', '|', '!' or
    // '->', and every formula bottoms out in an equation.
    bool paren_is_formula() {
        const std::string& s = lex_.source();
        int depth = 0;
        for (std::size_t i = lex_.peek().pos; i < s.size(); ++i) {
            char c = s[i];
            if (c == '(') ++depth;
            else if (c == ')') {
                if (--depth == 0) return false;
            } else if (c == '=' || c == '&' || c == '|' || c == '!') {
                return true;
            } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
                return true;
            }
        }
        return false;
    }

    TermPtr term() {
        return dialect_ == Dialect::Multiplicative ? mult_term() : add_term();
    }

    TermPtr ident_term() {
        Token t = lex_.take();
        if (params_.count(t.text)) return Term::param(t.text);
        return Term::variable(t.text);
    }

    TermPtr mult_factor() {
        TermPtr base;
        if (lex_.peek().kind == Token::Kind::Int) {
            Token t = lex_.take();
            if (t.value != 1) throw ParseError("only '1' denotes the identity here", t.pos);
            base = Term::identity();
        } else if (at_symbol("(")) {
            lex_.take();
            base = term();
            expect_symbol(")");
        } else if (lex_.peek().kind == Token::Kind::Ident) {
            base = ident_term();
        } else {
            throw ParseError("expected term", lex_.peek().pos);
        }
        while (at_symbol("^") || at_symbol("^-")) {
            bool negative = lex_.take().text == "^-";
            if (lex_.peek().kind != Token::Kind::Int)
                throw ParseError("expected integer exponent", lex_.peek().pos);
            long long k = lex_.take().value;
            if (negative) k = -k;
            // "^-1" is the inverse notation; other exponents are powers.
            if (k == -1) base = Term::inverse(base);
            else base = Term::power(base, k);
        }
        return base;
    }

    TermPtr mult_term() {
        TermPtr acc = mult_factor();
        while (at_symbol("*")) {
            lex_.take();
            acc = Term::product(acc, mult_factor());
        }
        return acc;
    }

    // One additive summand: [int ["·"]] (ident | "(" term ")") or "0".
    TermPtr add_element(bool negated) {
        long long coeff = 1;
        bool has_coeff = false;
        if (lex_.peek().kind == Token::Kind::Int) {
            Token t = lex_.take();
            if (t.value == 0 && lex_.peek().kind != Token::Kind::Ident && !at_symbol("(") &&
                !at_symbol("\xc2\xb7")) {
                TermPtr z = Term::identity();
                return negated ? Term::inverse(z) : z;
            }
            coeff = t.value;
            has_coeff = true;
            if (at_symbol("\xc2\xb7") || at_symbol("*")) lex_.take();
        }
        TermPtr base;
        if (at_symbol("(")) {
            lex_.take();
            base = term();
            expect_symbol(")");
        } else if (lex_.peek().kind == Token::Kind::Ident) {
            base = ident_term();
        } else {
            throw ParseError("expected variable or constant", lex_.peek().pos);
        }
        if (negated) {
            if (has_coeff) return Term::power(base, -coeff);
            return Term::inverse(base);
        }
        if (has_coeff) return Term::power(base, coeff);
        return base;
    }

    TermPtr add_term() {
        bool neg = false;
        if (at_symbol("-")) {
            lex_.take();
            neg = true;
        }
        TermPtr acc = add_element(neg);
        while (at_symbol("+") || at_symbol("-")) {
            bool minus = lex_.take().text == "-";
            acc = Term::product(acc, add_element(minus));
        }
        return acc;
    }

    Lexer lex_;
    Dialect dialect_;
    const std::set<std::string>& params_;
};

} // namespace

FormulaPtr parse_formula(const std::string& text, Dialect dialect,
                         const std::set<std::string>& param_names) {
    Parser p(text, dialect, param_names);
    return p.parse();
}

} // namespace defcyc
