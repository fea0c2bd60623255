#include "structlim/parser.hpp"

#include <cctype>
#include <sstream>

#include "structlim/errors.hpp"

namespace structlim {

namespace {

enum class Tok {
    End,
    Ident,   // relation name or keyword
    Var,     // x<digits>
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,   // ->
    DArrow,  // <->
    Equals,
};

struct Token {
    Tok kind;
    std::string text;
    int var = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void fail(const std::string& msg) const { throw parse_error(msg, line_, col_); }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            current_.text.clear();
            return;
        }
        char c = text_[pos_];
        auto single = [&](Tok k) {
            current_.kind = k;
            current_.text = std::string(1, c);
            ++pos_;
            ++col_;
        };
        switch (c) {
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case ',': single(Tok::Comma); return;
            case '.': single(Tok::Dot); return;
            case '!': single(Tok::Bang); return;
            case '&': single(Tok::Amp); return;
            case '|': single(Tok::Pipe); return;
            case '=': single(Tok::Equals); return;
            case '-':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                    current_.kind = Tok::Arrow;
                    current_.text = "->";
                    pos_ += 2;
                    col_ += 2;
                    return;
                }
                fail("unknown token '-'");
                return;
            case '<':
                if (text_.compare(pos_, 3, "<->") == 0) {
                    current_.kind = Tok::DArrow;
                    current_.text = "<->";
                    pos_ += 3;
                    col_ += 3;
                    return;
                }
                fail("unknown token '<'");
                return;
            default:
                break;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
                ++col_;
            }
            std::string word = text_.substr(start, pos_ - start);
            // "x" followed by digits is always a variable.
            if (word.size() >= 2 && word[0] == 'x' &&
                word.find_first_not_of("0123456789", 1) == std::string::npos) {
                current_.kind = Tok::Var;
                current_.text = word;
                current_.var = std::stoi(word.substr(1));
                if (current_.var < 1) fail("variable index must be positive");
                return;
            }
            current_.kind = Tok::Ident;
            current_.text = word;
            return;
        }
        fail(std::string("unknown token '") + c + "'");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Formula parse() {
        Formula f = formula();
        if (lex_.peek().kind != Tok::End) {
            fail("unexpected trailing input");
        }
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, lex_.peek().line, lex_.peek().col);
    }

    Formula formula() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident && (t.text == "exists" || t.text == "forall")) {
            return quant();
        }
        return iff();
    }

    Formula quant() {
        Token kw = lex_.take();
        if (lex_.peek().kind != Tok::Var) fail("expected a variable after '" + kw.text + "'");
        int v = lex_.take().var;
        if (lex_.peek().kind != Tok::Dot) fail("expected '.' after the quantified variable");
        lex_.take();
        Formula body = formula();
        return kw.text == "exists" ? Formula::exists(v, std::move(body))
                                   : Formula::forall(v, std::move(body));
    }

    Formula iff() {
        Formula left = imp();
        while (lex_.peek().kind == Tok::DArrow) {
            lex_.take();
            Formula right = imp();
            // a <-> b desugars to (a & b) | (!a & !b)
            Formula both = Formula::conjunction({left, right});
            Formula neither =
                Formula::conjunction({Formula::negation(left), Formula::negation(right)});
            left = Formula::disjunction({std::move(both), std::move(neither)});
        }
        return left;
    }

    Formula imp() {
        Formula left = disj();
        if (lex_.peek().kind == Tok::Arrow) {
            lex_.take();
            Formula right = imp(); // right-associative
            return Formula::disjunction({Formula::negation(std::move(left)), std::move(right)});
        }
        return left;
    }

    Formula disj() {
        std::vector<Formula> parts{conj()};
        while (lex_.peek().kind == Tok::Pipe) {
            lex_.take();
            parts.push_back(conj());
        }
        return parts.size() == 1 ? parts.front() : Formula::disjunction(std::move(parts));
    }

    Formula conj() {
        std::vector<Formula> parts{unary()};
        while (lex_.peek().kind == Tok::Amp) {
            lex_.take();
            parts.push_back(unary());
        }
        return parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
    }

    Formula unary() {
        if (lex_.peek().kind == Tok::Bang) {
            lex_.take();
            return Formula::negation(unary());
        }
        return atom();
    }

    Formula atom() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::LParen: {
                lex_.take();
                Formula f = formula();
                if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
                lex_.take();
                return f;
            }
            case Tok::Var: {
                int a = lex_.take().var;
                if (lex_.peek().kind != Tok::Equals) fail("expected '=' after a variable");
                lex_.take();
                if (lex_.peek().kind != Tok::Var) fail("expected a variable after '='");
                int b = lex_.take().var;
                return Formula::eq(a, b);
            }
            case Tok::Ident: {
                if (t.text == "true") {
                    lex_.take();
                    return Formula::truth();
                }
                if (t.text == "false") {
                    lex_.take();
                    return Formula::falsity();
                }
                if (t.text == "exists" || t.text == "forall") {
                    fail("quantifiers need parentheses in this position");
                }
                std::string name = lex_.take().text;
                if (lex_.peek().kind != Tok::LParen) fail("expected '(' after \"" + name + "\"");
                lex_.take();
                std::vector<int> vars;
                if (lex_.peek().kind != Tok::Var) fail("expected a variable");
                vars.push_back(lex_.take().var);
                while (lex_.peek().kind == Tok::Comma) {
                    lex_.take();
                    if (lex_.peek().kind != Tok::Var) fail("expected a variable");
                    vars.push_back(lex_.take().var);
                }
                if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
                lex_.take();
                return Formula::rel(std::move(name), std::move(vars));
            }
            default:
                fail("expected a formula");
        }
    }

    Lexer lex_;
};

// Precedence levels for rendering: higher binds tighter.
int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Exists:
        case NodeKind::Forall:
            return 0;
        case NodeKind::Or:
            return 1;
        case NodeKind::And:
            return 2;
        case NodeKind::Not:
            return 3;
        default:
            return 4;
    }
}

void render_into(const Formula& f, std::ostringstream& os, int parent_prec) {
    int prec = precedence(f.kind());
    // And/Or children of the same kind must be parenthesized to preserve the
    // nesting structure through a re-parse.
    bool parens = prec < parent_prec;
    if (parens) os << "(";
    switch (f.kind()) {
        case NodeKind::True:
            os << "true";
            break;
        case NodeKind::False:
            os << "false";
            break;
        case NodeKind::Rel: {
            os << f.rel_symbol() << "(";
            const auto& vars = f.rel_vars();
            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (i) os << ",";
                os << "x" << vars[i];
            }
            os << ")";
            break;
        }
        case NodeKind::Eq:
            os << "x" << f.eq_left() << "=x" << f.eq_right();
            break;
        case NodeKind::Not:
            os << "!";
            render_into(f.child(0), os, precedence(NodeKind::Not) + 1);
            break;
        case NodeKind::And: {
            const auto& cs = f.children();
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (i) os << " & ";
                render_into(cs[i], os, prec + 1);
            }
            break;
        }
        case NodeKind::Or: {
            const auto& cs = f.children();
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (i) os << " | ";
                render_into(cs[i], os, prec + 1);
            }
            break;
        }
        case NodeKind::Exists:
        case NodeKind::Forall:
            os << (f.kind() == NodeKind::Exists ? "exists" : "forall") << " x"
               << f.quantified_var() << ". ";
            render_into(f.child(0), os, 0);
            break;
    }
    if (parens) os << ")";
}

} // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

std::string render(const Formula& f) {
    std::ostringstream os;
    render_into(f, os, 0);
    return os.str();
}

} // namespace structlim
