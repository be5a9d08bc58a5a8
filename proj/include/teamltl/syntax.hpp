// ============================================================================
// syntax.hpp -- concrete syntax: tokenizer, recursive-descent parser, printer
//
// Grammar (whitespace-insensitive):
//
//   formula := bor
//   bor     := orx  ("or" orx)*                      Boolean disjunction
//   orx     := andx ("|" andx)*                      splitting disjunction
//   andx    := binop ("&" binop)*
//   binop   := unary (BINOP unary)?                  one binary temporal per
//   unary   := UNOP unary | atom                     level; use parentheses
//   atom    := ident | "!" ident | "top" | "bot" | "(" formula ")"
//            | "dep" "(" formula ("," formula)* ")"
//            | "inc" "(" formula ("," formula)* ";" formula ("," formula)* ")"
//
//   BINOP := U | W1 | W2 | R1 | R2 | M | UE | UA | ME
//   UNOP  := X | G | F | E | ~ | XE | XA | GE | GA
//
// Precedence, loosest to tightest: or < | < & < binary temporal < unary.
// The n-ary chains associate to the left.  render() emits minimal
// parentheses and round-trips: parse(render(f)) is structurally equal to f.
// ============================================================================
#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

namespace teamltl {
namespace detail {

struct Token {
    enum class Kind { Ident, Keyword, Punct, End } kind;
    std::string text;
    std::size_t line;
    std::size_t col;
};

inline bool is_keyword(const std::string& s) {
    static const char* const kws[] = {"or", "top", "bot", "dep", "inc", "U",  "W1", "W2",
                                      "R1", "R2",  "M",   "X",   "G",   "F",  "E",  "XE",
                                      "XA", "GE",  "GA",  "UE",  "UA",  "ME"};
    for (const char* k : kws)
        if (s == k) return true;
    return false;
}

inline std::vector<Token> tokenize_formula(const std::string& text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            std::size_t start_col = col;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_')) {
                ++i;
                ++col;
            }
            std::string word = text.substr(start, i - start);
            out.push_back({is_keyword(word) ? Token::Kind::Keyword : Token::Kind::Ident,
                           std::move(word), line, start_col});
            continue;
        }
        if (std::string("&|~!(),;").find(c) != std::string::npos) {
            out.push_back({Token::Kind::Punct, std::string(1, c), line, col});
            ++i;
            ++col;
            continue;
        }
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({Token::Kind::End, "", line, col});
    return out;
}

class FormulaParser {
public:
    explicit FormulaParser(const std::string& text) : toks_(tokenize_formula(text)) {}

    Formula parse() {
        Formula f = parse_bor();
        if (!at_end()) fail("unexpected trailing input '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& advance() { return toks_[pos_++]; }

    bool match_punct(const std::string& p) {
        if (peek().kind == Token::Kind::Punct && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool match_keyword(const std::string& k) {
        if (peek().kind == Token::Kind::Keyword && peek().text == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!match_punct(p)) fail("expected '" + p + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError("line " + std::to_string(t.line) + ", column " + std::to_string(t.col) +
                         ": " + msg);
    }

    std::optional<FKind> binop_kind() const {
        if (peek().kind != Token::Kind::Keyword) return std::nullopt;
        const std::string& t = peek().text;
        if (t == "U") return FKind::Until;
        if (t == "W1") return FKind::WeakUntil1;
        if (t == "W2") return FKind::WeakUntil2;
        if (t == "R1") return FKind::Release1;
        if (t == "R2") return FKind::Release2;
        if (t == "M") return FKind::StrongRelease;
        if (t == "UE") return FKind::UntilE;
        if (t == "UA") return FKind::UntilA;
        if (t == "ME") return FKind::StrongReleaseE;
        return std::nullopt;
    }

    Formula parse_bor() {
        Formula f = parse_orx();
        while (match_keyword("or")) f = bor(std::move(f), parse_orx());
        return f;
    }

    Formula parse_orx() {
        Formula f = parse_andx();
        while (match_punct("|")) f = lor(std::move(f), parse_andx());
        return f;
    }

    Formula parse_andx() {
        Formula f = parse_binop();
        while (match_punct("&")) f = land(std::move(f), parse_binop());
        return f;
    }

    Formula parse_binop() {
        Formula l = parse_unary();
        if (auto k = binop_kind()) {
            advance();
            Formula r = parse_unary();
            if (binop_kind())
                fail("binary temporal operators do not chain; add parentheses");
            return binary(*k, std::move(l), std::move(r));
        }
        return l;
    }

    Formula parse_unary() {
        if (peek().kind == Token::Kind::Keyword) {
            const std::string& t = peek().text;
            FKind k;
            if (t == "X")
                k = FKind::Next;
            else if (t == "G")
                k = FKind::Globally;
            else if (t == "F")
                k = FKind::Finally;
            else if (t == "E")
                k = FKind::Exists;
            else if (t == "XE")
                k = FKind::NextE;
            else if (t == "XA")
                k = FKind::NextA;
            else if (t == "GE")
                k = FKind::GloballyE;
            else if (t == "GA")
                k = FKind::GloballyA;
            else
                return parse_atom();
            advance();
            return unary(k, parse_unary());
        }
        if (peek().kind == Token::Kind::Punct && peek().text == "~") {
            advance();
            return bneg(parse_unary());
        }
        return parse_atom();
    }

    Formula parse_atom() {
        if (match_punct("!")) {
            if (peek().kind != Token::Kind::Ident) fail("expected a proposition after '!'");
            return nprop(advance().text);
        }
        if (match_punct("(")) {
            Formula f = parse_bor();
            expect_punct(")");
            return f;
        }
        if (peek().kind == Token::Kind::Keyword) {
            if (match_keyword("top")) return top();
            if (match_keyword("bot")) return bot();
            if (match_keyword("dep")) {
                expect_punct("(");
                std::vector<Formula> args;
                args.push_back(parse_bor());
                while (match_punct(",")) args.push_back(parse_bor());
                expect_punct(")");
                return dep_atom(std::move(args));
            }
            if (match_keyword("inc")) {
                expect_punct("(");
                std::vector<Formula> lhs, rhs;
                lhs.push_back(parse_bor());
                while (match_punct(",")) lhs.push_back(parse_bor());
                expect_punct(";");
                rhs.push_back(parse_bor());
                while (match_punct(",")) rhs.push_back(parse_bor());
                expect_punct(")");
                if (lhs.size() != rhs.size())
                    fail("inc atom arity mismatch: " + std::to_string(lhs.size()) +
                         " vs " + std::to_string(rhs.size()));
                return inc_atom(std::move(lhs), std::move(rhs));
            }
            fail("unexpected keyword '" + peek().text + "'");
        }
        if (peek().kind == Token::Kind::Ident) return prop(advance().text);
        fail("expected a formula");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline const char* binop_symbol(FKind k) {
    switch (k) {
        case FKind::Until: return "U";
        case FKind::WeakUntil1: return "W1";
        case FKind::WeakUntil2: return "W2";
        case FKind::Release1: return "R1";
        case FKind::Release2: return "R2";
        case FKind::StrongRelease: return "M";
        case FKind::UntilE: return "UE";
        case FKind::UntilA: return "UA";
        case FKind::StrongReleaseE: return "ME";
        default: return nullptr;
    }
}

inline const char* unop_symbol(FKind k) {
    switch (k) {
        case FKind::Next: return "X";
        case FKind::Globally: return "G";
        case FKind::Finally: return "F";
        case FKind::Exists: return "E";
        case FKind::BNeg: return "~";
        case FKind::NextE: return "XE";
        case FKind::NextA: return "XA";
        case FKind::GloballyE: return "GE";
        case FKind::GloballyA: return "GA";
        default: return nullptr;
    }
}

// Precedence levels: or=1, |=2, &=3, binary temporal=4, unary=5, atoms=6.
inline std::string render_at(const Formula& f, int level) {
    auto wrap = [level](int own, std::string s) {
        return level > own ? "(" + std::move(s) + ")" : std::move(s);
    };
    switch (f->kind) {
        case FKind::Prop: return f->name;
        case FKind::NegProp: return "!" + f->name;
        case FKind::Top: return "top";
        case FKind::Bot: return "bot";
        case FKind::BOr:
            return wrap(1, render_at(f->left, 1) + " or " + render_at(f->right, 2));
        case FKind::Or:
            return wrap(2, render_at(f->left, 2) + " | " + render_at(f->right, 3));
        case FKind::And:
            return wrap(3, render_at(f->left, 3) + " & " + render_at(f->right, 4));
        case FKind::DepAtom: {
            std::string s = "dep(";
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) s += ", ";
                s += render_at(f->args[i], 1);
            }
            return s + ")";
        }
        case FKind::IncAtom: {
            std::string s = "inc(";
            for (std::size_t i = 0; i < f->args.size(); ++i) {
                if (i) s += ", ";
                s += render_at(f->args[i], 1);
            }
            s += " ; ";
            for (std::size_t i = 0; i < f->args2.size(); ++i) {
                if (i) s += ", ";
                s += render_at(f->args2[i], 1);
            }
            return s + ")";
        }
        default:
            if (const char* sym = binop_symbol(f->kind))
                return wrap(4, render_at(f->left, 5) + " " + sym + " " + render_at(f->right, 5));
            if (const char* sym = unop_symbol(f->kind))
                return sym + std::string(" ") + render_at(f->left, 5);
            throw FragmentViolation("render: unhandled node kind");
    }
}

} // namespace detail

inline Formula parse_formula(const std::string& text) {
    return detail::FormulaParser(text).parse();
}

inline std::string render(const Formula& f) { return detail::render_at(f, 1); }

} // namespace teamltl
