//
// Copyright (c) 2026-present rodeo contributors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
// DEALINGS IN THE SOFTWARE.
//
#include "rodeo/parser.hpp"

#include <cctype>
#include <vector>

namespace rodeo {

namespace {

enum class Tok : uint8_t {
    Ident,
    Variable,
    Integer,
    Not,
    If,      // :-
    Weak,    // :~
    Dot,
    Comma,
    LParen,
    RParen,
    CmpOp,
    End
};

struct Token {
    Tok type = Tok::End;
    std::string text;
    long long value = 0;
    Cmp cmp = Cmp::Eq;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string_view name) : text_(text), name_(name) {}

    Token next() {
        skipSpace();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) { return t; }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits += take();
            }
            t.type = Tok::Integer;
            try {
                t.value = std::stoll(digits);
            } catch (const std::out_of_range&) {
                fail(t, "integer constant out of range");
            }
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                word += take();
            }
            if (word == "not") {
                t.type = Tok::Not;
            } else {
                t.type = std::isupper(static_cast<unsigned char>(word[0])) || word[0] == '_'
                             ? Tok::Variable
                             : Tok::Ident;
                t.text = std::move(word);
            }
            return t;
        }
        switch (c) {
            case '.': take(); t.type = Tok::Dot; return t;
            case ',': take(); t.type = Tok::Comma; return t;
            case '(': take(); t.type = Tok::LParen; return t;
            case ')': take(); t.type = Tok::RParen; return t;
            case ':':
                take();
                if (pos_ < text_.size() && text_[pos_] == '-') {
                    take();
                    t.type = Tok::If;
                    return t;
                }
                if (pos_ < text_.size() && text_[pos_] == '~') {
                    take();
                    t.type = Tok::Weak;
                    return t;
                }
                fail(t, "expected ':-' or ':~'");
            case '=': take(); t.type = Tok::CmpOp; t.cmp = Cmp::Eq; return t;
            case '!':
                take();
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    take();
                    t.type = Tok::CmpOp;
                    t.cmp = Cmp::Ne;
                    return t;
                }
                fail(t, "expected '!='");
            case '<':
                take();
                t.type = Tok::CmpOp;
                t.cmp = Cmp::Lt;
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    take();
                    t.cmp = Cmp::Le;
                }
                return t;
            case '>':
                take();
                t.type = Tok::CmpOp;
                t.cmp = Cmp::Gt;
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    take();
                    t.cmp = Cmp::Ge;
                }
                return t;
            default: break;
        }
        fail(t, std::string("unexpected character '") + c + "'");
    }

    [[noreturn]] void fail(const Token& at, const std::string& msg) const {
        throwError(Error::Kind::Parse, std::string(name_) + ":" + std::to_string(at.line) + ":" +
                                           std::to_string(at.col) + ": " + msg);
    }

private:
    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skipSpace() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') { take(); }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::string_view name_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::string_view text, std::string_view name) : lex_(text, name) { advance(); }

    std::vector<Rule> statements() {
        std::vector<Rule> rules;
        while (cur_.type != Tok::End) { rules.push_back(statement()); }
        return rules;
    }

    Rule statement() {
        Rule r;
        if (cur_.type == Tok::Weak) {
            advance();
            r.weak = true;
            r.body = body();
        } else {
            r.head = head();
            if (cur_.type == Tok::If) {
                advance();
                r.body = body();
            }
        }
        expect(Tok::Dot, "expected '.'");
        return r;
    }

private:
    void advance() {
        if (peeked_) {
            cur_ = peek_;
            peeked_ = false;
        } else {
            cur_ = lex_.next();
        }
    }

    void expect(Tok t, const char* msg) {
        if (cur_.type != t) { lex_.fail(cur_, msg); }
        advance();
    }

    bool startsAtom() const { return cur_.type == Tok::Ident; }

    std::vector<Atom> head() {
        std::vector<Atom> atoms;
        atoms.push_back(headAtom());
        // 'v' doubles as an identifier; it separates head atoms only when
        // another atom follows.
        while (cur_.type == Tok::Ident && cur_.text == "v" && peekStartsAtom()) {
            advance();
            atoms.push_back(headAtom());
        }
        return atoms;
    }

    Atom headAtom() {
        if (cur_.type == Tok::Variable || cur_.type == Tok::Integer) {
            lex_.fail(cur_, "rule head must be an atom");
        }
        Atom a = atom();
        if (cur_.type == Tok::CmpOp) { lex_.fail(cur_, "comparison builtin in rule head"); }
        return a;
    }

    bool peekStartsAtom() {
        // Single-token lookahead past a candidate separator 'v'.
        if (!peeked_) {
            peek_ = lex_.next();
            peeked_ = true;
        }
        return peek_.type == Tok::Ident;
    }

    std::vector<BodyLiteral> body() {
        std::vector<BodyLiteral> lits;
        lits.push_back(bodyLiteral());
        while (cur_.type == Tok::Comma) {
            advance();
            lits.push_back(bodyLiteral());
        }
        return lits;
    }

    BodyLiteral bodyLiteral() {
        if (cur_.type == Tok::Not) {
            advance();
            if (!startsAtom()) { lex_.fail(cur_, "expected atom after 'not'"); }
            Atom a = atom();
            if (cur_.type == Tok::CmpOp) { lex_.fail(cur_, "negated builtin"); }
            return BodyLiteral::neg(std::move(a));
        }
        if (cur_.type == Tok::Variable || cur_.type == Tok::Integer) {
            Term l = term();
            if (cur_.type != Tok::CmpOp) { lex_.fail(cur_, "expected comparison operator"); }
            Cmp op = cur_.cmp;
            advance();
            return BodyLiteral::builtin(op, std::move(l), term());
        }
        if (!startsAtom()) { lex_.fail(cur_, "expected body literal"); }
        // An identifier may begin an atom or the left side of a comparison.
        Token id = cur_;
        advance();
        if (cur_.type == Tok::CmpOp) {
            Cmp op = cur_.cmp;
            advance();
            return BodyLiteral::builtin(op, Term::constant(id.text), term());
        }
        return BodyLiteral::pos(atomTail(id));
    }

    Atom atom() {
        if (!startsAtom()) { lex_.fail(cur_, "expected atom"); }
        Token id = cur_;
        advance();
        return atomTail(id);
    }

    Atom atomTail(const Token& id) {
        Atom a;
        a.pred = id.text;
        if (cur_.type == Tok::LParen) {
            advance();
            a.args.push_back(term());
            while (cur_.type == Tok::Comma) {
                advance();
                a.args.push_back(term());
            }
            expect(Tok::RParen, "expected ')'");
        }
        return a;
    }

    Term term() {
        Term t;
        switch (cur_.type) {
            case Tok::Ident: t = Term::constant(cur_.text); break;
            case Tok::Variable: t = Term::variable(cur_.text); break;
            case Tok::Integer: t = Term::integer(cur_.value); break;
            default: lex_.fail(cur_, "expected term");
        }
        advance();
        return t;
    }

    Lexer lex_;
    Token cur_;
    Token peek_;
    bool peeked_ = false;
};

}  // namespace

Program parseProgram(std::string_view text, std::string_view name) {
    Parser p(text, name);
    return Program(p.statements());
}

Rule parseRule(std::string_view text, std::string_view name) {
    Parser p(text, name);
    auto rules = p.statements();
    if (rules.size() != 1) {
        throwError(Error::Kind::Parse, std::string(name) + ": expected exactly one statement");
    }
    return rules.front();
}

std::string serialize(const Program& p) {
    std::string out;
    for (const auto& r : p.rules()) {
        out += r.str();
        out += '\n';
    }
    return out;
}

}  // namespace rodeo
