// SPDX-License-Identifier: Apache-2.0
//
// Tokenizer for the contract-language subset. Produces a flat token list
// with line/column spans; `uintN`/`intN` lex as type tokens carrying their
// signedness and bit width.
#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "adfga/diag.hpp"

namespace adfga {

enum class TokenKind {
    // keywords
    KwContract,
    KwFunction,
    KwReturns,
    KwRequire,
    KwIf,
    KwElse,
    KwWhile,
    KwFor,
    KwReturn,
    KwModifierWord,  // public/private/internal/external/view/pure/payable/constant (accepted, ignored)
    TypeName,        // uintN / intN; signedness+width in Token
    Identifier,
    Number,  // decimal literal
    // punctuation / operators
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semicolon,
    Comma,
    Assign,  // =
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    NotEq,
    AndAnd,
    OrOr,
    Not,
    EndOfFile,
};

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text;
    SourcePos pos;
    // TypeName payload
    bool type_signed = false;
    int type_width = 0;
};

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

// Classifies an identifier-shaped word. Returns a fully formed token (pos
// filled in by the caller).
inline Token classify_word(const std::string& word, SourcePos pos) {
    Token t;
    t.text = word;
    t.pos = pos;
    if (word == "contract") t.kind = TokenKind::KwContract;
    else if (word == "function") t.kind = TokenKind::KwFunction;
    else if (word == "returns") t.kind = TokenKind::KwReturns;
    else if (word == "require") t.kind = TokenKind::KwRequire;
    else if (word == "if") t.kind = TokenKind::KwIf;
    else if (word == "else") t.kind = TokenKind::KwElse;
    else if (word == "while") t.kind = TokenKind::KwWhile;
    else if (word == "for") t.kind = TokenKind::KwFor;
    else if (word == "return") t.kind = TokenKind::KwReturn;
    else if (word == "public" || word == "private" || word == "internal" || word == "external" ||
             word == "view" || word == "pure" || word == "payable" || word == "constant")
        t.kind = TokenKind::KwModifierWord;
    else {
        // uint / int / uintN / intN
        std::string base;
        if (word.rfind("uint", 0) == 0) base = "uint";
        else if (word.rfind("int", 0) == 0) base = "int";
        if (!base.empty()) {
            std::string suffix = word.substr(base.size());
            bool all_digits = !suffix.empty();
            for (char c : suffix)
                if (!std::isdigit(static_cast<unsigned char>(c))) all_digits = false;
            if (suffix.empty()) {
                t.kind = TokenKind::TypeName;
                t.type_signed = (base == "int");
                t.type_width = 256;
                return t;
            }
            if (all_digits) {
                int width = 0;
                for (char c : suffix) {
                    width = width * 10 + (c - '0');
                    if (width > 256) break;
                }
                if (width < 8 || width > 256 || width % 8 != 0)
                    throw LexError(pos, "invalid integer width in type '" + word +
                                            "' (want a multiple of 8 in [8,256])");
                t.kind = TokenKind::TypeName;
                t.type_signed = (base == "int");
                t.type_width = width;
                return t;
            }
        }
        t.kind = TokenKind::Identifier;
    }
    return t;
}

}  // namespace detail

inline std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    const size_t n = source.size();

    auto advance = [&](size_t count) {
        for (size_t k = 0; k < count && i < n; ++k, ++i) {
            if (source[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](TokenKind kind, const std::string& text, SourcePos pos) {
        Token t;
        t.kind = kind;
        t.text = text;
        t.pos = pos;
        out.push_back(t);
    };

    while (i < n) {
        char c = source[i];
        SourcePos pos{line, col};
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        // comments
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '*') {
            advance(2);
            bool closed = false;
            while (i < n) {
                if (source[i] == '*' && i + 1 < n && source[i + 1] == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) throw LexError(pos, "unterminated block comment");
            continue;
        }
        if (detail::is_ident_start(c)) {
            std::string word;
            while (i < n && detail::is_ident_char(source[i])) {
                word.push_back(source[i]);
                advance(1);
            }
            out.push_back(detail::classify_word(word, pos));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i < n && std::isdigit(static_cast<unsigned char>(source[i]))) {
                num.push_back(source[i]);
                advance(1);
            }
            if (i < n && detail::is_ident_start(source[i]))
                throw LexError({line, col}, "identifier may not start with a digit");
            push(TokenKind::Number, num, pos);
            continue;
        }
        switch (c) {
            case '(': push(TokenKind::LParen, "(", pos); advance(1); continue;
            case ')': push(TokenKind::RParen, ")", pos); advance(1); continue;
            case '{': push(TokenKind::LBrace, "{", pos); advance(1); continue;
            case '}': push(TokenKind::RBrace, "}", pos); advance(1); continue;
            case ';': push(TokenKind::Semicolon, ";", pos); advance(1); continue;
            case ',': push(TokenKind::Comma, ",", pos); advance(1); continue;
            case '+': push(TokenKind::Plus, "+", pos); advance(1); continue;
            case '-': push(TokenKind::Minus, "-", pos); advance(1); continue;
            case '*': push(TokenKind::Star, "*", pos); advance(1); continue;
            case '/': push(TokenKind::Slash, "/", pos); advance(1); continue;
            case '%': push(TokenKind::Percent, "%", pos); advance(1); continue;
            default: break;
        }
        auto two = [&](char second) { return i + 1 < n && source[i + 1] == second; };
        if (c == '<') {
            if (two('=')) { push(TokenKind::Le, "<=", pos); advance(2); }
            else { push(TokenKind::Lt, "<", pos); advance(1); }
            continue;
        }
        if (c == '>') {
            if (two('=')) { push(TokenKind::Ge, ">=", pos); advance(2); }
            else { push(TokenKind::Gt, ">", pos); advance(1); }
            continue;
        }
        if (c == '=') {
            if (two('=')) { push(TokenKind::EqEq, "==", pos); advance(2); }
            else { push(TokenKind::Assign, "=", pos); advance(1); }
            continue;
        }
        if (c == '!') {
            if (two('=')) { push(TokenKind::NotEq, "!=", pos); advance(2); }
            else { push(TokenKind::Not, "!", pos); advance(1); }
            continue;
        }
        if (c == '&' && two('&')) { push(TokenKind::AndAnd, "&&", pos); advance(2); continue; }
        if (c == '|' && two('|')) { push(TokenKind::OrOr, "||", pos); advance(2); continue; }
        throw LexError(pos, std::string("illegal character '") + c + "'");
    }
    Token eof;
    eof.kind = TokenKind::EndOfFile;
    eof.pos = {line, col};
    out.push_back(eof);
    return out;
}

}  // namespace adfga
