// SPDX-License-Identifier: Apache-2.0
//
// Recursive-descent parser. Calls are statements, never sub-expressions:
// `f(a);` and `x = f(a);` parse to CallStmt, anything like `f(a) + 1` is
// rejected with a dedicated message. `for` loops desugar to `while` here,
// before statement numbering.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "adfga/ast.hpp"
#include "adfga/token.hpp"

namespace adfga {

namespace detail {

class Parser {
  public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    SourceUnit parse_unit(std::string source_name) {
        SourceUnit unit;
        unit.source_name = std::move(source_name);
        while (!check(TokenKind::EndOfFile)) unit.contracts.push_back(parse_contract());
        if (unit.contracts.empty())
            throw ParseError(peek().pos, "expected at least one 'contract' declaration");
        number_statements(unit);
        return unit;
    }

  private:
    const std::vector<Token>& toks_;
    size_t pos_ = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool check(TokenKind k) const { return peek().kind == k; }
    bool match(TokenKind k) {
        if (!check(k)) return false;
        advance();
        return true;
    }
    const Token& expect(TokenKind k, const std::string& what) {
        if (!check(k))
            throw ParseError(peek().pos, "expected " + what + ", found '" +
                                             (peek().kind == TokenKind::EndOfFile ? "<eof>" : peek().text) + "'");
        return *&advance();
    }

    IntType expect_type() {
        const Token& t = expect(TokenKind::TypeName, "a type name like 'uint16'");
        return IntType{t.type_signed, t.type_width};
    }

    ContractDef parse_contract() {
        ContractDef c;
        c.pos = peek().pos;
        expect(TokenKind::KwContract, "'contract'");
        c.name = expect(TokenKind::Identifier, "a contract name").text;
        expect(TokenKind::LBrace, "'{'");
        while (!check(TokenKind::RBrace)) {
            if (check(TokenKind::KwFunction)) {
                c.functions.push_back(parse_function());
            } else if (check(TokenKind::TypeName)) {
                VarDecl v;
                v.pos = peek().pos;
                v.type = expect_type();
                v.name = expect(TokenKind::Identifier, "a state variable name").text;
                if (check(TokenKind::Assign))
                    throw ParseError(peek().pos, "state variables may not carry initializers");
                expect(TokenKind::Semicolon, "';'");
                c.state_vars.push_back(std::move(v));
            } else {
                throw ParseError(peek().pos, "expected a function or state variable declaration");
            }
        }
        expect(TokenKind::RBrace, "'}'");
        return c;
    }

    FunctionDef parse_function() {
        FunctionDef fn;
        fn.pos = peek().pos;
        expect(TokenKind::KwFunction, "'function'");
        fn.name = expect(TokenKind::Identifier, "a function name").text;
        expect(TokenKind::LParen, "'('");
        if (!check(TokenKind::RParen)) {
            do {
                VarDecl p;
                p.pos = peek().pos;
                p.type = expect_type();
                p.name = expect(TokenKind::Identifier, "a parameter name").text;
                fn.params.push_back(std::move(p));
            } while (match(TokenKind::Comma));
        }
        expect(TokenKind::RParen, "')'");
        while (match(TokenKind::KwModifierWord)) {
        }
        if (match(TokenKind::KwReturns)) {
            expect(TokenKind::LParen, "'('");
            fn.returns = expect_type();
            expect(TokenKind::RParen, "')'");
        }
        expect(TokenKind::LBrace, "'{'");
        parse_statements_until_rbrace(fn.body);
        expect(TokenKind::RBrace, "'}'");
        return fn;
    }

    void parse_statements_until_rbrace(StmtList& out) {
        while (!check(TokenKind::RBrace) && !check(TokenKind::EndOfFile)) parse_statement(out);
    }

    // Parses one source statement; may append more than one AST statement
    // (for-loop desugaring).
    void parse_statement(StmtList& out) {
        SourcePos pos = peek().pos;
        if (check(TokenKind::TypeName)) {
            out.push_back(parse_decl());
            return;
        }
        if (match(TokenKind::KwRequire)) {
            expect(TokenKind::LParen, "'('");
            RequireStmt r{parse_expr()};
            expect(TokenKind::RParen, "')'");
            expect(TokenKind::Semicolon, "';'");
            out.push_back(make_stmt(pos, std::move(r)));
            return;
        }
        if (match(TokenKind::KwIf)) {
            expect(TokenKind::LParen, "'('");
            IfStmt s;
            s.cond = parse_expr();
            expect(TokenKind::RParen, "')'");
            parse_body(s.then_body);
            if (match(TokenKind::KwElse)) parse_body(s.else_body);
            out.push_back(make_stmt(pos, std::move(s)));
            return;
        }
        if (match(TokenKind::KwWhile)) {
            expect(TokenKind::LParen, "'('");
            WhileStmt s;
            s.cond = parse_expr();
            expect(TokenKind::RParen, "')'");
            parse_body(s.body);
            out.push_back(make_stmt(pos, std::move(s)));
            return;
        }
        if (check(TokenKind::KwFor)) {
            parse_for(out);
            return;
        }
        if (match(TokenKind::KwReturn)) {
            ReturnStmt r;
            if (!check(TokenKind::Semicolon)) r.value = parse_expr();
            expect(TokenKind::Semicolon, "';'");
            out.push_back(make_stmt(pos, std::move(r)));
            return;
        }
        if (check(TokenKind::Identifier)) {
            out.push_back(parse_assign_or_call());
            return;
        }
        throw ParseError(pos, "expected a statement, found '" + peek().text + "'");
    }

    StmtPtr parse_decl() {
        SourcePos pos = peek().pos;
        DeclStmt d;
        d.decl.pos = pos;
        d.decl.type = expect_type();
        d.decl.name = expect(TokenKind::Identifier, "a variable name").text;
        if (match(TokenKind::Assign)) d.init = parse_expr();
        expect(TokenKind::Semicolon, "';'");
        return make_stmt(pos, std::move(d));
    }

    StmtPtr parse_assign_or_call() {
        SourcePos pos = peek().pos;
        std::string name = advance().text;
        if (match(TokenKind::LParen)) {  // bare call
            CallStmt c;
            c.callee = name;
            parse_call_args(c.args);
            expect(TokenKind::Semicolon, "';'");
            return make_stmt(pos, std::move(c));
        }
        expect(TokenKind::Assign, "'=' or '('");
        // `x = f(...);` is a call with a result target, not an expression
        if (check(TokenKind::Identifier) && peek(1).kind == TokenKind::LParen) {
            CallStmt c;
            c.callee = advance().text;
            advance();  // '('
            parse_call_args(c.args);
            if (!check(TokenKind::Semicolon))
                throw ParseError(peek().pos, "calls cannot appear inside expressions");
            advance();
            c.target = name;
            return make_stmt(pos, std::move(c));
        }
        AssignStmt a;
        a.target = name;
        a.value = parse_expr();
        expect(TokenKind::Semicolon, "';'");
        return make_stmt(pos, std::move(a));
    }

    void parse_call_args(std::vector<ExprPtr>& args) {
        if (!check(TokenKind::RParen)) {
            do args.push_back(parse_expr());
            while (match(TokenKind::Comma));
        }
        expect(TokenKind::RParen, "')'");
    }

    // for (init; cond; post) body  =>  init; while (cond) { body...; post; }
    void parse_for(StmtList& out) {
        SourcePos pos = peek().pos;
        advance();  // 'for'
        expect(TokenKind::LParen, "'('");
        if (!check(TokenKind::Semicolon)) {
            if (check(TokenKind::TypeName)) {
                // decl consumes its own ';'
                StmtList init;
                DeclStmt d;
                d.decl.pos = peek().pos;
                d.decl.type = expect_type();
                d.decl.name = expect(TokenKind::Identifier, "a variable name").text;
                if (match(TokenKind::Assign)) d.init = parse_expr();
                expect(TokenKind::Semicolon, "';'");
                out.push_back(make_stmt(d.decl.pos, std::move(d)));
            } else {
                out.push_back(parse_simple_assign());
                expect(TokenKind::Semicolon, "';'");
            }
        } else {
            advance();
        }
        WhileStmt loop;
        loop.cond = parse_expr();
        expect(TokenKind::Semicolon, "';'");
        StmtPtr post;
        if (!check(TokenKind::RParen)) post = parse_simple_assign();
        expect(TokenKind::RParen, "')'");
        parse_body(loop.body);
        if (post) loop.body.push_back(std::move(post));
        out.push_back(make_stmt(pos, std::move(loop)));
    }

    StmtPtr parse_simple_assign() {
        SourcePos pos = peek().pos;
        AssignStmt a;
        a.target = expect(TokenKind::Identifier, "an assignment").text;
        expect(TokenKind::Assign, "'='");
        a.value = parse_expr();
        return make_stmt(pos, std::move(a));
    }

    void parse_body(StmtList& out) {
        if (match(TokenKind::LBrace)) {
            parse_statements_until_rbrace(out);
            expect(TokenKind::RBrace, "'}'");
        } else {
            parse_statement(out);
        }
    }

    // ---- expressions ----

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (check(TokenKind::OrOr)) {
            SourcePos pos = advance().pos;
            lhs = make_binary(pos, BinOp::Or, std::move(lhs), parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_cmp();
        while (check(TokenKind::AndAnd)) {
            SourcePos pos = advance().pos;
            lhs = make_binary(pos, BinOp::And, std::move(lhs), parse_cmp());
        }
        return lhs;
    }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_add();
        BinOp op;
        switch (peek().kind) {
            case TokenKind::Lt: op = BinOp::Lt; break;
            case TokenKind::Le: op = BinOp::Le; break;
            case TokenKind::Gt: op = BinOp::Gt; break;
            case TokenKind::Ge: op = BinOp::Ge; break;
            case TokenKind::EqEq: op = BinOp::Eq; break;
            case TokenKind::NotEq: op = BinOp::Ne; break;
            default: return lhs;
        }
        SourcePos pos = advance().pos;
        return make_binary(pos, op, std::move(lhs), parse_add());
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
            BinOp op = check(TokenKind::Plus) ? BinOp::Add : BinOp::Sub;
            SourcePos pos = advance().pos;
            lhs = make_binary(pos, op, std::move(lhs), parse_mul());
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (check(TokenKind::Star) || check(TokenKind::Slash) || check(TokenKind::Percent)) {
            BinOp op = check(TokenKind::Star) ? BinOp::Mul
                       : check(TokenKind::Slash) ? BinOp::Div
                                                 : BinOp::Rem;
            SourcePos pos = advance().pos;
            lhs = make_binary(pos, op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (check(TokenKind::Minus)) {
            SourcePos pos = advance().pos;
            auto e = std::make_unique<Expr>();
            e->pos = pos;
            e->node = UnaryExpr{UnOp::Neg, parse_unary()};
            return e;
        }
        if (check(TokenKind::Not)) {
            SourcePos pos = advance().pos;
            auto e = std::make_unique<Expr>();
            e->pos = pos;
            e->node = UnaryExpr{UnOp::Not, parse_unary()};
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        SourcePos pos = peek().pos;
        if (check(TokenKind::Number)) {
            auto e = std::make_unique<Expr>();
            e->pos = pos;
            e->node = IntLiteral{parse_decimal(advance().text, pos)};
            return e;
        }
        if (check(TokenKind::TypeName)) {  // cast: uint32(expr)
            IntType target = expect_type();
            expect(TokenKind::LParen, "'(' after cast type");
            auto e = std::make_unique<Expr>();
            e->pos = pos;
            e->node = CastExpr{target, parse_expr()};
            expect(TokenKind::RParen, "')'");
            return e;
        }
        if (check(TokenKind::Identifier)) {
            if (peek(1).kind == TokenKind::LParen)
                throw ParseError(pos, "calls cannot appear inside expressions");
            auto e = std::make_unique<Expr>();
            e->pos = pos;
            e->node = VarRef{advance().text};
            return e;
        }
        if (match(TokenKind::LParen)) {
            ExprPtr inner = parse_expr();
            expect(TokenKind::RParen, "')'");
            return inner;
        }
        throw ParseError(pos, "expected an expression, found '" +
                                  (peek().kind == TokenKind::EndOfFile ? "<eof>" : peek().text) + "'");
    }

    template <typename Node>
    static StmtPtr make_stmt(SourcePos pos, Node&& node) {
        auto s = std::make_unique<Stmt>();
        s->pos = pos;
        s->node = std::forward<Node>(node);
        return s;
    }

    static ExprPtr make_binary(SourcePos pos, BinOp op, ExprPtr lhs, ExprPtr rhs) {
        auto e = std::make_unique<Expr>();
        e->pos = pos;
        e->node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
        return e;
    }
};

}  // namespace detail

inline SourceUnit parse_source(const std::vector<Token>& tokens, std::string source_name = "<input>") {
    return detail::Parser(tokens).parse_unit(std::move(source_name));
}

}  // namespace adfga
