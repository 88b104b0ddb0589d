// SPDX-License-Identifier: Apache-2.0
//
// Canonical source rendering. Used for the require-site text, CFG node
// labels, and the parse -> print -> parse stability property.
#pragma once

#include <sstream>
#include <string>

#include "adfga/ast.hpp"

namespace adfga {

namespace detail {

inline int precedence(BinOp op) {
    switch (op) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge:
        case BinOp::Eq:
        case BinOp::Ne: return 3;
        case BinOp::Add:
        case BinOp::Sub: return 4;
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Rem: return 5;
    }
    return 0;
}

inline void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    if (const auto* lit = std::get_if<IntLiteral>(&e.node)) {
        os << lit->value.str();
    } else if (const auto* v = std::get_if<VarRef>(&e.node)) {
        os << v->name;
    } else if (const auto* c = std::get_if<CastExpr>(&e.node)) {
        os << c->target.name() << '(';
        print_expr(os, *c->arg, 0);
        os << ')';
    } else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
        int prec = precedence(b->op);
        bool parens = prec < parent_prec;
        if (parens) os << '(';
        print_expr(os, *b->lhs, prec);
        os << ' ' << binop_text(b->op) << ' ';
        // right operand needs parens at equal precedence (left-assoc chains)
        print_expr(os, *b->rhs, prec + 1);
        if (parens) os << ')';
    } else if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
        os << (u->op == UnOp::Neg ? '-' : '!');
        print_expr(os, *u->operand, 6);
    }
}

}  // namespace detail

inline std::string pretty_expr(const Expr& e) {
    std::ostringstream os;
    detail::print_expr(os, e, 0);
    return os.str();
}

// One-line view of a statement head (bodies elided) for CFG labels.
inline std::string stmt_head_text(const Stmt& s) {
    std::ostringstream os;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, DeclStmt>) {
                os << node.decl.type.name() << ' ' << node.decl.name;
                if (node.init) os << " = " << pretty_expr(*node.init);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                os << node.target << " = " << pretty_expr(*node.value);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                os << "if (" << pretty_expr(*node.cond) << ")";
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                os << "while (" << pretty_expr(*node.cond) << ")";
            } else if constexpr (std::is_same_v<T, RequireStmt>) {
                os << "require(" << pretty_expr(*node.cond) << ")";
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                os << "return";
                if (node.value) os << ' ' << pretty_expr(*node.value);
            } else if constexpr (std::is_same_v<T, CallStmt>) {
                if (node.target) os << *node.target << " = ";
                os << node.callee << '(';
                for (size_t i = 0; i < node.args.size(); ++i) {
                    if (i) os << ", ";
                    os << pretty_expr(*node.args[i]);
                }
                os << ')';
            }
        },
        s.node);
    return os.str();
}

inline std::string function_signature_text(const FunctionDef& fn) {
    std::ostringstream os;
    os << "function " << fn.name << '(';
    for (size_t i = 0; i < fn.params.size(); ++i) {
        if (i) os << ", ";
        os << fn.params[i].type.name() << ' ' << fn.params[i].name;
    }
    os << ')';
    return os.str();
}

namespace detail {

inline void print_block(std::ostream& os, const StmtList& body, int indent);

inline void print_stmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    if (const auto* i = std::get_if<IfStmt>(&s.node)) {
        os << pad << "if (" << pretty_expr(*i->cond) << ") {\n";
        print_block(os, i->then_body, indent + 1);
        os << pad << "}";
        if (!i->else_body.empty()) {
            os << " else {\n";
            print_block(os, i->else_body, indent + 1);
            os << pad << "}";
        }
        os << '\n';
    } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
        os << pad << "while (" << pretty_expr(*w->cond) << ") {\n";
        print_block(os, w->body, indent + 1);
        os << pad << "}\n";
    } else {
        os << pad << stmt_head_text(s) << ";\n";
    }
}

inline void print_block(std::ostream& os, const StmtList& body, int indent) {
    for (const auto& s : body) print_stmt(os, *s, indent);
}

}  // namespace detail

inline std::string pretty_print(const SourceUnit& unit) {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : unit.contracts) {
        if (!first) os << '\n';
        first = false;
        os << "contract " << c.name << " {\n";
        for (const auto& sv : c.state_vars) os << "    " << sv.type.name() << ' ' << sv.name << ";\n";
        for (const auto& fn : c.functions) {
            os << "    " << function_signature_text(fn);
            if (fn.returns) os << " returns (" << fn.returns->name() << ")";
            os << " {\n";
            detail::print_block(os, fn.body, 2);
            os << "    }\n";
        }
        os << "}\n";
    }
    return os.str();
}

}  // namespace adfga
