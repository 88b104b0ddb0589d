// SPDX-License-Identifier: Apache-2.0
//
// Typed AST for the contract-language subset.
//
// Statement numbering: within each function, statement id 1 is reserved for
// the parameter-binding node (the signature); body statements are numbered
// 2..k in pre-order over the (desugared) statement tree. `for` loops are
// desugared to `while` before numbering, so ids always match the CFG.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adfga/value.hpp"

namespace adfga {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class BinOp { Add, Sub, Mul, Div, Rem, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not };

inline bool is_comparison(BinOp op) {
    return op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge ||
           op == BinOp::Eq || op == BinOp::Ne;
}
inline bool is_logical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

inline const char* binop_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Rem: return "%";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

// Expression result type: an integer type or boolean.
struct ExprType {
    bool is_bool = false;
    IntType int_type;  // meaningful when !is_bool

    static ExprType boolean() { return ExprType{true, {}}; }
    static ExprType integer(IntType t) { return ExprType{false, t}; }

    friend bool operator==(const ExprType&, const ExprType&) = default;

    std::string name() const { return is_bool ? "bool" : int_type.name(); }
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct IntLiteral {
    U256 value;
};
struct VarRef {
    std::string name;
};
struct CastExpr {
    IntType target;
    ExprPtr arg;
};
struct BinaryExpr {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct UnaryExpr {
    UnOp op;
    ExprPtr operand;
};

struct Expr {
    std::variant<IntLiteral, VarRef, CastExpr, BinaryExpr, UnaryExpr> node;
    SourcePos pos;
    std::optional<ExprType> type;  // filled by resolve_types
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

using StatementId = int;
constexpr StatementId kParamNodeId = 1;

struct VarDecl {
    std::string name;
    IntType type;
    SourcePos pos;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using StmtList = std::vector<StmtPtr>;

struct DeclStmt {  // `uint16 x;` or `uint16 x = init;` — a definition only with init
    VarDecl decl;
    ExprPtr init;  // may be null
};
struct AssignStmt {
    std::string target;
    ExprPtr value;
};
struct IfStmt {
    ExprPtr cond;
    StmtList then_body;
    StmtList else_body;
};
struct WhileStmt {
    ExprPtr cond;
    StmtList body;
};
struct RequireStmt {
    ExprPtr cond;
};
struct ReturnStmt {
    ExprPtr value;  // may be null (bare return)
};
struct CallStmt {  // `f(a, b);` or `x = f(a, b);`
    std::string callee;
    std::vector<ExprPtr> args;
    std::optional<std::string> target;
};

struct Stmt {
    StatementId id = 0;  // assigned by number_statements
    SourcePos pos;
    std::variant<DeclStmt, AssignStmt, IfStmt, WhileStmt, RequireStmt, ReturnStmt, CallStmt> node;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct FunctionDef {
    std::string name;
    std::vector<VarDecl> params;
    std::optional<IntType> returns;
    StmtList body;
    SourcePos pos;
    StatementId max_stmt_id = kParamNodeId;  // highest id in the function (>= 1)
};

struct ContractDef {
    std::string name;
    std::vector<VarDecl> state_vars;  // like locals, never initialized at declaration
    std::vector<FunctionDef> functions;
    SourcePos pos;
};

struct SourceUnit {
    std::string source_name;
    std::vector<ContractDef> contracts;
};

// ---------------------------------------------------------------------------
// Traversal helpers
// ---------------------------------------------------------------------------

template <typename Fn>
void for_each_stmt(const StmtList& body, Fn&& fn) {
    for (const auto& s : body) {
        fn(*s);
        if (const auto* i = std::get_if<IfStmt>(&s->node)) {
            for_each_stmt(i->then_body, fn);
            for_each_stmt(i->else_body, fn);
        } else if (const auto* w = std::get_if<WhileStmt>(&s->node)) {
            for_each_stmt(w->body, fn);
        }
    }
}

template <typename Fn>
void for_each_var_ref(const Expr& e, Fn&& fn) {
    if (const auto* v = std::get_if<VarRef>(&e.node)) {
        fn(*v);
    } else if (const auto* c = std::get_if<CastExpr>(&e.node)) {
        for_each_var_ref(*c->arg, fn);
    } else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
        for_each_var_ref(*b->lhs, fn);
        for_each_var_ref(*b->rhs, fn);
    } else if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
        for_each_var_ref(*u->operand, fn);
    }
}

// Applies fn to every expression directly attached to a statement (not
// recursing into nested statements).
template <typename Fn>
void for_each_stmt_expr(const Stmt& s, Fn&& fn) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, DeclStmt>) {
                if (node.init) fn(*node.init);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                fn(*node.value);
            } else if constexpr (std::is_same_v<T, IfStmt> || std::is_same_v<T, WhileStmt> ||
                                 std::is_same_v<T, RequireStmt>) {
                fn(*node.cond);
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                if (node.value) fn(*node.value);
            } else if constexpr (std::is_same_v<T, CallStmt>) {
                for (const auto& a : node.args) fn(*a);
            }
        },
        s.node);
}

// Variables read by a statement's own expressions (predicate, RHS, args...).
// The assignment/call target is a definition, not a use.
template <typename Fn>
void for_each_use(const Stmt& s, Fn&& fn) {
    for_each_stmt_expr(s, [&](const Expr& e) { for_each_var_ref(e, [&](const VarRef& v) { fn(v.name); }); });
}

// The variable defined by this statement, if any. Bare declarations define
// nothing; declarations with an initializer, assignments and call-result
// assignments define their target.
inline std::optional<std::string> defined_var(const Stmt& s) {
    if (const auto* d = std::get_if<DeclStmt>(&s.node)) {
        if (d->init) return d->decl.name;
        return std::nullopt;
    }
    if (const auto* a = std::get_if<AssignStmt>(&s.node)) return a->target;
    if (const auto* c = std::get_if<CallStmt>(&s.node)) return c->target;
    return std::nullopt;
}

// Assigns pre-order statement ids (2..k) within each function and records the
// maximum. Id 1 stays reserved for the parameter-binding node.
inline void number_statements(SourceUnit& unit) {
    for (auto& contract : unit.contracts) {
        for (auto& fn : contract.functions) {
            StatementId next = kParamNodeId + 1;
            auto walk = [&](auto&& self, StmtList& body) -> void {
                for (auto& s : body) {
                    s->id = next++;
                    if (auto* i = std::get_if<IfStmt>(&s->node)) {
                        self(self, i->then_body);
                        self(self, i->else_body);
                    } else if (auto* w = std::get_if<WhileStmt>(&s->node)) {
                        self(self, w->body);
                    }
                }
            };
            walk(walk, fn.body);
            fn.max_stmt_id = next - 1;
        }
    }
}

// Deep copy (unique_ptr trees are move-only by default).
inline ExprPtr clone_expr(const Expr& e) {
    auto out = std::make_unique<Expr>();
    out->pos = e.pos;
    out->type = e.type;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, IntLiteral> || std::is_same_v<T, VarRef>) {
                out->node = node;
            } else if constexpr (std::is_same_v<T, CastExpr>) {
                out->node = CastExpr{node.target, clone_expr(*node.arg)};
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                out->node = BinaryExpr{node.op, clone_expr(*node.lhs), clone_expr(*node.rhs)};
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                out->node = UnaryExpr{node.op, clone_expr(*node.operand)};
            }
        },
        e.node);
    return out;
}

}  // namespace adfga
