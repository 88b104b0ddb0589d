// SPDX-License-Identifier: Apache-2.0
//
// Name and type resolution.
//
// Scoping follows 0.4.x-era Solidity: a local declaration is visible through
// the whole function body regardless of where it appears, so an assignment
// may textually precede its declaration statement. Redeclaring a name that
// is already a parameter, state variable or local (shadowing included) is a
// TypeError. Width changes always need an explicit cast; decimal literals
// adopt the type their context demands, defaulting to uint256.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adfga/ast.hpp"
#include "adfga/pretty.hpp"

namespace adfga {

namespace detail {

inline bool literal_fits(const U256& value, IntType t) {
    if (t.is_signed) {
        if (t.width_bits == 0) return false;
        U256 max = (U256(1) << (t.width_bits - 1)) - 1;
        return value <= max;
    }
    return (value & ~width_mask(t.width_bits)) == 0;
}

// True when the expression's type is unconstrained until context fixes it
// (no variable references or casts anywhere inside).
inline bool is_literal_shaped(const Expr& e) {
    if (std::holds_alternative<IntLiteral>(e.node)) return true;
    if (const auto* b = std::get_if<BinaryExpr>(&e.node))
        return is_literal_shaped(*b->lhs) && is_literal_shaped(*b->rhs);
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) return is_literal_shaped(*u->operand);
    return false;
}

class FunctionChecker {
  public:
    FunctionChecker(const ContractDef& contract, FunctionDef& fn,
                    const std::map<std::string, IntType>& visible)
        : contract_(contract), fn_(fn), visible_(visible) {}

    void run() { check_block(fn_.body); }

  private:
    const ContractDef& contract_;
    FunctionDef& fn_;
    const std::map<std::string, IntType>& visible_;

    IntType lookup(const std::string& name, SourcePos pos) const {
        auto it = visible_.find(name);
        if (it == visible_.end())
            throw TypeError(pos, "use of undeclared identifier '" + name + "'");
        return it->second;
    }

    ExprType infer(Expr& e, std::optional<ExprType> expected) {
        ExprType result = infer_node(e, expected);
        e.type = result;
        return result;
    }

    ExprType infer_node(Expr& e, const std::optional<ExprType>& expected) {
        if (auto* lit = std::get_if<IntLiteral>(&e.node)) {
            IntType t{false, 256};
            if (expected) {
                if (expected->is_bool)
                    throw TypeError(e.pos, "integer literal used where a boolean is expected");
                t = expected->int_type;
            }
            if (!literal_fits(lit->value, t))
                throw TypeError(e.pos, "literal " + lit->value.str() + " does not fit in " + t.name());
            return ExprType::integer(t);
        }
        if (const auto* v = std::get_if<VarRef>(&e.node)) {
            ExprType t = ExprType::integer(lookup(v->name, e.pos));
            require_match(e.pos, expected, t);
            return t;
        }
        if (auto* c = std::get_if<CastExpr>(&e.node)) {
            ExprType inner = infer(*c->arg, std::nullopt);
            if (inner.is_bool) throw TypeError(e.pos, "cannot cast a boolean to an integer type");
            ExprType t = ExprType::integer(c->target);
            require_match(e.pos, expected, t);
            return t;
        }
        if (auto* u = std::get_if<UnaryExpr>(&e.node)) {
            if (u->op == UnOp::Not) {
                if (expected && !expected->is_bool)
                    throw TypeError(e.pos, "'!' yields a boolean, but " + expected->name() + " is expected");
                ExprType inner = infer(*u->operand, ExprType::boolean());
                (void)inner;
                return ExprType::boolean();
            }
            if (expected && expected->is_bool)
                throw TypeError(e.pos, "unary '-' yields an integer where a boolean is expected");
            ExprType inner = infer(*u->operand, expected);
            if (inner.is_bool) throw TypeError(e.pos, "unary '-' requires an integer operand");
            return inner;
        }
        auto* b = std::get_if<BinaryExpr>(&e.node);
        if (is_logical(b->op)) {
            if (expected && !expected->is_bool)
                throw TypeError(e.pos, "logical operator yields a boolean, but " + expected->name() +
                                           " is expected");
            infer(*b->lhs, ExprType::boolean());
            infer(*b->rhs, ExprType::boolean());
            return ExprType::boolean();
        }
        if (is_comparison(b->op)) {
            if (expected && !expected->is_bool)
                throw TypeError(e.pos, "comparison yields a boolean, but " + expected->name() +
                                           " is expected");
            ExprType t = infer_operand_pair(*b->lhs, *b->rhs, std::nullopt, e.pos);
            if (t.is_bool) throw TypeError(e.pos, "comparison requires integer operands");
            return ExprType::boolean();
        }
        // arithmetic
        if (expected && expected->is_bool)
            throw TypeError(e.pos, "arithmetic yields an integer where a boolean is expected");
        ExprType t = infer_operand_pair(*b->lhs, *b->rhs, expected, e.pos);
        if (t.is_bool) throw TypeError(e.pos, "arithmetic requires integer operands");
        return t;
    }

    // Sides of a binary operator must agree exactly; literal-shaped sides
    // adopt the other side's type before the check.
    ExprType infer_operand_pair(Expr& lhs, Expr& rhs, const std::optional<ExprType>& hint, SourcePos pos) {
        ExprType t;
        if (is_literal_shaped(lhs) && !is_literal_shaped(rhs)) {
            t = infer(rhs, hint);
            infer(lhs, t);
        } else {
            t = infer(lhs, hint);
            infer(rhs, t);
        }
        (void)pos;
        return t;
    }

    static void require_match(SourcePos pos, const std::optional<ExprType>& expected, const ExprType& got) {
        if (expected && !(*expected == got))
            throw TypeError(pos, "expected " + expected->name() + ", found " + got.name() +
                                     " (insert an explicit cast)");
    }

    const FunctionDef* find_callee(const std::string& name) const {
        for (const auto& f : contract_.functions)
            if (f.name == name) return &f;
        return nullptr;
    }

    void check_block(StmtList& body) {
        for (auto& s : body) check_stmt(*s);
    }

    void check_stmt(Stmt& s) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, DeclStmt>) {
                    if (node.init) infer(*node.init, ExprType::integer(node.decl.type));
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    IntType t = lookup(node.target, s.pos);
                    infer(*node.value, ExprType::integer(t));
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    infer(*node.cond, ExprType::boolean());
                    check_block(node.then_body);
                    check_block(node.else_body);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    infer(*node.cond, ExprType::boolean());
                    check_block(node.body);
                } else if constexpr (std::is_same_v<T, RequireStmt>) {
                    infer(*node.cond, ExprType::boolean());
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (fn_.returns) {
                        if (!node.value)
                            throw TypeError(s.pos, "function '" + fn_.name +
                                                       "' declares a return type; 'return;' needs a value");
                        infer(*node.value, ExprType::integer(*fn_.returns));
                    } else if (node.value) {
                        throw TypeError(s.pos, "function '" + fn_.name + "' returns nothing");
                    }
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    const FunctionDef* callee = find_callee(node.callee);
                    if (!callee)
                        throw TypeError(s.pos, "call to unknown function '" + node.callee + "'");
                    if (callee->params.size() != node.args.size())
                        throw TypeError(s.pos, "call-arity mismatch: '" + node.callee + "' takes " +
                                                   std::to_string(callee->params.size()) + " argument(s), got " +
                                                   std::to_string(node.args.size()));
                    for (size_t i = 0; i < node.args.size(); ++i)
                        infer(*node.args[i], ExprType::integer(callee->params[i].type));
                    if (node.target) {
                        IntType t = lookup(*node.target, s.pos);
                        if (!callee->returns)
                            throw TypeError(s.pos, "function '" + node.callee + "' returns nothing");
                        if (!(*callee->returns == t))
                            throw TypeError(s.pos, "cannot assign " + callee->returns->name() + " result to " +
                                                       t.name() + " '" + *node.target + "'");
                    }
                }
            },
            s.node);
    }
};

}  // namespace detail

// Visible variables of a function: parameters, function-scoped locals, and
// the owning contract's state variables.
inline std::map<std::string, IntType> function_scope_types(const ContractDef& contract, const FunctionDef& fn) {
    std::map<std::string, IntType> visible;
    auto declare = [&](const VarDecl& d, const char* what) {
        if (!visible.emplace(d.name, d.type).second)
            throw TypeError(d.pos, std::string("redeclaration of ") + what + " '" + d.name +
                                       "' (shadowing is not allowed)");
    };
    for (const auto& sv : contract.state_vars) declare(sv, "state variable");
    for (const auto& p : fn.params) declare(p, "parameter");
    for_each_stmt(fn.body, [&](const Stmt& s) {
        if (const auto* d = std::get_if<DeclStmt>(&s.node)) declare(d->decl, "variable");
    });
    return visible;
}

// Validates the unit and annotates every expression with its type.
inline void resolve_types(SourceUnit& unit) {
    std::set<std::string> contract_names;
    for (auto& contract : unit.contracts) {
        if (!contract_names.insert(contract.name).second)
            throw TypeError(contract.pos, "duplicate contract name '" + contract.name + "'");
        std::set<std::string> state_names;
        for (const auto& sv : contract.state_vars)
            if (!state_names.insert(sv.name).second)
                throw TypeError(sv.pos, "duplicate state variable '" + sv.name + "' in contract '" +
                                            contract.name + "'");
        std::set<std::string> fn_names;
        for (auto& fn : contract.functions) {
            if (!fn_names.insert(fn.name).second)
                throw TypeError(fn.pos, "duplicate function name '" + fn.name + "' in contract '" +
                                            contract.name + "'");
        }
        for (auto& fn : contract.functions) {
            auto visible = function_scope_types(contract, fn);
            detail::FunctionChecker(contract, fn, visible).run();
        }
    }
}

// ---------------------------------------------------------------------------
// Resolved-unit index shared by cfg/dataflow/interp
// ---------------------------------------------------------------------------

struct FunctionScope {
    const ContractDef* contract = nullptr;
    const FunctionDef* function = nullptr;
    std::string display_name;  // bare name, or Contract.name when ambiguous
    std::map<std::string, IntType> var_types;
    std::vector<const VarDecl*> locals_in_order;  // by declaration statement id
    std::vector<const Stmt*> stmt_by_id;          // [2..max]; [0],[1] are null

    const Stmt* stmt(StatementId id) const {
        if (id < 0 || static_cast<size_t>(id) >= stmt_by_id.size()) return nullptr;
        return stmt_by_id[static_cast<size_t>(id)];
    }
    // State variables the function reads somewhere; they are treated as
    // defined at the parameter-binding node.
    std::set<std::string> entry_defined_state() const {
        std::set<std::string> state_names;
        for (const auto& sv : contract->state_vars) state_names.insert(sv.name);
        std::set<std::string> read;
        for_each_stmt(function->body, [&](const Stmt& s) {
            for_each_use(s, [&](const std::string& name) {
                if (state_names.count(name)) read.insert(name);
            });
        });
        return read;
    }
};

class UnitIndex {
  public:
    explicit UnitIndex(const SourceUnit& unit) : unit_(&unit) {
        std::map<std::string, int> bare_counts;
        for (const auto& c : unit.contracts)
            for (const auto& f : c.functions) ++bare_counts[f.name];
        for (const auto& c : unit.contracts) {
            for (const auto& f : c.functions) {
                FunctionScope scope;
                scope.contract = &c;
                scope.function = &f;
                scope.display_name = bare_counts[f.name] > 1 ? c.name + "." + f.name : f.name;
                scope.var_types = function_scope_types(c, f);
                scope.stmt_by_id.assign(static_cast<size_t>(f.max_stmt_id) + 1, nullptr);
                for_each_stmt(f.body, [&](const Stmt& s) {
                    scope.stmt_by_id[static_cast<size_t>(s.id)] = &s;
                    if (const auto* d = std::get_if<DeclStmt>(&s.node))
                        scope.locals_in_order.push_back(&d->decl);
                });
                order_.push_back(scope.display_name);
                scopes_.emplace(scope.display_name, std::move(scope));
            }
        }
    }

    const SourceUnit& unit() const { return *unit_; }
    const std::vector<std::string>& function_order() const { return order_; }

    const FunctionScope* find(const std::string& name) const {
        auto it = scopes_.find(name);
        if (it != scopes_.end()) return &it->second;
        // accept Contract.name even when the bare name is unique
        for (const auto& [key, scope] : scopes_) {
            (void)key;
            if (scope.contract->name + "." + scope.function->name == name) return &scope;
        }
        return nullptr;
    }

    const FunctionScope& at(const std::string& name) const {
        const FunctionScope* s = find(name);
        if (!s) throw SetupError("unknown function '" + name + "'");
        return *s;
    }

    // Display name of a callee from inside `caller` (same contract).
    std::string callee_display_name(const FunctionScope& caller, const std::string& callee) const {
        for (const auto& f : caller.contract->functions)
            if (f.name == callee)
                return scopes_.count(callee) ? callee : caller.contract->name + "." + callee;
        return callee;
    }

  private:
    const SourceUnit* unit_;
    std::vector<std::string> order_;
    std::map<std::string, FunctionScope> scopes_;
};

}  // namespace adfga
