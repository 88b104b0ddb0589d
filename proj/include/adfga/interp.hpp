// SPDX-License-Identifier: Apache-2.0
//
// Instrumented execution of one function on concrete inputs, recording which
// def-use pairs the run covers.
//
// Semantics notes:
//  - Fixed-width wrapping arithmetic (pre-0.8 Solidity); no overflow traps.
//  - A failing require records its own predicate uses, follows the CondFalse
//    arc to the function's End node, and aborts the whole run (revert).
//  - Coverage is node-granular: when a statement node completes, every use
//    in it is recorded, even if && / || short-circuited the evaluation of
//    some operand. Only a mid-expression fault (division by zero) leaves
//    just the uses evaluated up to the fault.
//  - Calls execute the callee inline with a fresh frame. State variables
//    live in contract storage (zero-initialized per run); a write in any
//    frame invalidates other frames' pending definitions of that variable,
//    so a pair is only covered when no write intervenes anywhere in the
//    trace. Locals read before any assignment evaluate to zero and produce
//    no pair (their declaration is not a definition).
//  - Division/modulo by zero, the step limit, and the call-depth cap (64)
//    terminate the run as a Fault; coverage gathered so far stands.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "adfga/dataflow.hpp"

namespace adfga {

struct TestCase {
    std::vector<Value> values;  // one per entry-function parameter
};

struct Termination {
    enum class Kind { NormalEnd, RequireFailed, Fault };
    Kind kind = Kind::NormalEnd;
    NodeRef node;        // failing require / faulting node
    std::string reason;  // fault description

    friend bool operator==(const Termination&, const Termination&) = default;
};

struct CoverageRecord {
    std::set<PairKey> covered;
    Termination terminated_by;
    std::vector<NodeRef> executed_nodes;  // Start/statement/End nodes in execution order
    long steps = 0;                       // statement-node executions
};

// Internal signal for runtime faults (div by zero etc.); the interpreter
// converts it into Termination::Kind::Fault.
struct EvalFault {
    std::string reason;
};

using EvalResult = std::variant<Value, bool>;

namespace detail {

struct Frame {
    const FunctionScope* scope = nullptr;
    std::map<std::string, Value> env;  // locals + params
    // pending definition per variable: (def node, storage version at bind time)
    std::map<std::string, std::pair<int, unsigned long>> last_def;
    std::vector<Value> args;
    std::optional<Value> return_value;
    NodeRef call_site;  // meaningful for non-entry frames
    const CallStmt* call = nullptr;
};

class Machine {
  public:
    Machine(const Cfg& cfg, const UnitIndex& index, const DupSets& dups)
        : cfg_(cfg), index_(index) {
        for (const auto& p : dups.all) universe_.insert(key_of(p));
        // storage slots are contract-qualified so same-named state variables
        // in different contracts stay distinct
        for (const auto& c : index.unit().contracts)
            for (const auto& sv : c.state_vars) {
                storage_.emplace(c.name + "." + sv.name, make_value(sv.type, 0));
                storage_version_.emplace(c.name + "." + sv.name, 0);
            }
    }

    CoverageRecord run(const std::string& entry, const TestCase& tc, long step_limit) {
        const FunctionScope& scope = index_.at(entry);
        if (tc.values.size() != scope.function->params.size())
            throw SetupError("test case has " + std::to_string(tc.values.size()) + " value(s); function '" +
                             entry + "' takes " + std::to_string(scope.function->params.size()));
        for (size_t i = 0; i < tc.values.size(); ++i)
            if (!(tc.values[i].type == scope.function->params[i].type))
                throw SetupError("test case value " + std::to_string(i + 1) + " has type " +
                                 tc.values[i].type.name() + "; parameter '" + scope.function->params[i].name +
                                 "' is " + scope.function->params[i].type.name());

        frames_.clear();
        frames_.push_back(Frame{&scope, {}, {}, tc.values, std::nullopt, {}, nullptr});
        record_ = CoverageRecord{};
        step_limit_ = step_limit;

        NodeRef cur = cfg_.start_of(entry);
        try {
            while (true) {
                record_.executed_nodes.push_back(cur);
                const CfgNode* node = cfg_.node(cur);
                if (node->kind == CfgNodeKind::Start) {
                    cur = cfg_.out_edge(cur, EdgeLabel::FallThrough)->head;
                    continue;
                }
                if (node->kind == CfgNodeKind::End) {
                    if (aborting_) {
                        return finish();
                    }
                    if (frames_.size() == 1) {
                        record_.terminated_by = {Termination::Kind::NormalEnd, {}, {}};
                        return finish();
                    }
                    cur = pop_frame();
                    continue;
                }
                if (++record_.steps > step_limit_)
                    throw EvalFault{"step limit of " + std::to_string(step_limit_) + " exceeded"};
                cur = exec_stmt(cur);
            }
        } catch (const EvalFault& f) {
            record_.terminated_by = {Termination::Kind::Fault, cur_node_, f.reason};
            return finish();
        }
    }

  private:
    const Cfg& cfg_;
    const UnitIndex& index_;
    std::set<PairKey> universe_;
    std::map<std::string, Value> storage_;
    std::map<std::string, unsigned long> storage_version_;
    std::vector<Frame> frames_;
    CoverageRecord record_;
    long step_limit_ = 0;
    NodeRef cur_node_;
    bool aborting_ = false;

    CoverageRecord finish() { return std::move(record_); }

    Frame& top() { return frames_.back(); }

    // storage key for `name` seen from `frame`, empty when it is not a
    // state variable of the frame's contract
    static std::string state_key(const Frame& frame, const std::string& name) {
        for (const auto& sv : frame.scope->contract->state_vars)
            if (sv.name == name) return frame.scope->contract->name + "." + name;
        return {};
    }

    // Executes the statement node and returns the next node.
    NodeRef exec_stmt(const NodeRef& ref) {
        cur_node_ = ref;
        Frame& frame = top();

        if (ref.id == kParamNodeId) {
            const auto& params = frame.scope->function->params;
            for (size_t i = 0; i < params.size(); ++i) {
                frame.env[params[i].name] = frame.args[i];
                frame.last_def[params[i].name] = {kParamNodeId, 0};
            }
            for (const auto& sv : frame.scope->entry_defined_state())
                frame.last_def[sv] = {kParamNodeId, storage_version_.at(state_key(frame, sv))};
            return cfg_.out_edge(ref, EdgeLabel::FallThrough)->head;
        }

        const Stmt* s = frame.scope->stmt(ref.id);
        NodeRef next;
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, DeclStmt>) {
                    if (node.init) {
                        Value v = as_value(eval(*node.init));
                        record_all_uses(*s);
                        define(frame, node.decl.name, v, ref.id);
                    }
                    next = cfg_.out_edge(ref, EdgeLabel::FallThrough)->head;
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    Value v = as_value(eval(*node.value));
                    record_all_uses(*s);
                    define(frame, node.target, v, ref.id);
                    next = cfg_.out_edge(ref, EdgeLabel::FallThrough)->head;
                } else if constexpr (std::is_same_v<T, IfStmt> || std::is_same_v<T, WhileStmt>) {
                    bool b = as_bool(eval(*node.cond));
                    record_all_uses(*s);
                    next = cfg_.out_edge(ref, b ? EdgeLabel::CondTrue : EdgeLabel::CondFalse)->head;
                } else if constexpr (std::is_same_v<T, RequireStmt>) {
                    bool b = as_bool(eval(*node.cond));
                    record_all_uses(*s);
                    if (b) {
                        next = cfg_.out_edge(ref, EdgeLabel::CondTrue)->head;
                    } else {
                        record_.terminated_by = {Termination::Kind::RequireFailed, ref, {}};
                        aborting_ = true;
                        next = cfg_.out_edge(ref, EdgeLabel::CondFalse)->head;  // function End
                    }
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (node.value) frame.return_value = as_value(eval(*node.value));
                    record_all_uses(*s);
                    next = cfg_.out_edge(ref, EdgeLabel::FallThrough)->head;  // End
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    std::vector<Value> args;
                    args.reserve(node.args.size());
                    for (const auto& a : node.args) args.push_back(as_value(eval(*a)));
                    record_all_uses(*s);
                    if (frames_.size() >= 64) throw EvalFault{"call depth limit of 64 exceeded"};
                    std::string callee = index_.callee_display_name(*frame.scope, node.callee);
                    Frame f;
                    f.scope = &index_.at(callee);
                    f.args = std::move(args);
                    f.call_site = ref;
                    f.call = &node;
                    frames_.push_back(std::move(f));
                    next = cfg_.start_of(callee);
                }
            },
            s->node);
        return next;
    }

    // Node-level use recording once a statement completes (catches operands
    // an && / || skipped during evaluation).
    void record_all_uses(const Stmt& s) {
        for_each_use(s, [&](const std::string& name) { record_use(name); });
    }

    // Callee End reached: deliver the result and resume after the call site.
    NodeRef pop_frame() {
        Frame done = std::move(frames_.back());
        frames_.pop_back();
        NodeRef call_site = done.call_site;
        Frame& caller = top();
        if (done.call->target) {
            Value result = done.return_value
                               ? *done.return_value
                               : make_value(*done.scope->function->returns, 0);  // fell off the end
            define(caller, *done.call->target, result, call_site.id);
        }
        return cfg_.out_edge(call_site, EdgeLabel::FallThrough)->head;
    }

    void define(Frame& frame, const std::string& name, Value v, int node_id) {
        std::string key = state_key(frame, name);
        if (!key.empty()) {
            storage_[key] = v;
            unsigned long version = ++storage_version_[key];
            frame.last_def[name] = {node_id, version};
        } else {
            frame.env[name] = v;
            frame.last_def[name] = {node_id, 0};
        }
    }

    void record_use(const std::string& name) {
        Frame& frame = top();
        auto it = frame.last_def.find(name);
        if (it == frame.last_def.end()) return;  // no definition executed yet
        std::string key = state_key(frame, name);
        if (!key.empty() && it->second.second != storage_version_.at(key))
            return;  // another frame redefined the state variable in between
        PairKey pair{frame.scope->display_name, name, it->second.first, cur_node_.id};
        if (universe_.count(pair)) record_.covered.insert(pair);
    }

    Value read_var(const std::string& name) {
        Frame& frame = top();
        record_use(name);
        auto it = frame.env.find(name);
        if (it != frame.env.end()) return it->second;
        std::string key = state_key(frame, name);
        if (!key.empty()) return storage_.at(key);
        // declared local, never assigned on this path: zero of its type
        return make_value(frame.scope->var_types.at(name), 0);
    }

    static Value as_value(EvalResult r) { return std::get<Value>(std::move(r)); }
    static bool as_bool(EvalResult r) { return std::get<bool>(r); }

    EvalResult eval(const Expr& e) {
        if (const auto* lit = std::get_if<IntLiteral>(&e.node))
            return make_value(e.type->int_type, lit->value);
        if (const auto* v = std::get_if<VarRef>(&e.node)) return read_var(v->name);
        if (const auto* c = std::get_if<CastExpr>(&e.node)) {
            Value inner = as_value(eval(*c->arg));
            return arith::cast(inner, c->target);
        }
        if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
            if (u->op == UnOp::Not) return !as_bool(eval(*u->operand));
            return arith::neg(as_value(eval(*u->operand)));
        }
        const auto* b = std::get_if<BinaryExpr>(&e.node);
        if (b->op == BinOp::And) {
            if (!as_bool(eval(*b->lhs))) return false;
            return as_bool(eval(*b->rhs));
        }
        if (b->op == BinOp::Or) {
            if (as_bool(eval(*b->lhs))) return true;
            return as_bool(eval(*b->rhs));
        }
        Value lhs = as_value(eval(*b->lhs));
        Value rhs = as_value(eval(*b->rhs));
        switch (b->op) {
            case BinOp::Add: return arith::add(lhs, rhs);
            case BinOp::Sub: return arith::sub(lhs, rhs);
            case BinOp::Mul: return arith::mul(lhs, rhs);
            case BinOp::Div:
                if (rhs.bits == 0) throw EvalFault{"division by zero"};
                return arith::div(lhs, rhs);
            case BinOp::Rem:
                if (rhs.bits == 0) throw EvalFault{"modulo by zero"};
                return arith::rem(lhs, rhs);
            case BinOp::Lt: return arith::lt(lhs, rhs);
            case BinOp::Le: return !arith::lt(rhs, lhs);
            case BinOp::Gt: return arith::lt(rhs, lhs);
            case BinOp::Ge: return !arith::lt(lhs, rhs);
            case BinOp::Eq: return arith::eq(lhs, rhs);
            case BinOp::Ne: return !arith::eq(lhs, rhs);
            default: break;
        }
        throw EvalFault{"unreachable operator"};
    }
};

}  // namespace detail

// Prebuilds the pair universe once; reuse across many executions.
class Interpreter {
  public:
    Interpreter(const Cfg& cfg, const UnitIndex& index, const DupSets& dups)
        : cfg_(&cfg), index_(&index), dups_(&dups) {}

    CoverageRecord run(const std::string& entry, const TestCase& tc, long step_limit = 100000) const {
        detail::Machine m(*cfg_, *index_, *dups_);
        return m.run(entry, tc, step_limit);
    }

  private:
    const Cfg* cfg_;
    const UnitIndex* index_;
    const DupSets* dups_;
};

inline CoverageRecord execute_function(const Cfg& cfg, const UnitIndex& index, const std::string& entry,
                                       const TestCase& tc, const DupSets& dups, long step_limit = 100000) {
    return Interpreter(cfg, index, dups).run(entry, tc, step_limit);
}

// Standalone expression evaluation over an explicit environment. The
// expression must be type-annotated (resolve_types); faults throw EvalFault.
inline EvalResult eval_expression(const Expr& e, const std::map<std::string, Value>& env) {
    if (const auto* lit = std::get_if<IntLiteral>(&e.node)) return make_value(e.type->int_type, lit->value);
    if (const auto* v = std::get_if<VarRef>(&e.node)) return env.at(v->name);
    if (const auto* c = std::get_if<CastExpr>(&e.node))
        return arith::cast(std::get<Value>(eval_expression(*c->arg, env)), c->target);
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
        if (u->op == UnOp::Not) return !std::get<bool>(eval_expression(*u->operand, env));
        return arith::neg(std::get<Value>(eval_expression(*u->operand, env)));
    }
    const auto* b = std::get_if<BinaryExpr>(&e.node);
    if (b->op == BinOp::And)
        return std::get<bool>(eval_expression(*b->lhs, env)) && std::get<bool>(eval_expression(*b->rhs, env));
    if (b->op == BinOp::Or)
        return std::get<bool>(eval_expression(*b->lhs, env)) || std::get<bool>(eval_expression(*b->rhs, env));
    Value lhs = std::get<Value>(eval_expression(*b->lhs, env));
    Value rhs = std::get<Value>(eval_expression(*b->rhs, env));
    switch (b->op) {
        case BinOp::Add: return arith::add(lhs, rhs);
        case BinOp::Sub: return arith::sub(lhs, rhs);
        case BinOp::Mul: return arith::mul(lhs, rhs);
        case BinOp::Div:
            if (rhs.bits == 0) throw EvalFault{"division by zero"};
            return arith::div(lhs, rhs);
        case BinOp::Rem:
            if (rhs.bits == 0) throw EvalFault{"modulo by zero"};
            return arith::rem(lhs, rhs);
        case BinOp::Lt: return arith::lt(lhs, rhs);
        case BinOp::Le: return !arith::lt(rhs, lhs);
        case BinOp::Gt: return arith::lt(rhs, lhs);
        case BinOp::Ge: return !arith::lt(lhs, rhs);
        case BinOp::Eq: return arith::eq(lhs, rhs);
        case BinOp::Ne: return !arith::eq(lhs, rhs);
        default: break;
    }
    throw EvalFault{"unreachable operator"};
}

}  // namespace adfga
