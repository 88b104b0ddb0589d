// SPDX-License-Identifier: Apache-2.0
//
// Independent test oracles. These re-derive results from first principles
// (path enumeration, trace replay) and never go through the reaching-defs
// fixpoint or the interpreter's recording machinery they are checking.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "adfga/cfg.hpp"
#include "adfga/interp.hpp"

namespace testutil {

// --------------------------------------------------------------------------
// Bounded-path def-use oracle: enumerate every intra-procedural CFG path
// from Start that traverses no edge more than `edge_cap` times (>= 2 covers
// zero, one and two iterations of each loop), tracking the live definition
// per variable and collecting (v, def, use) on the way.
// --------------------------------------------------------------------------

inline std::set<adfga::PairKey> bounded_path_pairs(const adfga::Cfg& cfg, const adfga::FunctionScope& scope,
                                                   int edge_cap = 2) {
    using adfga::EdgeLabel;
    const std::string& fn = scope.display_name;
    std::set<adfga::PairKey> pairs;
    std::map<const adfga::CfgEdge*, int> edge_count;

    auto defs_at = [&](int id) {
        std::vector<std::string> defs;
        if (id == adfga::kParamNodeId) {
            for (const auto& p : scope.function->params) defs.push_back(p.name);
            for (const auto& sv : scope.entry_defined_state()) defs.push_back(sv);
            return defs;
        }
        const adfga::Stmt* s = scope.stmt(id);
        if (s)
            if (auto d = adfga::defined_var(*s)) defs.push_back(*d);
        return defs;
    };
    auto uses_at = [&](int id) {
        std::vector<std::string> uses;
        if (id == adfga::kParamNodeId) return uses;
        const adfga::Stmt* s = scope.stmt(id);
        if (s) adfga::for_each_use(*s, [&](const std::string& v) { uses.push_back(v); });
        return uses;
    };

    std::map<std::string, int> live_def;
    auto walk = [&](auto&& self, adfga::NodeRef cur) -> void {
        const adfga::CfgNode* node = cfg.node(cur);
        std::map<std::string, int> saved;
        bool is_stmt = node->kind == adfga::CfgNodeKind::Stmt;
        if (is_stmt) {
            for (const auto& v : uses_at(cur.id)) {
                auto it = live_def.find(v);
                if (it != live_def.end()) pairs.insert({fn, v, it->second, cur.id});
            }
            saved = live_def;
            for (const auto& v : defs_at(cur.id)) live_def[v] = cur.id;
        }
        if (node->kind != adfga::CfgNodeKind::End) {
            for (const adfga::CfgEdge* e : cfg.out_edges(cur)) {
                if (e->label == EdgeLabel::Call || e->label == EdgeLabel::Return) continue;
                if (e->head.function != fn) continue;
                int& count = edge_count[e];
                if (count >= edge_cap) continue;
                ++count;
                self(self, e->head);
                --count;
            }
        }
        if (is_stmt) live_def = std::move(saved);
    };
    walk(walk, cfg.start_of(fn));
    return pairs;
}

inline std::set<adfga::PairKey> bounded_path_pairs_all(const adfga::Cfg& cfg, const adfga::UnitIndex& index,
                                                       int edge_cap = 2) {
    std::set<adfga::PairKey> pairs;
    for (const auto& fname : index.function_order()) {
        auto fp = bounded_path_pairs(cfg, index.at(fname), edge_cap);
        pairs.insert(fp.begin(), fp.end());
    }
    return pairs;
}

// --------------------------------------------------------------------------
// Trace-replay coverage oracle: recompute the covered pair set from the
// executed node list alone (plus the program text), applying the def-use
// rules independently of the interpreter's recording path.
// --------------------------------------------------------------------------

struct ReplayResult {
    std::set<adfga::PairKey> covered;
    adfga::NodeRef last_node;
};

inline ReplayResult replay_trace(const std::vector<adfga::NodeRef>& trace, const adfga::UnitIndex& index,
                                 const adfga::DupSets& dups) {
    std::set<adfga::PairKey> universe;
    for (const auto& p : dups.all) universe.insert(adfga::key_of(p));

    struct RFrame {
        const adfga::FunctionScope* scope;
        std::map<std::string, std::pair<int, unsigned long>> last_def;
        adfga::NodeRef call_node;
    };
    std::map<std::string, unsigned long> state_version;  // contract-qualified keys
    for (const auto& c : index.unit().contracts)
        for (const auto& sv : c.state_vars) state_version[c.name + "." + sv.name] = 0;
    auto state_key = [](const adfga::FunctionScope& scope, const std::string& name) -> std::string {
        for (const auto& sv : scope.contract->state_vars)
            if (sv.name == name) return scope.contract->name + "." + name;
        return {};
    };

    ReplayResult result;
    std::vector<RFrame> stack;
    adfga::NodeRef prev;
    bool have_prev = false;

    for (const auto& ref : trace) {
        result.last_node = ref;
        const adfga::FunctionScope& scope = index.at(ref.function);
        int end_id = scope.function->max_stmt_id + 1;

        if (ref.id == 0) {  // Start: entry frame or a call push
            RFrame f{&scope, {}, {}};
            if (have_prev) f.call_node = prev;
            stack.push_back(std::move(f));
        } else if (!stack.empty() && stack.back().scope->display_name != ref.function) {
            // returned from a callee End to the caller's post-call node
            adfga::NodeRef call_node = stack.back().call_node;
            stack.pop_back();
            auto& caller = stack.back();
            const adfga::Stmt* call_stmt = caller.scope->stmt(call_node.id);
            const auto* call = std::get_if<adfga::CallStmt>(&call_stmt->node);
            if (call && call->target) {
                std::string key = state_key(*caller.scope, *call->target);
                if (!key.empty()) {
                    unsigned long version = ++state_version[key];
                    caller.last_def[*call->target] = {call_node.id, version};
                } else {
                    caller.last_def[*call->target] = {call_node.id, 0};
                }
            }
        }

        if (ref.id == 0 || ref.id == end_id) {
            prev = ref;
            have_prev = true;
            continue;
        }

        RFrame& frame = stack.back();
        if (ref.id == adfga::kParamNodeId) {
            for (const auto& p : scope.function->params) frame.last_def[p.name] = {adfga::kParamNodeId, 0};
            for (const auto& sv : scope.entry_defined_state())
                frame.last_def[sv] = {adfga::kParamNodeId, state_version.at(state_key(scope, sv))};
        } else {
            const adfga::Stmt* s = scope.stmt(ref.id);
            adfga::for_each_use(*s, [&](const std::string& v) {
                auto it = frame.last_def.find(v);
                if (it == frame.last_def.end()) return;
                std::string key = state_key(scope, v);
                if (!key.empty() && it->second.second != state_version.at(key)) return;
                adfga::PairKey pair{ref.function, v, it->second.first, ref.id};
                if (universe.count(pair)) result.covered.insert(pair);
            });
            // calls define their target only when the callee returns (above)
            if (!std::holds_alternative<adfga::CallStmt>(s->node)) {
                if (auto d = adfga::defined_var(*s)) {
                    std::string key = state_key(scope, *d);
                    if (!key.empty()) {
                        unsigned long version = ++state_version[key];
                        frame.last_def[*d] = {ref.id, version};
                    } else {
                        frame.last_def[*d] = {ref.id, 0};
                    }
                }
            }
        }
        prev = ref;
        have_prev = true;
    }
    return result;
}

// Asserts interpreter coverage against the replay oracle. Exact equality for
// clean runs; a fault's final node may carry uses the interpreter skipped.
inline void check_against_replay(const adfga::CoverageRecord& rec, const adfga::UnitIndex& index,
                                 const adfga::DupSets& dups) {
    ReplayResult oracle = replay_trace(rec.executed_nodes, index, dups);
    if (rec.terminated_by.kind != adfga::Termination::Kind::Fault) {
        REQUIRE(rec.covered == oracle.covered);
        return;
    }
    for (const auto& k : rec.covered) REQUIRE(oracle.covered.count(k) == 1);
    for (const auto& k : oracle.covered)
        if (!rec.covered.count(k))
            REQUIRE((k.function == rec.terminated_by.node.function && k.use_node == rec.terminated_by.node.id));
}

}  // namespace testutil
