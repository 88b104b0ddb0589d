// SPDX-License-Identifier: Apache-2.0
//
// All-uses test-target extraction: the variable table, require-site list,
// and the def-use pair sets (all pairs plus the require-related subset).
//
// Pairs come from a classic reaching-definitions fixpoint over each
// function's sub-CFG (call/return arcs are ignored; the analysis is
// intraprocedural). Definitions are the parameter-binding node (parameters
// and any state variables the function reads), initialized declarations,
// assignments, and call-result assignments. Uses are every variable
// reference in a statement's own expressions, predicate uses included. A
// statement like `v = v + 1` uses the prior reaching definitions of v and
// then kills them.
//
// A pair is require-related when its use node is itself a require statement
// or is reachable from Start only through some require's CondTrue arc.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adfga/cfg.hpp"

namespace adfga {

struct VariableInfo {
    std::string name;
    int type_flag = 0;  // 0 = uint, 1 = int
    int width_bits = 0;
    std::string owning_function;  // contract name for state variables
    bool is_parameter = false;

    friend bool operator==(const VariableInfo&, const VariableInfo&) = default;
};

struct RequireSite {
    std::string function;
    int node_id = 0;
    std::string condition_text;  // "require(<cond>)"

    friend bool operator==(const RequireSite&, const RequireSite&) = default;
};

struct DefUsePair {
    std::string function;
    std::string variable;
    int def_node = 0;
    int use_node = 0;
    bool require_related = false;

    friend bool operator==(const DefUsePair& a, const DefUsePair& b) {
        return a.function == b.function && a.variable == b.variable && a.def_node == b.def_node &&
               a.use_node == b.use_node;
    }
};

// Order-comparable pair identity (ignores the require_related flag); used
// for coverage sets.
struct PairKey {
    std::string function;
    std::string variable;
    int def_node = 0;
    int use_node = 0;

    friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

inline PairKey key_of(const DefUsePair& p) { return {p.function, p.variable, p.def_node, p.use_node}; }

// Definition that never reaches a use (reported informationally, no pair).
struct UnusedDef {
    std::string function;
    std::string variable;
    int def_node = 0;

    friend bool operator==(const UnusedDef&, const UnusedDef&) = default;
};

struct DupSets {
    std::vector<DefUsePair> all;  // canonical order; require_related flags set by classify_rdups
    std::vector<UnusedDef> unused_defs;

    size_t total() const { return all.size(); }
    size_t require_related_count() const {
        size_t m = 0;
        for (const auto& p : all) m += p.require_related ? 1 : 0;
        return m;
    }
};

// ---------------------------------------------------------------------------
// Variable table
// ---------------------------------------------------------------------------

// One row per declared variable: per contract, state variables first, then
// each function's parameters followed by its locals in declaration order.
inline std::vector<VariableInfo> extract_variables(const UnitIndex& index) {
    std::vector<VariableInfo> rows;
    for (const auto& contract : index.unit().contracts) {
        for (const auto& sv : contract.state_vars)
            rows.push_back({sv.name, sv.type.is_signed ? 1 : 0, sv.type.width_bits, contract.name, false});
    }
    for (const auto& fname : index.function_order()) {
        const FunctionScope& scope = index.at(fname);
        for (const auto& p : scope.function->params)
            rows.push_back({p.name, p.type.is_signed ? 1 : 0, p.type.width_bits, fname, true});
        for (const VarDecl* d : scope.locals_in_order)
            rows.push_back({d->name, d->type.is_signed ? 1 : 0, d->type.width_bits, fname, false});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Require recognition
// ---------------------------------------------------------------------------

inline std::vector<RequireSite> find_requires(const Cfg& cfg) {
    std::vector<RequireSite> sites;
    for (const auto& fname : cfg.index->function_order()) {
        const FunctionScope& scope = cfg.index->at(fname);
        for (const CfgNode& n : cfg.nodes) {
            if (n.ref.function != fname || n.kind != CfgNodeKind::Stmt) continue;
            const Stmt* s = scope.stmt(n.ref.id);
            if (s && std::holds_alternative<RequireStmt>(s->node))
                sites.push_back({fname, n.ref.id, stmt_head_text(*s)});
        }
    }
    std::sort(sites.begin(), sites.end(), [&](const RequireSite& a, const RequireSite& b) {
        if (a.function != b.function) return a.function < b.function;
        return a.node_id < b.node_id;
    });
    // stable function-order sort: node order within function already handled
    std::stable_sort(sites.begin(), sites.end(), [&](const RequireSite& a, const RequireSite& b) {
        const auto& order = cfg.index->function_order();
        auto ia = std::find(order.begin(), order.end(), a.function);
        auto ib = std::find(order.begin(), order.end(), b.function);
        return ia < ib;
    });
    return sites;
}

// ---------------------------------------------------------------------------
// Dup calculation
// ---------------------------------------------------------------------------

namespace detail {

using DefFact = std::pair<std::string, int>;  // (variable, def node)

struct FunctionFlow {
    std::vector<int> node_ids;  // reachable nodes (intra), ascending
    std::map<int, std::vector<int>> preds;
    std::map<int, std::set<std::string>> defs;  // node -> defined vars
    std::map<int, std::vector<std::string>> uses;  // node -> used vars (deduped, order of first appearance)
};

inline FunctionFlow function_flow(const Cfg& cfg, const FunctionScope& scope) {
    FunctionFlow flow;
    const std::string& fn = scope.display_name;
    // intra-procedural reachability from Start
    std::set<int> reachable;
    std::vector<int> work{0};
    while (!work.empty()) {
        int cur = work.back();
        work.pop_back();
        if (!reachable.insert(cur).second) continue;
        for (const CfgEdge* e : cfg.out_edges({fn, cur}))
            if (e->label != EdgeLabel::Call && e->label != EdgeLabel::Return && e->head.function == fn)
                work.push_back(e->head.id);
    }
    for (const CfgNode& n : cfg.nodes)
        if (n.ref.function == fn && reachable.count(n.ref.id)) flow.node_ids.push_back(n.ref.id);
    std::sort(flow.node_ids.begin(), flow.node_ids.end());
    for (int id : flow.node_ids)
        for (const CfgEdge* e : cfg.out_edges({fn, id}))
            if (e->label != EdgeLabel::Call && e->label != EdgeLabel::Return && e->head.function == fn &&
                reachable.count(e->head.id))
                flow.preds[e->head.id].push_back(id);

    for (int id : flow.node_ids) {
        if (id == kParamNodeId) {
            for (const auto& p : scope.function->params) flow.defs[id].insert(p.name);
            for (const auto& sv : scope.entry_defined_state()) flow.defs[id].insert(sv);
            continue;
        }
        const Stmt* s = scope.stmt(id);
        if (!s) continue;
        if (auto def = defined_var(*s)) flow.defs[id].insert(*def);
        std::set<std::string> seen;
        for_each_use(*s, [&](const std::string& v) {
            if (seen.insert(v).second) flow.uses[id].push_back(v);
        });
    }
    return flow;
}

}  // namespace detail

// Canonical pair ordering: function (source order), variable (parameter then
// declaration order), def node, use node.
inline void sort_pairs(std::vector<DefUsePair>& pairs, const UnitIndex& index) {
    std::map<std::string, std::map<std::string, int>> var_rank;
    std::map<std::string, int> fn_rank;
    int f = 0;
    for (const auto& fname : index.function_order()) {
        fn_rank[fname] = f++;
        const FunctionScope& scope = index.at(fname);
        int r = 0;
        for (const auto& p : scope.function->params) var_rank[fname][p.name] = r++;
        for (const VarDecl* d : scope.locals_in_order) var_rank[fname][d->name] = r++;
        for (const auto& sv : scope.contract->state_vars)
            if (!var_rank[fname].count(sv.name)) var_rank[fname][sv.name] = r++;
    }
    std::sort(pairs.begin(), pairs.end(), [&](const DefUsePair& a, const DefUsePair& b) {
        int fa = fn_rank.at(a.function), fb = fn_rank.at(b.function);
        if (fa != fb) return fa < fb;
        int va = var_rank.at(a.function).at(a.variable), vb = var_rank.at(b.function).at(b.variable);
        if (va != vb) return va < vb;
        if (a.def_node != b.def_node) return a.def_node < b.def_node;
        return a.use_node < b.use_node;
    });
}

// Reaching-definitions fixpoint; result is independent of worklist order.
// `worklist_seed` only perturbs the iteration order (used by tests).
inline DupSets compute_dups(const Cfg& cfg, const std::vector<VariableInfo>& vars,
                            unsigned worklist_seed = 0) {
    (void)vars;  // the variable table is derivable from the index; kept for the call contract
    DupSets out;
    std::set<std::pair<std::string, detail::DefFact>> paired_defs;
    std::vector<std::pair<std::string, detail::DefFact>> all_defs;

    for (const auto& fname : cfg.index->function_order()) {
        const FunctionScope& scope = cfg.index->at(fname);
        detail::FunctionFlow flow = detail::function_flow(cfg, scope);

        std::map<int, std::set<detail::DefFact>> in, gen_out;
        std::vector<int> worklist = flow.node_ids;
        if (worklist_seed != 0) {  // deterministic shuffle for order-independence checks
            unsigned s = worklist_seed;
            for (size_t i = worklist.size(); i > 1; --i) {
                s = s * 1664525u + 1013904223u;
                std::swap(worklist[i - 1], worklist[s % i]);
            }
        }
        auto transfer = [&](int id, const std::set<detail::DefFact>& in_set) {
            std::set<detail::DefFact> result;
            const auto def_it = flow.defs.find(id);
            for (const auto& fact : in_set)
                if (def_it == flow.defs.end() || !def_it->second.count(fact.first)) result.insert(fact);
            if (def_it != flow.defs.end())
                for (const auto& v : def_it->second) result.insert({v, id});
            return result;
        };
        bool changed = true;
        while (changed) {
            changed = false;
            for (int id : worklist) {
                std::set<detail::DefFact> in_set;
                auto pit = flow.preds.find(id);
                if (pit != flow.preds.end())
                    for (int p : pit->second) {
                        const auto& pout = gen_out[p];
                        in_set.insert(pout.begin(), pout.end());
                    }
                auto out_set = transfer(id, in_set);
                if (in_set != in[id] || out_set != gen_out[id]) {
                    in[id] = std::move(in_set);
                    gen_out[id] = std::move(out_set);
                    changed = true;
                }
            }
        }

        for (int id : flow.node_ids) {
            auto uit = flow.uses.find(id);
            if (uit == flow.uses.end()) continue;
            for (const auto& v : uit->second) {
                bool found = false;
                for (const auto& fact : in[id]) {
                    if (fact.first != v) continue;
                    found = true;
                    out.all.push_back({fname, v, fact.second, id, false});
                    paired_defs.insert({fname, fact});
                }
                if (!found) {
                    const Stmt* s = scope.stmt(id);
                    throw AnalysisError(s ? s->pos : SourcePos{},
                                        "use of uninitialized variable '" + v + "' at node " +
                                            std::to_string(id) + " in function '" + fname + "'");
                }
            }
        }
        for (int id : flow.node_ids) {
            auto dit = flow.defs.find(id);
            if (dit == flow.defs.end()) continue;
            for (const auto& v : dit->second) all_defs.push_back({fname, {v, id}});
        }
    }

    for (const auto& [fn, fact] : all_defs)
        if (!paired_defs.count({fn, fact})) out.unused_defs.push_back({fn, fact.first, fact.second});
    sort_pairs(out.all, *cfg.index);
    return out;
}

// Marks require-related pairs: use at a require node, or use at a node that
// is reachable only after some require succeeds.
inline DupSets classify_rdups(DupSets dups, const std::vector<RequireSite>& sites, const Cfg& cfg) {
    std::map<std::string, std::set<int>> require_nodes;
    for (const auto& site : sites) require_nodes[site.function].insert(site.node_id);

    // nodes still reachable when every require's CondTrue arc is cut
    std::map<std::string, std::set<int>> reachable_without;
    for (const auto& fname : cfg.index->function_order()) {
        auto& reach = reachable_without[fname];
        std::vector<int> work{0};
        const auto& rnodes = require_nodes[fname];
        while (!work.empty()) {
            int cur = work.back();
            work.pop_back();
            if (!reach.insert(cur).second) continue;
            for (const CfgEdge* e : cfg.out_edges({fname, cur})) {
                if (e->label == EdgeLabel::Call || e->label == EdgeLabel::Return || e->head.function != fname)
                    continue;
                if (e->label == EdgeLabel::CondTrue && rnodes.count(cur)) continue;
                work.push_back(e->head.id);
            }
        }
    }

    for (auto& p : dups.all) {
        bool at_require = require_nodes[p.function].count(p.use_node) != 0;
        bool dependent = reachable_without[p.function].count(p.use_node) == 0;
        p.require_related = at_require || dependent;
    }
    return dups;
}

}  // namespace adfga
