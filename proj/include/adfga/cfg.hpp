// SPDX-License-Identifier: Apache-2.0
//
// Control-flow graph construction. One sub-CFG per function: node 0 is the
// Start node, node 1 the parameter-binding (signature) node, statement nodes
// keep their statement ids, and End is max_stmt_id + 1. Require statements
// branch CondTrue to the next statement and CondFalse straight to the
// function's End node. A call site gets a Call arc to the callee's Start and
// a Return arc from the callee's End back to the call node.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adfga/pretty.hpp"
#include "adfga/sema.hpp"

namespace adfga {

enum class CfgNodeKind { Start, End, Stmt };
enum class EdgeLabel { FallThrough, CondTrue, CondFalse, Call, Return };

inline const char* edge_label_text(EdgeLabel l) {
    switch (l) {
        case EdgeLabel::FallThrough: return "";
        case EdgeLabel::CondTrue: return "T";
        case EdgeLabel::CondFalse: return "F";
        case EdgeLabel::Call: return "call";
        case EdgeLabel::Return: return "ret";
    }
    return "";
}

struct NodeRef {
    std::string function;
    int id = 0;

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct CfgNode {
    NodeRef ref;
    CfgNodeKind kind = CfgNodeKind::Stmt;
    std::string label;
};

struct CfgEdge {
    NodeRef tail;
    NodeRef head;
    EdgeLabel label = EdgeLabel::FallThrough;

    friend bool operator==(const CfgEdge&, const CfgEdge&) = default;
};

struct Cfg {
    const UnitIndex* index = nullptr;
    std::string entry_function;  // first function in the unit
    std::vector<CfgNode> nodes;
    std::vector<CfgEdge> edges;
    std::vector<std::string> warnings;
    std::map<std::string, int> end_id;  // per function

    NodeRef start_of(const std::string& fn) const { return {fn, 0}; }
    NodeRef end_of(const std::string& fn) const { return {fn, end_id.at(fn)}; }

    const CfgNode* node(const NodeRef& ref) const {
        auto it = node_index_.find(ref);
        return it == node_index_.end() ? nullptr : &nodes[it->second];
    }

    std::vector<const CfgEdge*> out_edges(const NodeRef& ref) const {
        std::vector<const CfgEdge*> out;
        auto it = succ_index_.find(ref);
        if (it != succ_index_.end())
            for (size_t i : it->second) out.push_back(&edges[i]);
        return out;
    }

    const CfgEdge* out_edge(const NodeRef& ref, EdgeLabel label) const {
        for (const CfgEdge* e : out_edges(ref))
            if (e->label == label) return e;
        return nullptr;
    }

    void finalize() {
        node_index_.clear();
        succ_index_.clear();
        for (size_t i = 0; i < nodes.size(); ++i) node_index_[nodes[i].ref] = i;
        for (size_t i = 0; i < edges.size(); ++i) succ_index_[edges[i].tail].push_back(i);
    }

  private:
    std::map<NodeRef, size_t> node_index_;
    std::map<NodeRef, std::vector<size_t>> succ_index_;
};

namespace detail {

class CfgBuilder {
  public:
    CfgBuilder(const UnitIndex& index, Cfg& cfg) : index_(index), cfg_(cfg) {}

    void build() {
        if (!index_.function_order().empty()) cfg_.entry_function = index_.function_order().front();
        for (const auto& name : index_.function_order()) build_function(index_.at(name));
        cfg_.finalize();
        check_reachability();
    }

  private:
    const UnitIndex& index_;
    Cfg& cfg_;

    void add_node(const std::string& fn, int id, CfgNodeKind kind, std::string label) {
        cfg_.nodes.push_back(CfgNode{{fn, id}, kind, std::move(label)});
    }
    void add_edge(NodeRef tail, NodeRef head, EdgeLabel label) {
        cfg_.edges.push_back(CfgEdge{std::move(tail), std::move(head), label});
    }

    void build_function(const FunctionScope& scope) {
        const FunctionDef& fn = *scope.function;
        const std::string& name = scope.display_name;
        int end = fn.max_stmt_id + 1;
        cfg_.end_id[name] = end;
        add_node(name, 0, CfgNodeKind::Start, "Start");
        if (fn.body.empty()) {
            add_node(name, end, CfgNodeKind::End, "End");
            add_edge({name, 0}, {name, end}, EdgeLabel::FallThrough);
            cfg_.warnings.push_back("function '" + name + "' has an empty body (Start connects to End)");
            return;
        }
        add_node(name, kParamNodeId, CfgNodeKind::Stmt, function_signature_text(fn));
        for_each_stmt(fn.body, [&](const Stmt& s) { add_node(name, s.id, CfgNodeKind::Stmt, stmt_head_text(s)); });
        add_node(name, end, CfgNodeKind::End, "End");

        NodeRef end_ref{name, end};
        add_edge({name, 0}, {name, kParamNodeId}, EdgeLabel::FallThrough);
        NodeRef body_entry = build_seq(scope, fn.body, end_ref);
        add_edge({name, kParamNodeId}, body_entry, EdgeLabel::FallThrough);
    }

    // Wires a statement sequence so its last statement flows to `next`;
    // returns the sequence's entry node.
    NodeRef build_seq(const FunctionScope& scope, const StmtList& body, NodeRef next) {
        NodeRef entry = next;
        for (auto it = body.rbegin(); it != body.rend(); ++it) entry = build_stmt(scope, **it, entry);
        return entry;
    }

    NodeRef build_stmt(const FunctionScope& scope, const Stmt& s, NodeRef next) {
        const std::string& fn = scope.display_name;
        NodeRef self{fn, s.id};
        NodeRef end_ref{fn, cfg_.end_id.at(fn)};
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, IfStmt>) {
                    NodeRef then_entry = node.then_body.empty() ? next : build_seq(scope, node.then_body, next);
                    NodeRef else_entry = node.else_body.empty() ? next : build_seq(scope, node.else_body, next);
                    add_edge(self, then_entry, EdgeLabel::CondTrue);
                    add_edge(self, else_entry, EdgeLabel::CondFalse);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    NodeRef body_entry = node.body.empty() ? self : build_seq(scope, node.body, self);
                    add_edge(self, body_entry, EdgeLabel::CondTrue);
                    add_edge(self, next, EdgeLabel::CondFalse);
                } else if constexpr (std::is_same_v<T, RequireStmt>) {
                    add_edge(self, next, EdgeLabel::CondTrue);
                    add_edge(self, end_ref, EdgeLabel::CondFalse);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    add_edge(self, end_ref, EdgeLabel::FallThrough);
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    std::string callee = index_.callee_display_name(scope, node.callee);
                    const FunctionScope* callee_scope = index_.find(callee);
                    if (!callee_scope)
                        throw CfgError(s.pos, "dangling call target '" + node.callee + "'");
                    add_edge(self, next, EdgeLabel::FallThrough);
                    add_edge(self, {callee, 0}, EdgeLabel::Call);
                    add_edge({callee, callee_scope->function->max_stmt_id + 1}, self, EdgeLabel::Return);
                } else {
                    add_edge(self, next, EdgeLabel::FallThrough);
                }
            },
            s.node);
        return self;
    }

    void check_reachability() {
        for (const auto& name : index_.function_order()) {
            std::set<NodeRef> seen;
            std::vector<NodeRef> work{cfg_.start_of(name)};
            while (!work.empty()) {
                NodeRef cur = work.back();
                work.pop_back();
                if (!seen.insert(cur).second) continue;
                for (const CfgEdge* e : cfg_.out_edges(cur))
                    if (e->label != EdgeLabel::Call && e->label != EdgeLabel::Return) work.push_back(e->head);
            }
            for (const CfgNode& n : cfg_.nodes) {
                if (n.ref.function == name && n.kind == CfgNodeKind::Stmt && !seen.count(n.ref))
                    cfg_.warnings.push_back("unreachable statement at node " + std::to_string(n.ref.id) +
                                            " in function '" + name + "'");
            }
        }
    }
};

}  // namespace detail

inline Cfg build_cfg(const UnitIndex& index) {
    Cfg cfg;
    cfg.index = &index;
    detail::CfgBuilder(index, cfg).build();
    return cfg;
}

// Deterministic Graphviz export. Functions appear in source order as
// clusters; edges are sorted by (tail, label, head).
inline std::string cfg_to_dot(const Cfg& cfg) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };
    auto node_name = [](const NodeRef& r) {
        std::string fn = r.function;
        for (char& c : fn)
            if (c == '.') c = '_';
        return fn + "_" + std::to_string(r.id);
    };

    std::ostringstream os;
    os << "digraph cfg {\n";
    os << "    node [shape=box, fontname=\"monospace\"];\n";
    size_t cluster = 0;
    for (const auto& fname : cfg.index->function_order()) {
        os << "    subgraph cluster_" << cluster++ << " {\n";
        os << "        label=\"" << escape(fname) << "\";\n";
        std::vector<const CfgNode*> fn_nodes;
        for (const CfgNode& n : cfg.nodes)
            if (n.ref.function == fname) fn_nodes.push_back(&n);
        std::sort(fn_nodes.begin(), fn_nodes.end(),
                  [](const CfgNode* a, const CfgNode* b) { return a->ref.id < b->ref.id; });
        for (const CfgNode* n : fn_nodes) {
            os << "        " << node_name(n->ref) << " [label=\"";
            if (n->kind == CfgNodeKind::Stmt) os << n->ref.id << ": ";
            os << escape(n->label) << "\"";
            if (n->kind != CfgNodeKind::Stmt) os << ", shape=ellipse";
            os << "];\n";
        }
        os << "    }\n";
    }
    std::vector<CfgEdge> edges = cfg.edges;
    std::sort(edges.begin(), edges.end(), [](const CfgEdge& a, const CfgEdge& b) {
        return std::tie(a.tail, a.label, a.head) < std::tie(b.tail, b.label, b.head);
    });
    for (const CfgEdge& e : edges) {
        os << "    " << node_name(e.tail) << " -> " << node_name(e.head);
        const char* text = edge_label_text(e.label);
        if (*text) {
            os << " [label=\"" << text << "\"";
            if (e.label == EdgeLabel::Call || e.label == EdgeLabel::Return) os << ", style=dashed";
            os << "]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace adfga
