#pragma once

// Call-graph data model and structural decomposition.
//
// A call graph is a DAG of application tasks: nodes carry CPU cycle counts,
// edges carry the bits a parent must hand its child, data nodes are the
// parentless inputs pinned to the mobile, and the unique childless node is
// the root task that finishes the application on the mobile.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace offload {

using NodeId = int;

struct TaskNode {
    NodeId id = 0;
    double cycles = 0.0;   // CPU cycles required to run the task
    bool is_data = false;  // parentless input-preparation node, pinned local
};

struct Edge {
    NodeId from = 0;
    NodeId to = 0;
    double bits = 0.0;  // bits transferred from parent to child
};

class CallGraph {
public:
    CallGraph() = default;
    CallGraph(std::vector<TaskNode> nodes, std::vector<Edge> edges, NodeId root);

    const std::vector<TaskNode>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    NodeId root() const { return root_; }
    int size() const { return static_cast<int>(nodes_.size()); }

    bool has_node(NodeId id) const;
    const TaskNode& node(NodeId id) const;  // throws on unknown id
    const std::vector<NodeId>& parents(NodeId id) const;
    const std::vector<NodeId>& children(NodeId id) const;
    double edge_bits(NodeId from, NodeId to) const;  // throws on unknown edge
    bool is_data(NodeId id) const { return node(id).is_data; }

private:
    std::vector<TaskNode> nodes_;
    std::vector<Edge> edges_;
    NodeId root_ = 0;
    // adjacency indexed by dense id (valid once ids are 1..N; built leniently
    // so that validate_graph can still inspect malformed graphs)
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;

    int index_of(NodeId id) const;
};

struct Violation {
    std::string code;    // e.g. "self-loop", "multiple-roots"
    std::string detail;  // offending node/edge ids in readable form
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    std::string summary() const;
};

struct DecompositionReport {
    bool is_tree = false;
    std::set<NodeId> separators;             // nodes with out-degree >= 2
    std::vector<std::set<NodeId>> components;  // residual weak components
    bool forest_after_removal = false;
};

// Checks every structural invariant; violations are data, not failures.
ValidationReport validate_graph(const CallGraph& g);

// Parents-before-children order, ties broken by ascending id. Throws if the
// graph contains a cycle.
std::vector<NodeId> topological_order(const CallGraph& g);

// Separator set (out-degree >= 2), residual weak components, and whether each
// residual component has the call-tree property (<= 1 outgoing edge per node).
DecompositionReport decompose(const CallGraph& g);

// s together with every ancestor of a member of s. Throws on unknown ids.
std::set<NodeId> ancestors_closure(const CallGraph& g, const std::set<NodeId>& s);

}  // namespace offload
