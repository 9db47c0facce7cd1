#include "offload/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace offload {

CallGraph::CallGraph(std::vector<TaskNode> nodes, std::vector<Edge> edges, NodeId root)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), root_(root) {
    NodeId max_id = 0;
    for (const auto& n : nodes_) max_id = std::max(max_id, n.id);
    parents_.assign(static_cast<size_t>(max_id) + 1, {});
    children_.assign(static_cast<size_t>(max_id) + 1, {});
    for (const auto& e : edges_) {
        if (e.from >= 1 && e.from <= max_id && e.to >= 1 && e.to <= max_id) {
            parents_[static_cast<size_t>(e.to)].push_back(e.from);
            children_[static_cast<size_t>(e.from)].push_back(e.to);
        }
    }
    for (auto& v : parents_) std::sort(v.begin(), v.end());
    for (auto& v : children_) std::sort(v.begin(), v.end());
}

bool CallGraph::has_node(NodeId id) const {
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [id](const TaskNode& n) { return n.id == id; });
}

int CallGraph::index_of(NodeId id) const {
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id == id) return static_cast<int>(i);
    throw std::invalid_argument("unknown node id " + std::to_string(id));
}

const TaskNode& CallGraph::node(NodeId id) const {
    return nodes_[static_cast<size_t>(index_of(id))];
}

const std::vector<NodeId>& CallGraph::parents(NodeId id) const {
    if (id < 1 || static_cast<size_t>(id) >= parents_.size())
        throw std::invalid_argument("unknown node id " + std::to_string(id));
    return parents_[static_cast<size_t>(id)];
}

const std::vector<NodeId>& CallGraph::children(NodeId id) const {
    if (id < 1 || static_cast<size_t>(id) >= children_.size())
        throw std::invalid_argument("unknown node id " + std::to_string(id));
    return children_[static_cast<size_t>(id)];
}

double CallGraph::edge_bits(NodeId from, NodeId to) const {
    for (const auto& e : edges_)
        if (e.from == from && e.to == to) return e.bits;
    throw std::invalid_argument("unknown edge " + std::to_string(from) + "->" +
                                std::to_string(to));
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v.code << ": " << v.detail << "\n";
    return os.str();
}

ValidationReport validate_graph(const CallGraph& g) {
    ValidationReport rep;
    auto add = [&rep](std::string code, std::string detail) {
        rep.violations.push_back({std::move(code), std::move(detail)});
    };

    const int n = g.size();
    if (n == 0) {
        add("empty-graph", "graph has no nodes");
        return rep;
    }

    // dense ids 1..N, no duplicates
    std::set<NodeId> ids;
    for (const auto& nd : g.nodes()) {
        if (!ids.insert(nd.id).second)
            add("duplicate-node-id", "node " + std::to_string(nd.id));
        if (!(std::isfinite(nd.cycles) && nd.cycles >= 0.0))
            add("invalid-cycles", "node " + std::to_string(nd.id));
    }
    for (NodeId id = 1; id <= n; ++id)
        if (!ids.count(id)) {
            add("non-dense-ids", "expected ids 1.." + std::to_string(n));
            break;
        }
    if (!ids.empty() && (*ids.begin() < 1 || *ids.rbegin() > n))
        add("non-dense-ids", "expected ids 1.." + std::to_string(n));

    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& e : g.edges()) {
        std::string name = std::to_string(e.from) + "->" + std::to_string(e.to);
        if (e.from == e.to) add("self-loop", "edge " + name);
        if (!ids.count(e.from) || !ids.count(e.to))
            add("edge-unknown-node", "edge " + name);
        if (!(std::isfinite(e.bits) && e.bits > 0.0))
            add("non-positive-bits", "edge " + name);
        if (!seen.insert({e.from, e.to}).second)
            add("duplicate-edge", "edge " + name);
    }
    if (!rep.valid()) return rep;  // adjacency is unreliable past this point

    // exactly one childless node, and it is the declared root
    std::vector<NodeId> childless;
    for (const auto& nd : g.nodes())
        if (g.children(nd.id).empty()) childless.push_back(nd.id);
    if (childless.size() != 1) {
        std::string list;
        for (NodeId id : childless) list += (list.empty() ? "" : ",") + std::to_string(id);
        add("multiple-roots", "childless nodes {" + list + "}");
    } else if (childless.front() != g.root()) {
        add("root-mismatch", "declared root " + std::to_string(g.root()) +
                                 ", childless node " + std::to_string(childless.front()));
    }

    for (const auto& nd : g.nodes()) {
        const bool has_parents = !g.parents(nd.id).empty();
        if (nd.is_data && has_parents)
            add("data-node-has-parent", "node " + std::to_string(nd.id));
        if (!nd.is_data && !has_parents)
            add("parentless-non-data", "node " + std::to_string(nd.id));
        if (nd.is_data && g.children(nd.id).empty())
            add("childless-data-node", "node " + std::to_string(nd.id));
        if (nd.is_data && nd.id == g.root())
            add("data-root", "node " + std::to_string(nd.id));
    }

    // acyclicity via Kahn
    std::map<NodeId, int> indeg;
    for (const auto& nd : g.nodes()) indeg[nd.id] = static_cast<int>(g.parents(nd.id).size());
    std::queue<NodeId> q;
    for (auto& [id, d] : indeg)
        if (d == 0) q.push(id);
    int visited = 0;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        ++visited;
        for (NodeId c : g.children(u))
            if (--indeg[c] == 0) q.push(c);
    }
    if (visited != n) add("cycle", "graph is not acyclic");

    return rep;
}

std::vector<NodeId> topological_order(const CallGraph& g) {
    std::vector<int> indeg(static_cast<size_t>(g.size()) + 1, 0);
    for (const auto& nd : g.nodes())
        indeg[static_cast<size_t>(nd.id)] = static_cast<int>(g.parents(nd.id).size());

    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (const auto& nd : g.nodes())
        if (indeg[static_cast<size_t>(nd.id)] == 0) ready.push(nd.id);

    std::vector<NodeId> order;
    order.reserve(static_cast<size_t>(g.size()));
    while (!ready.empty()) {
        NodeId u = ready.top();
        ready.pop();
        order.push_back(u);
        for (NodeId c : g.children(u))
            if (--indeg[static_cast<size_t>(c)] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != g.size())
        throw std::runtime_error("topological_order: cycle detected");
    return order;
}

DecompositionReport decompose(const CallGraph& g) {
    DecompositionReport rep;
    for (const auto& nd : g.nodes())
        if (g.children(nd.id).size() >= 2) rep.separators.insert(nd.id);
    rep.is_tree = rep.separators.empty();

    // residual graph: drop separators and their incident edges, then find
    // weakly-connected components
    std::map<NodeId, std::vector<NodeId>> und;
    for (const auto& nd : g.nodes())
        if (!rep.separators.count(nd.id)) und[nd.id] = {};
    for (const auto& e : g.edges())
        if (und.count(e.from) && und.count(e.to)) {
            und[e.from].push_back(e.to);
            und[e.to].push_back(e.from);
        }

    std::set<NodeId> done;
    for (const auto& [start, adj] : und) {
        (void)adj;
        if (done.count(start)) continue;
        std::set<NodeId> comp;
        std::queue<NodeId> q;
        q.push(start);
        done.insert(start);
        while (!q.empty()) {
            NodeId u = q.front();
            q.pop();
            comp.insert(u);
            for (NodeId v : und[u])
                if (done.insert(v).second) q.push(v);
        }
        rep.components.push_back(std::move(comp));
    }

    rep.forest_after_removal = true;
    for (const auto& comp : rep.components) {
        for (NodeId u : comp) {
            int out = 0;
            for (NodeId c : g.children(u))
                if (comp.count(c)) ++out;
            if (out > 1) rep.forest_after_removal = false;
        }
    }
    return rep;
}

std::set<NodeId> ancestors_closure(const CallGraph& g, const std::set<NodeId>& s) {
    std::set<NodeId> out;
    std::queue<NodeId> q;
    for (NodeId id : s) {
        if (!g.has_node(id))
            throw std::invalid_argument("ancestors_closure: unknown node id " +
                                        std::to_string(id));
        if (out.insert(id).second) q.push(id);
    }
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (NodeId p : g.parents(u))
            if (out.insert(p).second) q.push(p);
    }
    return out;
}

}  // namespace offload
