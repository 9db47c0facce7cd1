#pragma once

// Joint optimization variable: per-node offload decisions plus per-edge
// uplink powers, and the (energy, latency) pair every evaluator returns.

#include <map>
#include <string>
#include <utility>

#include "offload/graph.hpp"

namespace offload {

using EdgeKey = std::pair<NodeId, NodeId>;  // (parent, child)

struct OffloadPlan {
    // 0 = run locally, 1 = offload; data nodes and the root must be 0.
    std::map<NodeId, int> decisions;
    // Uplink powers, meaningful exactly for edges (m,n) with I_m=0, I_n=1.
    std::map<EdgeKey, double> powers;

    int decision(NodeId id) const {
        auto it = decisions.find(id);
        return it == decisions.end() ? 0 : it->second;
    }
    double power(NodeId from, NodeId to) const {
        auto it = powers.find({from, to});
        return it == powers.end() ? 0.0 : it->second;
    }
    bool is_uplink_edge(NodeId from, NodeId to) const {
        return decision(from) == 0 && decision(to) == 1;
    }
    bool is_downlink_edge(NodeId from, NodeId to) const {
        return decision(from) == 1 && decision(to) == 0;
    }
};

// All-local plan for a graph (every decision 0, no powers).
OffloadPlan all_local_plan(const CallGraph& g);

// Decisions for ids 1..N concatenated as '0'/'1' characters.
std::string decisions_bitstring(const CallGraph& g, const OffloadPlan& plan);

struct EnergyLatency {
    double energy_j = 0.0;
    double latency_s = 0.0;
};

}  // namespace offload
