#include "offload/plan.hpp"

namespace offload {

OffloadPlan all_local_plan(const CallGraph& g) {
    OffloadPlan plan;
    for (const auto& nd : g.nodes()) plan.decisions[nd.id] = 0;
    return plan;
}

std::string decisions_bitstring(const CallGraph& g, const OffloadPlan& plan) {
    std::string out;
    out.reserve(static_cast<size_t>(g.size()));
    for (NodeId id = 1; id <= g.size(); ++id)
        out.push_back(plan.decision(id) == 1 ? '1' : '0');
    return out;
}

}  // namespace offload
