#pragma once

// Serial-implementation optimizer: exact minimization of E + lambda*L by
// closed-form per-edge power optimization, factor construction over the call
// graph, min-sum message passing on call trees, and separator enumeration on
// general graphs.

#include <array>
#include <map>
#include <vector>

#include "offload/graph.hpp"
#include "offload/physical.hpp"
#include "offload/plan.hpp"

namespace offload {

enum class SolveStatus {
    ok,
    not_a_tree,
    unsupported_structure,
    infeasible_deadline,
    limit_exceeded,
};

const char* to_string(SolveStatus s);

struct SerialEval {
    EnergyLatency value;
    bool zero_power_edge = false;  // some needed uplink edge had zero power
};

// Exact serial energy/latency of a plan: latency is the plain sum of every
// compute, uplink and downlink delay; energy is the matching mobile-side sum.
SerialEval evaluate_serial(const CallGraph& g, const PlatformProfile& prof,
                           const OffloadPlan& plan);

// Per-node cost tables over the local/remote decision, with the per-edge
// transfer costs already evaluated at fixed uplink powers. Summing every term
// over a full assignment reconstructs E + lambda*L exactly.
struct SerialFactors {
    double lambda = 0.0;
    std::map<NodeId, std::array<double, 2>> node_terms;          // [I_n]
    std::map<EdgeKey, std::array<std::array<double, 2>, 2>> edge_costs;  // [I_m][I_n]
    std::map<EdgeKey, double> uplink_powers;
    bool degenerate_power = false;
};

// Factors with every uplink power set to the shared closed-form optimum.
SerialFactors build_factors(const CallGraph& g, const PlatformProfile& prof,
                            double lambda);

// Factors with caller-supplied frozen uplink powers (separate-design path).
SerialFactors build_factors_with_powers(const CallGraph& g, const PlatformProfile& prof,
                                        double lambda,
                                        const std::map<EdgeKey, double>& powers);

// Objective of a full assignment under the factor tables.
double factor_objective(const CallGraph& g, const SerialFactors& f,
                        const std::map<NodeId, int>& decisions);

struct SerialSolution {
    SolveStatus status = SolveStatus::ok;
    OffloadPlan plan;
    double objective = 0.0;
    bool degenerate_power = false;
};

// Min-sum message passing on a call tree; exact optimum of E + lambda*L.
SerialSolution solve_serial_tree(const CallGraph& g, const PlatformProfile& prof,
                                 double lambda);

// Separator enumeration plus per-component min-sum for graphs that decompose
// into trees; reduces to the tree solver when the graph already is one.
SerialSolution solve_serial_general(const CallGraph& g, const PlatformProfile& prof,
                                    double lambda);

struct SerialSweepPoint {
    double lambda = 0.0;
    double energy_j = 0.0;
    double latency_s = 0.0;
    OffloadPlan plan;
};

// One exact solve per lambda (ascending), each re-evaluated by the serial
// evaluator. Fans out across threads when OFFLOAD_OPT_THREADS allows.
std::vector<SerialSweepPoint> sweep_lambda(const CallGraph& g,
                                           const PlatformProfile& prof,
                                           const std::vector<double>& lambdas);

struct SeparateDesignResult {
    OffloadPlan plan;
    double energy_j = 0.0;
    double latency_s = 0.0;
    std::vector<std::string> flags;  // e.g. "power-capped 3->7"
};

// Conventional baseline: per-edge powers frozen so each uplink takes no
// longer than the receiving task's local compute time, then decisions
// optimized with the physical layer fixed.
SeparateDesignResult separate_design_serial(const CallGraph& g,
                                            const PlatformProfile& prof);

}  // namespace offload
