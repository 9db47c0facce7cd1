#pragma once

// Parallel-implementation optimizer: energy minimization under a deadline by
// dynamic programming over a quantized delay budget, with per-slot uplink
// power optimization, index backtracking, and a separator-core extension for
// general call graphs.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "offload/graph.hpp"
#include "offload/physical.hpp"
#include "offload/plan.hpp"
#include "offload/serial.hpp"  // SolveStatus

namespace offload {

// Uniform delay grid t_k = (k-1)*eps for k = 1..k_max, with t_{k_max} the
// largest grid point not beyond the deadline.
class QuantGrid {
public:
    QuantGrid(double deadline, double eps);

    double eps() const { return eps_; }
    double deadline() const { return deadline_; }
    int k_max() const { return k_max_; }
    double value(int k) const { return (k - 1) * eps_; }

    // Smallest k with t_k >= t (never rounds a positive remainder away):
    // the index form of rounding a delay up to the grid.
    int index_up(double t) const;
    // Rounded-up grid value q(t); q(0) = t_1 = 0.
    double grid_value(double t) const { return value(index_up(t)); }
    // First slot (t_{k-1}, t_k] that can hold a duration strictly beyond t;
    // returns k_max+1 (deadline violation) for t >= t_{k_max}.
    int q_index(double t) const;

private:
    double deadline_ = 0.0;
    double eps_ = 0.0;
    int k_max_ = 1;
};

// Budget consumed by a delay x, in grid-index units: a child at index k hands
// its parents index k - consumed_indices(x).
inline int consumed_indices(const QuantGrid& grid, double x) {
    return grid.index_up(x);
}

struct DpTables {
    // e_local[n][k] / e_remote[n][k]: minimum subtree energy when node n runs
    // locally/remotely within budget t_k; k in 1..k_max, entry 0 unused.
    std::map<NodeId, std::vector<double>> e_local;
    std::map<NodeId, std::vector<double>> e_remote;
    // winning parent decision per (parent, child) edge and budget index
    std::map<EdgeKey, std::vector<uint8_t>> choice_local;
    std::map<EdgeKey, std::vector<uint8_t>> choice_remote;
    // winning uplink power and landing slot per edge and budget index
    std::map<EdgeKey, std::vector<double>> edge_power;
    std::map<EdgeKey, std::vector<int>> edge_slot;
};

// Completion-time recursion for a fixed plan under the shared-resource rates:
// max over parents of (parent completion + transfer delays) + own compute.
// Data nodes complete at time zero. Returns +inf on a zero-power uplink edge.
double latency_recursion(const CallGraph& g, const PlatformProfile& prof,
                         const ConcurrencyProfile& conc, const OffloadPlan& plan);

// Mobile-side energy of a plan under the parallel model (schedule-free sum:
// local computes, uplink legs, downlink legs; data nodes contribute nothing).
double evaluate_parallel_energy(const CallGraph& g, const PlatformProfile& prof,
                                const ConcurrencyProfile& conc,
                                const OffloadPlan& plan);

struct EdgePowerChoice {
    double power = 0.0;
    double cost = 0.0;  // transmit energy + parent continuation energy
    int slot = 0;       // landing slot j of the chosen duration
    bool feasible = false;
};

// Per-slot uplink optimization for one edge at child budget index k: regions
// bounded by the powers reaching each slot boundary, each solved as a scalar
// convex subproblem, then the slot minimizing transmit energy plus the
// parent's continuation cost is selected. parent_e_local is indexed by k.
EdgePowerChoice edge_power_table(const PlatformProfile& prof,
                                 const ConcurrencyProfile& conc,
                                 const QuantGrid& grid,
                                 const std::vector<double>& parent_e_local,
                                 double bits, double child_remote_latency, int k);

// DP tables for a call tree at full budget (inspection and test surface).
DpTables compute_tree_tables(const CallGraph& g, const PlatformProfile& prof,
                             const ConcurrencyProfile& conc, const QuantGrid& grid);

struct ParallelSolution {
    SolveStatus status = SolveStatus::ok;
    OffloadPlan plan;
    double energy_j = 0.0;
};

// Deadline-quantized DP on a call tree: leaf-to-root table updates with
// recorded choices, then index backtracking from the root at full budget.
ParallelSolution solve_parallel_tree(const CallGraph& g, const PlatformProfile& prof,
                                     const ConcurrencyProfile& conc,
                                     const QuantGrid& grid);

// General graphs: enumerate decisions over the separator core, evaluate the
// core once per assignment with grid-discretized uplink durations, and solve
// the residual tree with core nodes as ready-shifted pseudo leaves.
ParallelSolution solve_parallel_general(const CallGraph& g,
                                        const PlatformProfile& prof,
                                        const ConcurrencyProfile& conc,
                                        const QuantGrid& grid);

// Fixed uplink powers (separate design): DP over decisions only.
struct SeparateDesignParallel {
    SolveStatus status = SolveStatus::ok;
    OffloadPlan plan;
    double energy_j = 0.0;
    double latency_s = 0.0;
    std::vector<std::string> flags;
};
SeparateDesignParallel separate_design_parallel(const CallGraph& g,
                                                const PlatformProfile& prof,
                                                const ConcurrencyProfile& conc,
                                                const QuantGrid& grid);

// Uniform-knob concurrency selection: solve with N^ul=N^dl=N^l=N^r = 1..4 and
// keep the best simulator-evaluated result (feasible-by-simulation first,
// then lower simulated energy, then smaller N).
struct AutoConcResult {
    ParallelSolution solution;
    int conc = 1;
    double sim_energy_j = 0.0;
    double sim_latency_s = 0.0;
};
AutoConcResult solve_parallel_auto(const CallGraph& g, const PlatformProfile& prof,
                                   const QuantGrid& grid, double eps_d);

struct ParallelSweepRow {
    double lmax_s = 0.0;
    double eps_s = 0.0;
    int conc = 1;
    SolveStatus status = SolveStatus::ok;
    double dp_energy_j = 0.0;
    double recursion_latency_s = 0.0;
    double sim_energy_j = 0.0;
    double sim_latency_s = 0.0;
    OffloadPlan plan;
};

// One solve per deadline; each row carries the DP energy, the recursion
// latency, and the simulator upper bounds. conc = 0 selects auto mode.
std::vector<ParallelSweepRow> sweep_deadline(const CallGraph& g,
                                             const PlatformProfile& prof, int conc,
                                             const std::vector<double>& lmax_list,
                                             double eps, double eps_d);

}  // namespace offload
