#pragma once

// Discrete-time evaluation of a fixed plan under the parallel implementation.
// Tracks every task through the idle / uploading / downloading / computing /
// completed automaton with a fixed step eps_d, sharing the radio and the two
// CPUs equally among whatever is active in each step. Energy and completion
// time are upper bounds that tighten as eps_d shrinks.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "offload/graph.hpp"
#include "offload/physical.hpp"
#include "offload/plan.hpp"

namespace offload {

enum class NodeExecState : uint8_t { ID, CM, CP_L, CP_R, UL, DL };

const char* to_string(NodeExecState s);

// One pending upload stream: `bits` left to push at `power`. A local node
// with several offloaded children queues one stream per child (served in
// ascending child id); an offloaded node pools its data-parent inputs into a
// single stream.
struct UplinkStream {
    NodeId peer = 0;  // child being fed, or 0 for a pooled input stream
    double bits = 0.0;
    double power = 0.0;
};

struct SimState {
    int step = 0;  // completed steps; current time is step * eps_d
    double eps_d = 0.0;
    std::map<NodeId, NodeExecState> x;
    std::map<NodeId, std::vector<UplinkStream>> ul_queue;
    std::map<EdgeKey, double> dl_bits;
    std::map<NodeId, double> cyc_local;
    std::map<NodeId, double> cyc_remote;
    // counts frozen at the start of the step just taken
    int n_ul = 0, n_dl = 0, n_l = 0, n_r = 0;
    double energy = 0.0;
    // per-category accumulators (sum to energy)
    double energy_ul = 0.0, energy_dl = 0.0, energy_local = 0.0;
};

struct TimelineRow {
    NodeId node = 0;
    NodeExecState state = NodeExecState::ID;
    double start_s = 0.0;
    double end_s = 0.0;
};

using Timeline = std::vector<TimelineRow>;

struct SimResult {
    double energy_j = 0.0;
    double latency_s = 0.0;
    long steps = 0;
    double eps_d = 0.0;
    bool stalled = false;
    std::string stall_diagnostic;  // stuck nodes and their states
    std::vector<std::string> warnings;
    Timeline timeline;
};

// Initial state: data nodes computing locally, upload/download backlogs set
// from the plan's boundary edges, residual cycles loaded. Throws when the
// plan does not match the graph.
SimState init_sim(const CallGraph& g, const PlatformProfile& prof,
                  const OffloadPlan& plan, double eps_d);

// Advance one step: freeze the concurrency counts, drain residuals at the
// equally-shared rates, charge energy for every active stream and local
// task, then apply the state transitions.
void step(SimState& s, const CallGraph& g, const PlatformProfile& prof,
          const OffloadPlan& plan);

// Run until the root completes or the schedule provably stops making
// progress; max_steps <= 0 picks a guard from the plan's serial latency.
SimResult run(const CallGraph& g, const PlatformProfile& prof,
              const OffloadPlan& plan, double eps_d, long max_steps = 0);

// Run-length encoded `node,state,start_s,end_s` rows.
std::string export_timeline(const Timeline& timeline);

}  // namespace offload
