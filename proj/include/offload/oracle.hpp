#pragma once

// Independent brute-force references used only to verify the optimizers.
// These share nothing with the solvers beyond the plan evaluators.

#include "offload/graph.hpp"
#include "offload/parallel.hpp"
#include "offload/physical.hpp"
#include "offload/plan.hpp"
#include "offload/serial.hpp"

namespace offload {

struct OracleResult {
    SolveStatus status = SolveStatus::ok;
    OffloadPlan plan;
    double objective = 0.0;  // E + lambda*L (serial) or energy (parallel)
    long enumerated = 0;
};

// Exhaustive enumeration of every feasible decision vector with the
// closed-form per-edge power; global minimum of E + lambda*L.
OracleResult brute_force_serial(const CallGraph& g, const PlatformProfile& prof,
                                double lambda, int limit = 20);

// Enumerate decisions, and a log-spaced power grid per uplink edge anchored
// at p_max, the lowest point being the power the edge would need if its
// transfer could use every second the fixed residual delays on its path to
// the root leave available. Keeps the cheapest combination whose recursion
// latency meets the deadline.
OracleResult brute_force_parallel(const CallGraph& g, const PlatformProfile& prof,
                                  const ConcurrencyProfile& conc, double lmax,
                                  int power_grid_points, int limit = 10);

}  // namespace offload
