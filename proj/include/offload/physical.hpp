#pragma once

// Physical-layer model: channel and compute constants, the uplink rate
// function, equal-split shared-resource rates, and the scalar convex power
// solvers both optimizers rely on.

#include <optional>

namespace offload {

struct PlatformProfile {
    double f_local = 1e9;    // mobile CPU, cycles/s
    double f_remote = 1e10;  // cloud CPU, cycles/s
    double p_local = 0.4;    // mobile compute power, W
    double p_rf = 0.0;       // RF-circuit power while the radio is on, W
    double p_rx = 0.0;       // baseband decode power while receiving, W
    double c_dl = 200e6;     // downlink capacity, bits/s
    double bandwidth = 1e6;  // uplink bandwidth B, Hz
    double snr_gain = 0.0;   // composite channel factor gamma/(N0*B), 1/W
    double dl_bandwidth = 1e6;  // normalization bandwidth for shared downlink
    double p_max = 10.0;        // uplink power cap, W
    double p_min = 0.0;         // uplink power floor, W
};

// Number of concurrent uploads/downloads/local/remote computations assumed by
// the parallel planner (resources are split equally among them).
struct ConcurrencyProfile {
    int n_ul = 1;
    int n_dl = 1;
    int n_l = 1;
    int n_r = 1;
};

struct ParallelRates {
    double ul = 0.0;   // bits/s per upload stream at the probed power
    double dl = 0.0;   // bits/s per download stream
    double f_l = 0.0;  // cycles/s per local task
    double f_r = 0.0;  // cycles/s per remote task
};

struct PowerChoice {
    double power = 0.0;
    double cost = 0.0;  // (power + c) * bits / rate(power), J
    bool degenerate = false;
    bool infeasible = false;
};

struct DurationPower {
    double power = 0.0;
    bool exceeds_cap = false;
};

// Shannon uplink rate B*log2(1 + snr_gain*p). Throws on negative power.
double uplink_capacity(double p, const PlatformProfile& prof);

// Per-stream rates/frequencies when resources are split n ways. The shared
// downlink treats c_dl/dl_bandwidth as a spectral efficiency so the split
// stays unit-consistent for multi-MHz capacities.
ParallelRates parallel_rates(double p, const PlatformProfile& prof,
                             const ConcurrencyProfile& conc);

// Per-stream shared uplink rate C(n_ul*p)/n_ul at a given power.
double parallel_uplink_rate(double p, const PlatformProfile& prof,
                            const ConcurrencyProfile& conc);

// Minimizer of (p + p_rf + lambda)/C(p) over [p_min, p_max]. The returned
// cost field holds the per-bit objective value. With p_rf + lambda == 0 the
// infimum sits at p -> 0; the floor is returned with the degenerate flag set.
PowerChoice optimal_serial_power(const PlatformProfile& prof, double lambda);

// Minimizer of (p + c)*bits/ul_rate(p) over [lo, hi] clamped to the profile
// power window, using the shared uplink rate. Sets infeasible when the
// clamped interval is empty.
PowerChoice optimal_power_in_interval(double bits, double lo, double hi, double c,
                                      const PlatformProfile& prof,
                                      const ConcurrencyProfile& conc);

// The unique power whose shared uplink rate moves `bits` in `duration`
// seconds; exceeds_cap is set when it lands above p_max. Throws on
// non-positive duration.
DurationPower power_for_duration(double bits, double duration,
                                 const PlatformProfile& prof,
                                 const ConcurrencyProfile& conc);

}  // namespace offload
