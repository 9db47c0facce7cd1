#include "offload/physical.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace offload {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section search for a unimodal function on [lo, hi]. Tolerance is on
// the argument; the three bracketing candidates are compared at the end so a
// boundary minimum is returned exactly.
template <typename F>
double golden_min(F f, double lo, double hi, double tol = 1e-9, int max_iter = 200) {
    if (hi <= lo) return lo;
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > tol * std::max(1.0, std::abs(b)); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    double best_x = lo;
    double best_f = f(lo);
    for (double x : {xm, hi}) {
        double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace

double uplink_capacity(double p, const PlatformProfile& prof) {
    if (p < 0.0) throw std::invalid_argument("uplink_capacity: negative power");
    return prof.bandwidth * std::log2(1.0 + prof.snr_gain * p);
}

double parallel_uplink_rate(double p, const PlatformProfile& prof,
                            const ConcurrencyProfile& conc) {
    return uplink_capacity(static_cast<double>(conc.n_ul) * p, prof) /
           static_cast<double>(conc.n_ul);
}

ParallelRates parallel_rates(double p, const PlatformProfile& prof,
                             const ConcurrencyProfile& conc) {
    ParallelRates r;
    r.ul = parallel_uplink_rate(p, prof, conc);
    const double n_dl = static_cast<double>(conc.n_dl);
    const double eff = prof.c_dl / prof.dl_bandwidth;  // spectral efficiency
    // log2(1 + (2^eff - 1)n) collapses to eff + log2(n) once 2^eff would
    // overflow; the switchover is far past double precision for the log
    r.dl = eff > 900.0
               ? prof.dl_bandwidth * (eff + std::log2(n_dl)) / n_dl
               : prof.dl_bandwidth * std::log2(1.0 + (std::exp2(eff) - 1.0) * n_dl) /
                     n_dl;
    r.f_l = prof.f_local / static_cast<double>(conc.n_l);
    r.f_r = prof.f_remote / static_cast<double>(conc.n_r);
    return r;
}

PowerChoice optimal_serial_power(const PlatformProfile& prof, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("optimal_serial_power: negative lambda");
    const double c = prof.p_rf + lambda;
    PowerChoice out;
    if (c == 0.0 && prof.p_min == 0.0) {
        // ratio p/C(p) is increasing, infimum at p -> 0 is never attained
        out.power = prof.p_min;
        out.cost = std::log(2.0) / (prof.bandwidth * prof.snr_gain);  // limit value
        out.degenerate = true;
        return out;
    }
    auto f = [&](double p) {
        double cap = uplink_capacity(p, prof);
        return cap > 0.0 ? (p + c) / cap : kInf;
    };
    out.power = golden_min(f, prof.p_min, prof.p_max);
    out.cost = f(out.power);
    return out;
}

PowerChoice optimal_power_in_interval(double bits, double lo, double hi, double c,
                                      const PlatformProfile& prof,
                                      const ConcurrencyProfile& conc) {
    if (bits <= 0.0) throw std::invalid_argument("optimal_power_in_interval: bits <= 0");
    if (!(lo >= 0.0) || !(lo < hi))
        throw std::invalid_argument("optimal_power_in_interval: bad interval");
    PowerChoice out;
    const double a = std::max(lo, prof.p_min);
    const double b = std::min(hi, prof.p_max);
    if (a > b) {
        out.infeasible = true;
        out.cost = kInf;
        return out;
    }
    auto f = [&](double p) {
        double rate = parallel_uplink_rate(p, prof, conc);
        return rate > 0.0 ? (p + c) * bits / rate : kInf;
    };
    if (a == b) {
        out.power = a;
        out.cost = f(a);
        return out;
    }
    out.power = golden_min(f, a, b);
    out.cost = f(out.power);
    if (out.power == 0.0 && c == 0.0) out.degenerate = true;
    return out;
}

DurationPower power_for_duration(double bits, double duration,
                                 const PlatformProfile& prof,
                                 const ConcurrencyProfile& conc) {
    if (duration <= 0.0) throw std::invalid_argument("power_for_duration: duration <= 0");
    const double n = static_cast<double>(conc.n_ul);
    DurationPower out;
    out.power =
        (std::exp2(n * bits / (prof.bandwidth * duration)) - 1.0) / (prof.snr_gain * n);
    out.exceeds_cap = out.power > prof.p_max;
    return out;
}

}  // namespace offload
