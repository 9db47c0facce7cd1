#include "offload/serial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace offload {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double local_latency(const CallGraph& g, const PlatformProfile& prof, NodeId n) {
    return g.node(n).cycles / prof.f_local;
}

double remote_latency(const CallGraph& g, const PlatformProfile& prof, NodeId n) {
    return g.node(n).cycles / prof.f_remote;
}

// Energy of a transfer leg with 0 * inf resolved to 0 (idle radio at zero
// power spends nothing even if the leg never completes).
double leg_energy(double power_sum, double delay) {
    if (power_sum == 0.0) return 0.0;
    return power_sum * delay;
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return "ok";
        case SolveStatus::not_a_tree: return "not-a-tree";
        case SolveStatus::unsupported_structure: return "unsupported-structure";
        case SolveStatus::infeasible_deadline: return "infeasible-deadline";
        case SolveStatus::limit_exceeded: return "limit-exceeded";
    }
    return "unknown";
}

SerialEval evaluate_serial(const CallGraph& g, const PlatformProfile& prof,
                           const OffloadPlan& plan) {
    SerialEval out;
    double L = 0.0, E = 0.0;
    for (const auto& nd : g.nodes()) {
        if (plan.decision(nd.id) == 0) {
            double ll = local_latency(g, prof, nd.id);
            L += ll;
            E += prof.p_local * ll;
        } else {
            L += remote_latency(g, prof, nd.id);
        }
    }
    for (const auto& e : g.edges()) {
        if (plan.is_uplink_edge(e.from, e.to)) {
            double p = plan.power(e.from, e.to);
            double cap = uplink_capacity(p, prof);
            double delay = cap > 0.0 ? e.bits / cap : kInf;
            if (!(cap > 0.0)) out.zero_power_edge = true;
            L += delay;
            E += leg_energy(p + prof.p_rf, delay);
        } else if (plan.is_downlink_edge(e.from, e.to)) {
            double delay = e.bits / prof.c_dl;
            L += delay;
            E += leg_energy(prof.p_rf + prof.p_rx, delay);
        }
    }
    out.value = {E, L};
    return out;
}

SerialFactors build_factors_with_powers(const CallGraph& g, const PlatformProfile& prof,
                                        double lambda,
                                        const std::map<EdgeKey, double>& powers) {
    SerialFactors f;
    f.lambda = lambda;
    for (const auto& nd : g.nodes()) {
        double ll = local_latency(g, prof, nd.id);
        double lr = remote_latency(g, prof, nd.id);
        f.node_terms[nd.id] = {(prof.p_local + lambda) * ll, lambda * lr};
    }
    for (const auto& e : g.edges()) {
        EdgeKey key{e.from, e.to};
        auto it = powers.find(key);
        double p = it == powers.end() ? 0.0 : it->second;
        f.uplink_powers[key] = p;
        double cap = uplink_capacity(p, prof);
        double ul_cost =
            cap > 0.0 ? (p + prof.p_rf + lambda) * e.bits / cap : kInf;
        double dl_cost = (prof.p_rf + prof.p_rx + lambda) * e.bits / prof.c_dl;
        f.edge_costs[key] = {{{0.0, ul_cost}, {dl_cost, 0.0}}};
    }
    return f;
}

SerialFactors build_factors(const CallGraph& g, const PlatformProfile& prof,
                            double lambda) {
    PowerChoice pc = optimal_serial_power(prof, lambda);
    std::map<EdgeKey, double> powers;
    for (const auto& e : g.edges()) powers[{e.from, e.to}] = pc.power;
    SerialFactors f = build_factors_with_powers(g, prof, lambda, powers);
    f.degenerate_power = pc.degenerate;
    return f;
}

double factor_objective(const CallGraph& g, const SerialFactors& f,
                        const std::map<NodeId, int>& decisions) {
    auto dec = [&](NodeId id) {
        auto it = decisions.find(id);
        return it == decisions.end() ? 0 : it->second;
    };
    double total = 0.0;
    for (const auto& nd : g.nodes()) total += f.node_terms.at(nd.id)[static_cast<size_t>(dec(nd.id))];
    for (const auto& e : g.edges())
        total += f.edge_costs.at({e.from, e.to})[static_cast<size_t>(dec(e.from))]
                                                [static_cast<size_t>(dec(e.to))];
    return total;
}

namespace {

// Min-sum over the free nodes with the clamped assignment folded in. The
// residual graph over free nodes must be a forest of in-trees (guaranteed
// when clamps cover the separator set). Returns the full assignment and the
// exact objective including the clamped constant terms.
struct MinSumResult {
    std::map<NodeId, int> assignment;
    double objective = 0.0;
};

MinSumResult min_sum_with_clamps(const CallGraph& g, const SerialFactors& f,
                                 const std::map<NodeId, int>& clamps) {
    MinSumResult out;
    out.assignment = clamps;

    std::vector<NodeId> order = topological_order(g);
    auto clamped = [&](NodeId id) { return clamps.count(id) != 0; };

    // message[n][i]: best cost of n's free ancestry given I_n = i
    std::map<NodeId, std::array<double, 2>> best;
    // choice[{p,n}][i]: argmin value of free parent p when I_n = i
    std::map<EdgeKey, std::array<int, 2>> choice;

    for (NodeId n : order) {
        if (clamped(n)) continue;
        std::array<double, 2> acc = f.node_terms.at(n);
        for (NodeId p : g.parents(n)) {
            const auto& ec = f.edge_costs.at({p, n});
            if (clamped(p)) {
                int ip = clamps.at(p);
                acc[0] += ec[static_cast<size_t>(ip)][0];
                acc[1] += ec[static_cast<size_t>(ip)][1];
            } else {
                const auto& msg = best.at(p);
                std::array<int, 2> ch{};
                for (int i = 0; i < 2; ++i) {
                    double local_side = msg[0] + ec[0][static_cast<size_t>(i)];
                    double remote_side = msg[1] + ec[1][static_cast<size_t>(i)];
                    // ties resolve to local
                    if (remote_side < local_side) {
                        acc[static_cast<size_t>(i)] += remote_side;
                        ch[i] = 1;
                    } else {
                        acc[static_cast<size_t>(i)] += local_side;
                        ch[i] = 0;
                    }
                }
                choice[{p, n}] = ch;
            }
        }
        for (NodeId c : g.children(n)) {
            if (clamped(c)) {
                int ic = clamps.at(c);
                const auto& ec = f.edge_costs.at({n, c});
                acc[0] += ec[0][static_cast<size_t>(ic)];
                acc[1] += ec[1][static_cast<size_t>(ic)];
            }
        }
        best[n] = acc;
    }

    // constants: clamped node terms plus edges with both ends clamped
    double total = 0.0;
    for (const auto& [id, val] : clamps)
        total += f.node_terms.at(id)[static_cast<size_t>(val)];
    for (const auto& e : g.edges())
        if (clamped(e.from) && clamped(e.to))
            total += f.edge_costs.at({e.from, e.to})[static_cast<size_t>(clamps.at(e.from))]
                                                    [static_cast<size_t>(clamps.at(e.to))];

    // every free component drains into a unique sink: a free node whose child
    // is clamped or absent
    std::vector<NodeId> sinks;
    for (NodeId n : order) {
        if (clamped(n)) continue;
        bool is_sink = true;
        for (NodeId c : g.children(n))
            if (!clamped(c)) is_sink = false;
        if (is_sink) sinks.push_back(n);
    }
    for (NodeId s : sinks) {
        const auto& msg = best.at(s);
        int pick = msg[1] < msg[0] ? 1 : 0;
        total += msg[static_cast<size_t>(pick)];
        // backtrack through free parents
        std::vector<std::pair<NodeId, int>> stack{{s, pick}};
        while (!stack.empty()) {
            auto [n, val] = stack.back();
            stack.pop_back();
            out.assignment[n] = val;
            for (NodeId p : g.parents(n))
                if (!clamped(p))
                    stack.emplace_back(p, choice.at({p, n})[val]);
        }
    }
    out.objective = total;
    return out;
}

std::map<NodeId, int> base_clamps(const CallGraph& g) {
    std::map<NodeId, int> clamps;
    for (const auto& nd : g.nodes())
        if (nd.is_data) clamps[nd.id] = 0;
    clamps[g.root()] = 0;
    return clamps;
}

SerialSolution finish_solution(const CallGraph& g, const SerialFactors& f,
                               const MinSumResult& ms) {
    SerialSolution sol;
    sol.objective = ms.objective;
    sol.degenerate_power = f.degenerate_power;
    sol.plan.decisions = ms.assignment;
    for (const auto& e : g.edges())
        if (sol.plan.is_uplink_edge(e.from, e.to))
            sol.plan.powers[{e.from, e.to}] = f.uplink_powers.at({e.from, e.to});
    return sol;
}

SerialSolution solve_with_factors(const CallGraph& g, const SerialFactors& f) {
    DecompositionReport dec = decompose(g);
    if (!dec.forest_after_removal) {
        SerialSolution sol;
        sol.status = SolveStatus::unsupported_structure;
        return sol;
    }
    std::vector<NodeId> free_seps;
    std::map<NodeId, int> clamps = base_clamps(g);
    for (NodeId s : dec.separators)
        if (!clamps.count(s)) free_seps.push_back(s);

    MinSumResult best_ms;
    bool have = false;
    const size_t combos = size_t{1} << free_seps.size();
    for (size_t mask = 0; mask < combos; ++mask) {
        std::map<NodeId, int> cl = clamps;
        for (size_t i = 0; i < free_seps.size(); ++i)
            cl[free_seps[i]] = static_cast<int>((mask >> i) & 1);
        MinSumResult ms = min_sum_with_clamps(g, f, cl);
        if (!have || ms.objective < best_ms.objective) {
            best_ms = std::move(ms);
            have = true;
        }
    }
    return finish_solution(g, f, best_ms);
}

}  // namespace

SerialSolution solve_serial_tree(const CallGraph& g, const PlatformProfile& prof,
                                 double lambda) {
    if (!decompose(g).is_tree) {
        SerialSolution sol;
        sol.status = SolveStatus::not_a_tree;
        return sol;
    }
    SerialFactors f = build_factors(g, prof, lambda);
    return finish_solution(g, f, min_sum_with_clamps(g, f, base_clamps(g)));
}

SerialSolution solve_serial_general(const CallGraph& g, const PlatformProfile& prof,
                                    double lambda) {
    return solve_with_factors(g, build_factors(g, prof, lambda));
}

namespace {

int sweep_threads() {
    if (const char* env = std::getenv("OFFLOAD_OPT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_for(size_t count, Fn fn) {
    int threads = std::min<int>(sweep_threads(), static_cast<int>(count));
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t]() {
            for (size_t i = static_cast<size_t>(t); i < count;
                 i += static_cast<size_t>(threads))
                fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<SerialSweepPoint> sweep_lambda(const CallGraph& g,
                                           const PlatformProfile& prof,
                                           const std::vector<double>& lambdas) {
    if (!std::is_sorted(lambdas.begin(), lambdas.end()))
        throw std::invalid_argument("sweep_lambda: lambdas must be ascending");
    std::vector<SerialSweepPoint> rows(lambdas.size());
    parallel_for(lambdas.size(), [&](size_t i) {
        SerialSolution sol = solve_serial_general(g, prof, lambdas[i]);
        SerialEval ev = evaluate_serial(g, prof, sol.plan);
        rows[i] = {lambdas[i], ev.value.energy_j, ev.value.latency_s, sol.plan};
    });
    return rows;
}

SeparateDesignResult separate_design_serial(const CallGraph& g,
                                            const PlatformProfile& prof) {
    SeparateDesignResult out;
    std::map<EdgeKey, double> powers;
    ConcurrencyProfile serial_conc;  // all 1
    for (const auto& e : g.edges()) {
        std::string name = std::to_string(e.from) + "->" + std::to_string(e.to);
        double ll = g.node(e.to).cycles / prof.f_local;
        double p;
        if (ll <= 0.0) {
            p = prof.p_max;
            out.flags.push_back("zero-local-time " + name);
        } else {
            DurationPower dp = power_for_duration(e.bits, ll, prof, serial_conc);
            p = dp.power;
            if (dp.exceeds_cap) {
                p = prof.p_max;
                out.flags.push_back("power-capped " + name);
            }
            p = std::max(p, prof.p_min);
        }
        powers[{e.from, e.to}] = p;
    }
    // decisions optimized on pure energy with the physical layer frozen
    SerialFactors f = build_factors_with_powers(g, prof, 0.0, powers);
    SerialSolution sol = solve_with_factors(g, f);
    out.plan = sol.plan;
    SerialEval ev = evaluate_serial(g, prof, out.plan);
    out.energy_j = ev.value.energy_j;
    out.latency_s = ev.value.latency_s;
    return out;
}

}  // namespace offload
