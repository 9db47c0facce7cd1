#include "offload/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace offload {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<NodeId> free_nodes(const CallGraph& g) {
    std::vector<NodeId> out;
    for (const auto& nd : g.nodes())
        if (!nd.is_data && nd.id != g.root()) out.push_back(nd.id);
    return out;
}

}  // namespace

OracleResult brute_force_serial(const CallGraph& g, const PlatformProfile& prof,
                                double lambda, int limit) {
    OracleResult out;
    std::vector<NodeId> free = free_nodes(g);
    if (static_cast<int>(free.size()) > limit) {
        out.status = SolveStatus::limit_exceeded;
        return out;
    }
    PowerChoice pc = optimal_serial_power(prof, lambda);

    double best = kInf;
    const size_t combos = size_t{1} << free.size();
    for (size_t mask = 0; mask < combos; ++mask) {
        OffloadPlan plan;
        for (const auto& nd : g.nodes()) plan.decisions[nd.id] = 0;
        for (size_t i = 0; i < free.size(); ++i)
            plan.decisions[free[i]] = static_cast<int>((mask >> i) & 1);
        for (const auto& e : g.edges())
            if (plan.is_uplink_edge(e.from, e.to))
                plan.powers[{e.from, e.to}] = pc.power;
        SerialEval ev = evaluate_serial(g, prof, plan);
        double obj = ev.value.energy_j + lambda * ev.value.latency_s;
        ++out.enumerated;
        if (obj < best) {
            best = obj;
            out.plan = plan;
        }
    }
    out.objective = best;
    return out;
}

OracleResult brute_force_parallel(const CallGraph& g, const PlatformProfile& prof,
                                  const ConcurrencyProfile& conc, double lmax,
                                  int power_grid_points, int limit) {
    if (power_grid_points < 1)
        throw std::invalid_argument("brute_force_parallel: empty power grid");
    OracleResult out;
    std::vector<NodeId> free = free_nodes(g);
    if (static_cast<int>(free.size()) > limit) {
        out.status = SolveStatus::limit_exceeded;
        return out;
    }

    // child -> unique child lookup for the fixed-residual path walk; only
    // trees are oracle targets, matching the solver being verified
    auto unique_child = [&](NodeId n) -> NodeId {
        const auto& cs = g.children(n);
        if (cs.size() != 1)
            throw std::invalid_argument("brute_force_parallel: graph is not a tree");
        return cs.front();
    };

    double best = kInf;
    const size_t combos = size_t{1} << free.size();
    for (size_t mask = 0; mask < combos; ++mask) {
        OffloadPlan plan;
        for (const auto& nd : g.nodes()) plan.decisions[nd.id] = 0;
        for (size_t i = 0; i < free.size(); ++i)
            plan.decisions[free[i]] = static_cast<int>((mask >> i) & 1);

        std::vector<EdgeKey> ul_edges;
        for (const auto& e : g.edges())
            if (plan.is_uplink_edge(e.from, e.to)) ul_edges.push_back({e.from, e.to});
        if (static_cast<int>(ul_edges.size()) > 4) {
            out.status = SolveStatus::limit_exceeded;
            return out;
        }

        ParallelRates base = parallel_rates(0.0, prof, conc);
        std::vector<std::vector<double>> grids;
        bool assignment_ok = true;
        for (const auto& e : ul_edges) {
            // fixed delays on the receiving node's path to the root bound the
            // time the transfer itself can take
            double resid = 0.0;
            NodeId cur = e.second;
            while (true) {
                resid += plan.decision(cur) == 0
                             ? g.node(cur).cycles / base.f_l
                             : g.node(cur).cycles / base.f_r;
                if (cur == g.root()) break;
                NodeId next = unique_child(cur);
                if (plan.is_downlink_edge(cur, next))
                    resid += g.edge_bits(cur, next) / base.dl;
                cur = next;
            }
            double dmax = lmax - resid;
            if (dmax <= 0.0) {
                assignment_ok = false;
                break;
            }
            double p_min_eff =
                std::max(power_for_duration(g.edge_bits(e.first, e.second), dmax,
                                            prof, conc)
                             .power,
                         prof.p_min);
            p_min_eff = std::min(p_min_eff, prof.p_max);
            std::vector<double> grid(static_cast<size_t>(power_grid_points));
            if (power_grid_points == 1) {
                grid[0] = prof.p_max;
            } else {
                double ratio = std::pow(prof.p_max / p_min_eff,
                                        1.0 / (power_grid_points - 1));
                double p = p_min_eff;
                for (int i = 0; i < power_grid_points; ++i) {
                    grid[static_cast<size_t>(i)] = p;
                    p *= ratio;
                }
                grid.back() = prof.p_max;
            }
            grids.push_back(std::move(grid));
        }
        if (!assignment_ok) continue;

        std::vector<size_t> idx(ul_edges.size(), 0);
        bool done = false;
        while (!done) {
            for (size_t i = 0; i < ul_edges.size(); ++i)
                plan.powers[ul_edges[i]] = grids[i][idx[i]];
            ++out.enumerated;
            double lat = latency_recursion(g, prof, conc, plan);
            if (lat <= lmax) {
                double energy = evaluate_parallel_energy(g, prof, conc, plan);
                if (energy < best) {
                    best = energy;
                    out.plan = plan;
                }
            }
            done = true;
            for (size_t pos = 0; pos < idx.size(); ++pos) {
                if (++idx[pos] < grids[pos].size()) {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
    if (!(best < kInf)) {
        out.status = SolveStatus::infeasible_deadline;
        return out;
    }
    out.objective = best;
    return out;
}

}  // namespace offload
