#include "offload/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "offload/detail/threading.hpp"
#include "offload/simulator.hpp"

namespace offload {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kFarIndex = 1 << 28;  // consumption beyond any grid
}  // namespace

// ---------------------------------------------------------------------------
// QuantGrid
// ---------------------------------------------------------------------------

QuantGrid::QuantGrid(double deadline, double eps) : deadline_(deadline), eps_(eps) {
    if (eps <= 0.0) throw std::invalid_argument("QuantGrid: eps <= 0");
    if (deadline < 0.0) throw std::invalid_argument("QuantGrid: negative deadline");
    double r = deadline / eps;
    double rr = std::round(r);
    double fl = (std::abs(r - rr) <= 1e-9 * std::max(1.0, std::abs(r))) ? rr
                                                                        : std::floor(r);
    k_max_ = 1 + static_cast<int>(fl);
    while (k_max_ > 1 && value(k_max_) > deadline) --k_max_;
}

int QuantGrid::index_up(double t) const {
    if (t < 0.0) throw std::invalid_argument("QuantGrid::index_up: negative t");
    if (t == 0.0) return 1;
    if (!std::isfinite(t)) return kFarIndex;
    double r = t / eps_;
    double rr = std::round(r);
    double c = (std::abs(r - rr) <= 1e-9 * std::max(1.0, std::abs(r))) ? rr
                                                                       : std::ceil(r);
    if (c >= static_cast<double>(kFarIndex)) return kFarIndex;
    int k = 1 + static_cast<int>(c);
    while (value(k) < t) ++k;  // never report a grid value below t
    return k;
}

int QuantGrid::q_index(double t) const {
    if (t < 0.0) throw std::invalid_argument("QuantGrid::q_index: negative t");
    int k = index_up(t);
    if (t > 0.0 && t == value(k)) ++k;  // exact grid point opens the next slot
    return std::min(k, k_max_ + 1);
}

// ---------------------------------------------------------------------------
// Plan evaluators
// ---------------------------------------------------------------------------

double latency_recursion(const CallGraph& g, const PlatformProfile& prof,
                         const ConcurrencyProfile& conc, const OffloadPlan& plan) {
    ParallelRates base = parallel_rates(0.0, prof, conc);
    std::map<NodeId, double> done;
    for (NodeId n : topological_order(g)) {
        if (g.is_data(n)) {
            done[n] = 0.0;
            continue;
        }
        double ready = 0.0;
        for (NodeId m : g.parents(n)) {
            double t = done.at(m);
            if (plan.is_uplink_edge(m, n)) {
                double rate = parallel_uplink_rate(plan.power(m, n), prof, conc);
                t += rate > 0.0 ? g.edge_bits(m, n) / rate : kInf;
            } else if (plan.is_downlink_edge(m, n)) {
                t += g.edge_bits(m, n) / base.dl;
            }
            ready = std::max(ready, t);
        }
        double compute = plan.decision(n) == 0 ? g.node(n).cycles / base.f_l
                                               : g.node(n).cycles / base.f_r;
        done[n] = ready + compute;
    }
    return done.at(g.root());
}

double evaluate_parallel_energy(const CallGraph& g, const PlatformProfile& prof,
                                const ConcurrencyProfile& conc,
                                const OffloadPlan& plan) {
    ParallelRates base = parallel_rates(0.0, prof, conc);
    double E = 0.0;
    for (const auto& nd : g.nodes())
        if (!nd.is_data && plan.decision(nd.id) == 0)
            E += prof.p_local * nd.cycles / prof.f_local;
    for (const auto& e : g.edges()) {
        if (plan.is_uplink_edge(e.from, e.to)) {
            double p = plan.power(e.from, e.to);
            double rate = parallel_uplink_rate(p, prof, conc);
            double dur = rate > 0.0 ? e.bits / rate : kInf;
            if (p + prof.p_rf > 0.0) E += (p + prof.p_rf) * dur;
        } else if (plan.is_downlink_edge(e.from, e.to)) {
            E += (prof.p_rf + prof.p_rx) * e.bits / base.dl;
        }
    }
    return E;
}

// ---------------------------------------------------------------------------
// Per-edge uplink slot machinery
// ---------------------------------------------------------------------------

namespace {

struct SlotEntry {
    double tx_cost = kInf;  // transmit energy for a transfer landing in this slot
    double power = 0.0;
};

// For each landing slot j (total consumption L^r_n + duration quantizing to
// t_j), the feasible power window and its scalar-convex minimum.
std::vector<SlotEntry> build_slot_table(const PlatformProfile& prof,
                                        const ConcurrencyProfile& conc,
                                        const QuantGrid& grid, double bits,
                                        double child_remote_latency) {
    const int K = grid.k_max();
    std::vector<SlotEntry> slots(static_cast<size_t>(K) + 1);
    for (int j = 1; j <= K; ++j) {
        double d_hi = grid.value(j) - child_remote_latency;
        if (d_hi <= 0.0) continue;
        double p_lo = power_for_duration(bits, d_hi, prof, conc).power;
        double d_lo = grid.value(j - 1) - child_remote_latency;
        double p_hi = d_lo > 0.0 ? power_for_duration(bits, d_lo, prof, conc).power
                                 : kInf;
        if (!(p_lo < p_hi)) continue;
        PowerChoice pc =
            optimal_power_in_interval(bits, p_lo, p_hi, prof.p_rf, prof, conc);
        if (pc.infeasible) continue;
        slots[static_cast<size_t>(j)] = {pc.cost, pc.power};
    }
    return slots;
}

EdgePowerChoice select_slot(const std::vector<SlotEntry>& slots,
                            const std::vector<double>& parent_e_local, int k) {
    EdgePowerChoice out;
    out.cost = kInf;
    const int jmax = std::min<int>(k, static_cast<int>(slots.size()) - 1);
    for (int j = 1; j <= jmax; ++j) {
        const SlotEntry& se = slots[static_cast<size_t>(j)];
        if (!(se.tx_cost < kInf)) continue;
        int pidx = k - j;  // slot j consumes j index units of the budget
        double cont = (pidx >= 1 && pidx < static_cast<int>(parent_e_local.size()))
                          ? parent_e_local[static_cast<size_t>(pidx)]
                          : kInf;
        double cand = se.tx_cost + cont;
        if (cand < out.cost) {
            out.cost = cand;
            out.power = se.power;
            out.slot = j;
            out.feasible = true;
        }
    }
    return out;
}

}  // namespace

EdgePowerChoice edge_power_table(const PlatformProfile& prof,
                                 const ConcurrencyProfile& conc,
                                 const QuantGrid& grid,
                                 const std::vector<double>& parent_e_local,
                                 double bits, double child_remote_latency, int k) {
    auto slots = build_slot_table(prof, conc, grid, bits, child_remote_latency);
    return select_slot(slots, parent_e_local, k);
}

// ---------------------------------------------------------------------------
// DP over a node subset with optional ready-shifted pseudo sources
// ---------------------------------------------------------------------------

namespace {

struct PseudoSource {
    int side = 0;         // decision frozen by the separator assignment
    int ready_index = 1;  // first budget index at which the node is complete
};

struct DpProblem {
    const CallGraph* g = nullptr;
    const PlatformProfile* prof = nullptr;
    ConcurrencyProfile conc;
    const QuantGrid* grid = nullptr;
    std::set<NodeId> members;               // nodes the DP runs over
    std::map<NodeId, PseudoSource> pseudo;  // frozen sources inside members
    const std::map<EdgeKey, double>* frozen_powers = nullptr;  // separate design
};

struct RateContext {
    double dl_rate = 0.0;
    double f_l = 0.0;
    double f_r = 0.0;
};

RateContext rates_of(const DpProblem& pb) {
    ParallelRates r = parallel_rates(0.0, *pb.prof, pb.conc);
    return {r.dl, r.f_l, r.f_r};
}

double table_at(const std::vector<double>& tab, int k) {
    if (k < 1 || k >= static_cast<int>(tab.size())) return kInf;
    return tab[static_cast<size_t>(k)];
}

DpTables run_dp(const DpProblem& pb) {
    const CallGraph& g = *pb.g;
    const PlatformProfile& prof = *pb.prof;
    const QuantGrid& grid = *pb.grid;
    const RateContext rc = rates_of(pb);
    const int K = grid.k_max();

    DpTables t;
    for (NodeId n : topological_order(g)) {
        if (!pb.members.count(n)) continue;
        auto& el = t.e_local[n];
        auto& er = t.e_remote[n];
        el.assign(static_cast<size_t>(K) + 1, kInf);
        er.assign(static_cast<size_t>(K) + 1, kInf);

        if (auto it = pb.pseudo.find(n); it != pb.pseudo.end()) {
            auto& tab = it->second.side == 0 ? el : er;
            for (int k = std::max(1, it->second.ready_index); k <= K; ++k)
                tab[static_cast<size_t>(k)] = 0.0;
            continue;
        }
        if (g.is_data(n)) {
            for (int k = 1; k <= K; ++k) el[static_cast<size_t>(k)] = 0.0;
            continue;
        }

        const double ll_par = g.node(n).cycles / rc.f_l;
        const double lr_par = g.node(n).cycles / rc.f_r;
        const double local_energy = prof.p_local * g.node(n).cycles / prof.f_local;
        const int used_local = consumed_indices(grid, ll_par);
        const int used_remote = consumed_indices(grid, lr_par);

        struct ParentCtx {
            NodeId m = 0;
            double dl_cost = 0.0;
            int used_local_dl = 0;
            std::vector<SlotEntry> slots;
            int frozen_slot = 0;  // consumption when the power is frozen
            double frozen_tx = kInf;
            double frozen_power = 0.0;
        };
        std::vector<ParentCtx> parents;
        for (NodeId m : g.parents(n)) {
            if (!pb.members.count(m))
                throw std::logic_error("run_dp: parent outside the DP node set");
            ParentCtx ctx;
            ctx.m = m;
            double bits = g.edge_bits(m, n);
            double dl_delay = bits / rc.dl_rate;
            ctx.dl_cost = (prof.p_rf + prof.p_rx) * dl_delay;
            ctx.used_local_dl = consumed_indices(grid, ll_par + dl_delay);
            if (pb.frozen_powers != nullptr) {
                auto itp = pb.frozen_powers->find({m, n});
                double p = itp == pb.frozen_powers->end() ? 0.0 : itp->second;
                double rate = parallel_uplink_rate(p, prof, pb.conc);
                if (rate > 0.0) {
                    double dur = bits / rate;
                    ctx.frozen_tx = (p + prof.p_rf) * dur;
                    ctx.frozen_power = p;
                    ctx.frozen_slot = consumed_indices(grid, lr_par + dur);
                }
            } else {
                ctx.slots = build_slot_table(prof, pb.conc, grid, bits, lr_par);
            }
            parents.push_back(std::move(ctx));
        }

        for (auto& ctx : parents) {
            t.choice_local[{ctx.m, n}].assign(static_cast<size_t>(K) + 1, 0);
            t.choice_remote[{ctx.m, n}].assign(static_cast<size_t>(K) + 1, 0);
            t.edge_power[{ctx.m, n}].assign(static_cast<size_t>(K) + 1, 0.0);
            t.edge_slot[{ctx.m, n}].assign(static_cast<size_t>(K) + 1, 0);
        }

        for (int k = 1; k <= K; ++k) {
            double sum_l = local_energy;
            double sum_r = 0.0;
            for (auto& ctx : parents) {
                const auto& pel = t.e_local.at(ctx.m);
                const auto& per = t.e_remote.at(ctx.m);
                // child local: parent local (no transfer) vs parent remote (dl)
                double a = table_at(pel, k - used_local);
                double b = table_at(per, k - ctx.used_local_dl) + ctx.dl_cost;
                if (b < a) {
                    sum_l += b;
                    t.choice_local[{ctx.m, n}][static_cast<size_t>(k)] = 1;
                } else {
                    sum_l += a;
                }
                // child remote: parent local (uplink) vs parent remote
                EdgePowerChoice up;
                if (pb.frozen_powers != nullptr) {
                    up.cost = ctx.frozen_tx + table_at(pel, k - ctx.frozen_slot);
                    up.power = ctx.frozen_power;
                    up.slot = ctx.frozen_slot;
                    up.feasible = up.cost < kInf;
                } else {
                    up = select_slot(ctx.slots, pel, k);
                }
                double c = table_at(per, k - used_remote);
                if (up.feasible && up.cost <= c) {
                    sum_r += up.cost;
                    t.edge_power[{ctx.m, n}][static_cast<size_t>(k)] = up.power;
                    t.edge_slot[{ctx.m, n}][static_cast<size_t>(k)] = up.slot;
                } else {
                    sum_r += c;
                    t.choice_remote[{ctx.m, n}][static_cast<size_t>(k)] = 1;
                }
            }
            el[static_cast<size_t>(k)] = sum_l;
            er[static_cast<size_t>(k)] = sum_r;
        }
    }
    return t;
}

// Replays the recorded choices from (start, k, side), filling decisions and
// uplink powers. Pseudo and data nodes terminate the walk.
void backtrack_dp(const DpProblem& pb, const DpTables& t, NodeId start, int start_k,
                  int start_side, OffloadPlan& plan) {
    const CallGraph& g = *pb.g;
    const QuantGrid& grid = *pb.grid;
    const RateContext rc = rates_of(pb);

    std::vector<std::tuple<NodeId, int, int>> stack{{start, start_k, start_side}};
    while (!stack.empty()) {
        auto [n, k, side] = stack.back();
        stack.pop_back();
        plan.decisions[n] = g.is_data(n) ? 0 : side;
        if (g.is_data(n) || pb.pseudo.count(n)) continue;

        const double ll_par = g.node(n).cycles / rc.f_l;
        const double lr_par = g.node(n).cycles / rc.f_r;
        for (NodeId m : g.parents(n)) {
            double dl_delay = g.edge_bits(m, n) / rc.dl_rate;
            if (side == 0) {
                if (t.choice_local.at({m, n})[static_cast<size_t>(k)] == 0)
                    stack.emplace_back(m, k - consumed_indices(grid, ll_par), 0);
                else
                    stack.emplace_back(
                        m, k - consumed_indices(grid, ll_par + dl_delay), 1);
            } else {
                if (t.choice_remote.at({m, n})[static_cast<size_t>(k)] == 0) {
                    plan.powers[{m, n}] =
                        t.edge_power.at({m, n})[static_cast<size_t>(k)];
                    stack.emplace_back(
                        m, k - t.edge_slot.at({m, n})[static_cast<size_t>(k)], 0);
                } else {
                    stack.emplace_back(m, k - consumed_indices(grid, lr_par), 1);
                }
            }
        }
    }
}

std::set<NodeId> all_node_ids(const CallGraph& g) {
    std::set<NodeId> ids;
    for (const auto& nd : g.nodes()) ids.insert(nd.id);
    return ids;
}

ParallelSolution solve_tree_impl(const CallGraph& g, const PlatformProfile& prof,
                                 const ConcurrencyProfile& conc, const QuantGrid& grid,
                                 const std::map<EdgeKey, double>* frozen_powers) {
    ParallelSolution sol;
    if (!decompose(g).is_tree) {
        sol.status = SolveStatus::not_a_tree;
        return sol;
    }
    DpProblem pb{&g, &prof, conc, &grid, all_node_ids(g), {}, frozen_powers};
    DpTables t = run_dp(pb);
    const int K = grid.k_max();
    double best = table_at(t.e_local.at(g.root()), K);
    if (!(best < kInf)) {
        sol.status = SolveStatus::infeasible_deadline;
        return sol;
    }
    sol.energy_j = best;
    backtrack_dp(pb, t, g.root(), K, 0, sol.plan);
    return sol;
}

// ---------------------------------------------------------------------------
// Separator-core enumeration for general graphs
// ---------------------------------------------------------------------------

struct Branch {
    NodeId sink = 0;                // parent of the root this branch feeds
    std::set<NodeId> nodes;         // residual members (sink included)
    std::set<NodeId> core_sources;  // core parents feeding the branch
    bool has_data_leaf = false;
    bool shiftable = false;  // single core source and no data leaves
};

// Candidate duration for one core uplink edge.
struct UlCand {
    double sched_delay = 0.0;  // conservative transfer time used for scheduling
    double power = 0.0;
    double energy = 0.0;
};

ParallelSolution solve_general_impl(const CallGraph& g, const PlatformProfile& prof,
                                    const ConcurrencyProfile& conc,
                                    const QuantGrid& grid,
                                    const std::map<EdgeKey, double>* frozen_powers) {
    DecompositionReport dec = decompose(g);
    if (dec.is_tree) return solve_tree_impl(g, prof, conc, grid, frozen_powers);

    ParallelSolution sol;
    if (!dec.forest_after_removal) {
        sol.status = SolveStatus::unsupported_structure;
        return sol;
    }

    const std::set<NodeId> core = ancestors_closure(g, dec.separators);
    const int K = grid.k_max();
    ParallelRates base = parallel_rates(0.0, prof, conc);

    std::vector<NodeId> core_topo;
    for (NodeId n : topological_order(g))
        if (core.count(n)) core_topo.push_back(n);
    std::vector<NodeId> free_core;
    for (NodeId n : core_topo)
        if (!g.is_data(n)) free_core.push_back(n);

    std::vector<Branch> branches;
    std::map<NodeId, size_t> branch_of_sink;
    for (NodeId p : g.parents(g.root())) {
        if (core.count(p)) continue;
        Branch b;
        b.sink = p;
        std::vector<NodeId> stack{p};
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            if (!b.nodes.insert(u).second) continue;
            if (g.is_data(u)) b.has_data_leaf = true;
            for (NodeId m : g.parents(u)) {
                if (core.count(m))
                    b.core_sources.insert(m);
                else
                    stack.push_back(m);
            }
        }
        b.shiftable = b.core_sources.size() == 1 && !b.has_data_leaf;
        branch_of_sink[p] = branches.size();
        branches.push_back(std::move(b));
    }

    // coupling variables: completion indices of core nodes with residual
    // children (completion of everything else is dominated downstream)
    std::vector<NodeId> boundary;
    for (NodeId n : core_topo) {
        bool has_res_child = false;
        for (NodeId c : g.children(n))
            if (!core.count(c)) has_res_child = true;
        if (has_res_child) boundary.push_back(n);
    }
    std::map<NodeId, size_t> boundary_dim;
    for (size_t i = 0; i < boundary.size(); ++i) boundary_dim[boundary[i]] = i;

    const double ll_root_par = g.node(g.root()).cycles / base.f_l;
    const double root_energy = prof.p_local * g.node(g.root()).cycles / prof.f_local;
    const int root_used_local = consumed_indices(grid, ll_root_par);

    struct Best {
        double total = kInf;
        std::map<NodeId, int> sigma;
        std::map<EdgeKey, UlCand> core_ul_choice;
        std::vector<int> completion;
        std::map<NodeId, int> root_parent_side;
    } best;

    const size_t sigma_count = size_t{1} << free_core.size();
    for (size_t mask = 0; mask < sigma_count; ++mask) {
        std::map<NodeId, int> sigma;
        for (NodeId n : core_topo) sigma[n] = 0;
        for (size_t i = 0; i < free_core.size(); ++i)
            sigma[free_core[i]] = static_cast<int>((mask >> i) & 1);

        double core_fixed_energy = 0.0;
        std::vector<EdgeKey> core_ul;
        for (NodeId n : core_topo) {
            if (!g.is_data(n) && sigma[n] == 0)
                core_fixed_energy += prof.p_local * g.node(n).cycles / prof.f_local;
            for (NodeId m : g.parents(n)) {
                if (sigma[m] == 0 && sigma[n] == 1) core_ul.push_back({m, n});
                if (sigma[m] == 1 && sigma[n] == 0)
                    core_fixed_energy +=
                        (prof.p_rf + prof.p_rx) * g.edge_bits(m, n) / base.dl;
            }
        }

        // duration candidates per core uplink edge: the grid of slot-aligned
        // transfer times, or the single duration the frozen power implies
        std::vector<std::vector<UlCand>> ul_cands;
        bool sigma_feasible = true;
        for (const auto& e : core_ul) {
            std::vector<UlCand> cands;
            double bits = g.edge_bits(e.first, e.second);
            if (frozen_powers != nullptr) {
                auto itp = frozen_powers->find(e);
                double p = itp == frozen_powers->end() ? 0.0 : itp->second;
                double rate = parallel_uplink_rate(p, prof, conc);
                if (rate > 0.0) {
                    double dur = bits / rate;
                    cands.push_back({dur, p, (p + prof.p_rf) * dur});
                }
            } else {
                for (int j = 1; j <= K - 1; ++j) {
                    double d = static_cast<double>(j) * grid.eps();
                    DurationPower dp = power_for_duration(bits, d, prof, conc);
                    if (dp.exceeds_cap) continue;
                    double p = std::max(dp.power, prof.p_min);
                    double rate = parallel_uplink_rate(p, prof, conc);
                    double dur = bits / rate;
                    cands.push_back({d, p, (p + prof.p_rf) * dur});
                }
            }
            if (cands.empty()) sigma_feasible = false;
            ul_cands.push_back(std::move(cands));
        }
        if (!sigma_feasible) continue;

        // sink tables per branch at ready index 1; non-shiftable branches are
        // re-solved per completion profile through the memo below
        std::vector<std::vector<double>> base_el(branches.size());
        std::vector<std::vector<double>> base_er(branches.size());
        for (size_t bi = 0; bi < branches.size(); ++bi) {
            const Branch& br = branches[bi];
            if (!br.core_sources.empty() && !br.shiftable) continue;
            DpProblem pb{&g, &prof, conc, &grid, br.nodes, {}, frozen_powers};
            for (NodeId src : br.core_sources) {
                pb.members.insert(src);
                pb.pseudo[src] = {sigma[src], 1};
            }
            DpTables t = run_dp(pb);
            base_el[bi] = t.e_local.at(br.sink);
            base_er[bi] = t.e_remote.at(br.sink);
        }
        std::map<std::vector<int>, std::pair<std::vector<double>, std::vector<double>>>
            slow_memo;  // per-branch source completions -> sink tables

        auto eval_branch = [&](size_t bi, const std::vector<int>& completion,
                               int idx_l, int idx_r, double dl_cost, double& cost_l,
                               double& cost_r) {
            const Branch& br = branches[bi];
            if (br.core_sources.empty() || br.shiftable) {
                int shift = 0;
                if (!br.core_sources.empty()) {
                    NodeId src = *br.core_sources.begin();
                    shift = completion[boundary_dim.at(src)] - 1;
                }
                cost_l = table_at(base_el[bi], idx_l - shift);
                cost_r = table_at(base_er[bi], idx_r - shift) + dl_cost;
                return;
            }
            std::vector<int> key{static_cast<int>(bi)};
            for (NodeId src : br.core_sources)
                key.push_back(completion[boundary_dim.at(src)]);
            auto it = slow_memo.find(key);
            if (it == slow_memo.end()) {
                DpProblem pb{&g, &prof, conc, &grid, br.nodes, {}, frozen_powers};
                size_t ki = 1;
                for (NodeId src : br.core_sources) {
                    pb.members.insert(src);
                    pb.pseudo[src] = {sigma[src], key[ki++]};
                }
                DpTables t = run_dp(pb);
                it = slow_memo
                         .emplace(key, std::make_pair(t.e_local.at(br.sink),
                                                      t.e_remote.at(br.sink)))
                         .first;
            }
            cost_l = table_at(it->second.first, idx_l);
            cost_r = table_at(it->second.second, idx_r) + dl_cost;
        };

        // enumerate duration combinations (single empty combo when no core
        // uplink edges exist)
        std::vector<size_t> idx(core_ul.size(), 0);
        bool done = false;
        while (!done) {
            double core_energy = core_fixed_energy;
            for (size_t i = 0; i < core_ul.size(); ++i)
                core_energy += ul_cands[i][idx[i]].energy;

            // completion times over the core
            std::map<NodeId, double> T;
            for (NodeId n : core_topo) {
                double ready = 0.0;
                for (NodeId m : g.parents(n)) {
                    double tm = T.at(m);
                    if (sigma[m] == 0 && sigma[n] == 1) {
                        size_t ei = 0;
                        while (!(core_ul[ei].first == m && core_ul[ei].second == n))
                            ++ei;
                        tm += ul_cands[ei][idx[ei]].sched_delay;
                    } else if (sigma[m] == 1 && sigma[n] == 0) {
                        tm += g.edge_bits(m, n) / base.dl;
                    }
                    ready = std::max(ready, tm);
                }
                double compute = 0.0;
                if (!g.is_data(n))
                    compute = sigma[n] == 0 ? g.node(n).cycles / base.f_l
                                            : g.node(n).cycles / base.f_r;
                T[n] = ready + compute;
            }
            bool combo_ok = true;
            std::vector<int> completion(boundary.size(), 1);
            for (size_t i = 0; i < boundary.size(); ++i) {
                double tt = T.at(boundary[i]);
                if (tt > grid.value(K)) {
                    combo_ok = false;
                    break;
                }
                completion[i] = grid.index_up(tt);
            }

            if (combo_ok) {
                double total = core_energy + root_energy;
                std::map<NodeId, int> parent_side;
                for (NodeId p : g.parents(g.root())) {
                    double bits = g.edge_bits(p, g.root());
                    double dl_delay = bits / base.dl;
                    double dl_cost = (prof.p_rf + prof.p_rx) * dl_delay;
                    int idx_l = K - root_used_local;
                    int idx_r = K - consumed_indices(grid, ll_root_par + dl_delay);
                    double cost_l = kInf, cost_r = kInf;
                    if (core.count(p)) {
                        int cp = completion[boundary_dim.at(p)];
                        if (sigma[p] == 0 && idx_l >= cp) cost_l = 0.0;
                        if (sigma[p] == 1 && idx_r >= cp) cost_r = dl_cost;
                    } else {
                        eval_branch(branch_of_sink.at(p), completion, idx_l, idx_r,
                                    dl_cost, cost_l, cost_r);
                    }
                    if (cost_r < cost_l) {
                        total += cost_r;
                        parent_side[p] = 1;
                    } else {
                        total += cost_l;
                        parent_side[p] = 0;
                    }
                    if (!(total < kInf)) break;
                }
                if (total < best.total) {
                    best.total = total;
                    best.sigma = sigma;
                    best.core_ul_choice.clear();
                    for (size_t i = 0; i < core_ul.size(); ++i)
                        best.core_ul_choice[core_ul[i]] = ul_cands[i][idx[i]];
                    best.completion = completion;
                    best.root_parent_side = parent_side;
                }
            }

            done = true;
            for (size_t pos = 0; pos < idx.size(); ++pos) {
                if (++idx[pos] < ul_cands[pos].size()) {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    if (!(best.total < kInf)) {
        sol.status = SolveStatus::infeasible_deadline;
        return sol;
    }

    sol.energy_j = best.total;
    for (NodeId n : core_topo) sol.plan.decisions[n] = best.sigma.at(n);
    sol.plan.decisions[g.root()] = 0;
    for (const auto& [e, cand] : best.core_ul_choice) sol.plan.powers[e] = cand.power;
    for (NodeId p : g.parents(g.root())) {
        if (core.count(p)) continue;
        const Branch& br = branches[branch_of_sink.at(p)];
        DpProblem pb{&g, &prof, conc, &grid, br.nodes, {}, frozen_powers};
        for (NodeId src : br.core_sources) {
            pb.members.insert(src);
            pb.pseudo[src] = {best.sigma.at(src),
                              best.completion[boundary_dim.at(src)]};
        }
        DpTables t = run_dp(pb);
        double bits = g.edge_bits(p, g.root());
        int side = best.root_parent_side.at(p);
        int start_k =
            side == 0 ? grid.k_max() - root_used_local
                      : grid.k_max() -
                            consumed_indices(grid, ll_root_par + bits / base.dl);
        OffloadPlan partial;
        backtrack_dp(pb, t, p, start_k, side, partial);
        for (const auto& [id, v] : partial.decisions)
            if (!core.count(id)) sol.plan.decisions[id] = v;
        for (const auto& [key, pw] : partial.powers) sol.plan.powers[key] = pw;
    }
    return sol;
}

}  // namespace

DpTables compute_tree_tables(const CallGraph& g, const PlatformProfile& prof,
                             const ConcurrencyProfile& conc, const QuantGrid& grid) {
    DpProblem pb{&g, &prof, conc, &grid, all_node_ids(g), {}, nullptr};
    return run_dp(pb);
}

ParallelSolution solve_parallel_tree(const CallGraph& g, const PlatformProfile& prof,
                                     const ConcurrencyProfile& conc,
                                     const QuantGrid& grid) {
    return solve_tree_impl(g, prof, conc, grid, nullptr);
}

ParallelSolution solve_parallel_general(const CallGraph& g,
                                        const PlatformProfile& prof,
                                        const ConcurrencyProfile& conc,
                                        const QuantGrid& grid) {
    return solve_general_impl(g, prof, conc, grid, nullptr);
}

SeparateDesignParallel separate_design_parallel(const CallGraph& g,
                                                const PlatformProfile& prof,
                                                const ConcurrencyProfile& conc,
                                                const QuantGrid& grid) {
    SeparateDesignParallel out;
    std::map<EdgeKey, double> powers;
    for (const auto& e : g.edges()) {
        std::string name = std::to_string(e.from) + "->" + std::to_string(e.to);
        double ll = g.node(e.to).cycles / prof.f_local;
        double p;
        if (ll <= 0.0) {
            p = prof.p_max;
            out.flags.push_back("zero-local-time " + name);
        } else {
            DurationPower dp = power_for_duration(e.bits, ll, prof, conc);
            p = dp.power;
            if (dp.exceeds_cap) {
                p = prof.p_max;
                out.flags.push_back("power-capped " + name);
            }
            p = std::max(p, prof.p_min);
        }
        powers[{e.from, e.to}] = p;
    }
    ParallelSolution sol = solve_general_impl(g, prof, conc, grid, &powers);
    out.status = sol.status;
    if (sol.status != SolveStatus::ok) return out;
    out.plan = sol.plan;
    out.energy_j = sol.energy_j;
    out.latency_s = latency_recursion(g, prof, conc, out.plan);
    return out;
}

AutoConcResult solve_parallel_auto(const CallGraph& g, const PlatformProfile& prof,
                                   const QuantGrid& grid, double eps_d) {
    AutoConcResult best;
    best.solution.status = SolveStatus::infeasible_deadline;
    bool have = false;
    bool best_feasible = false;
    for (int n = 1; n <= 4; ++n) {
        ConcurrencyProfile conc{n, n, n, n};
        ParallelSolution sol = solve_parallel_general(g, prof, conc, grid);
        if (sol.status != SolveStatus::ok) continue;
        SimResult sim = run(g, prof, sol.plan, eps_d);
        bool feasible = !sim.stalled && sim.latency_s <= grid.deadline();
        bool take = false;
        if (!have)
            take = true;
        else if (feasible != best_feasible)
            take = feasible;
        else if (feasible)
            take = sim.energy_j < best.sim_energy_j;
        else
            take = sim.latency_s < best.sim_latency_s;
        if (take) {
            best.solution = sol;
            best.conc = n;
            best.sim_energy_j = sim.energy_j;
            best.sim_latency_s = sim.latency_s;
            best_feasible = feasible;
            have = true;
        }
    }
    return best;
}

std::vector<ParallelSweepRow> sweep_deadline(const CallGraph& g,
                                             const PlatformProfile& prof, int conc,
                                             const std::vector<double>& lmax_list,
                                             double eps, double eps_d) {
    std::vector<ParallelSweepRow> rows(lmax_list.size());
    detail::parallel_for(lmax_list.size(), [&](size_t i) {
        ParallelSweepRow row;
        row.lmax_s = lmax_list[i];
        row.eps_s = eps;
        QuantGrid grid(lmax_list[i], eps);
        ParallelSolution sol;
        if (conc <= 0) {
            AutoConcResult ac = solve_parallel_auto(g, prof, grid, eps_d);
            sol = ac.solution;
            row.conc = ac.conc;
        } else {
            ConcurrencyProfile cp{conc, conc, conc, conc};
            sol = solve_parallel_general(g, prof, cp, grid);
            row.conc = conc;
        }
        row.status = sol.status;
        if (sol.status == SolveStatus::ok) {
            ConcurrencyProfile cp{row.conc, row.conc, row.conc, row.conc};
            row.dp_energy_j = sol.energy_j;
            row.recursion_latency_s = latency_recursion(g, prof, cp, sol.plan);
            SimResult sim = run(g, prof, sol.plan, eps_d);
            row.sim_energy_j = sim.energy_j;
            row.sim_latency_s = sim.latency_s;
            row.plan = sol.plan;
        } else {
            row.dp_energy_j = kInf;
            row.recursion_latency_s = kInf;
            row.sim_energy_j = kInf;
            row.sim_latency_s = kInf;
        }
        rows[i] = row;
    });
    return rows;
}

}  // namespace offload
