#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "offload/io.hpp"
#include "offload/oracle.hpp"
#include "offload/parallel.hpp"

using namespace offload;
using doctest::Approx;

namespace {

PlatformProfile bench_profile() {
    PlatformProfile p;
    p.snr_gain = std::pow(10.0, 2.7);
    return p;
}

const ConcurrencyProfile kOne{1, 1, 1, 1};

CallGraph chain3() {
    return CallGraph({{1, 0.0, true}, {2, 1e9, false}, {3, 1e9, false}},
                     {{1, 2, 1e6}, {2, 3, 1e6}}, 3);
}

}  // namespace

TEST_CASE("quantization grid") {
    QuantGrid grid(2.0, 0.1);
    SUBCASE("half-open conventions") {
        CHECK(grid.grid_value(0.25) == Approx(0.3).epsilon(1e-12));
        CHECK(grid.q_index(0.25) == 4);
        CHECK(grid.index_up(0.2) == 3);  // exact grid point keeps its index
        CHECK(grid.grid_value(0.2) == Approx(0.2).epsilon(1e-15));
        CHECK(grid.q_index(0.2) == 4);  // but opens the next slot
        CHECK(grid.index_up(0.0) == 1);
        CHECK(grid.grid_value(0.0) == 0.0);
        CHECK(grid.q_index(0.0) == 1);
    }
    SUBCASE("deadline cap") {
        CHECK(grid.k_max() == 21);
        CHECK(grid.value(grid.k_max()) == Approx(2.0).epsilon(1e-15));
        CHECK(grid.q_index(2.0) == 22);   // at the horizon
        CHECK(grid.q_index(50.0) == 22);  // far past it
    }
    SUBCASE("t_K never exceeds the deadline") {
        for (double lmax : {2.0, 4.0, 8.0, 6.0, 13.7}) {
            for (double eps : {0.05, 0.1, 0.025}) {
                QuantGrid q(lmax, eps);
                CHECK(q.value(q.k_max()) <= lmax);
                CHECK(q.value(q.k_max() + 1) > lmax);
            }
        }
        CHECK(QuantGrid(8.0, 0.05).k_max() == 161);
    }
    SUBCASE("index_up never rounds below its argument") {
        std::mt19937 rng(4);
        QuantGrid q(10.0, 0.05);
        for (int i = 0; i < 2000; ++i) {
            double t = std::uniform_real_distribution<double>(0.0, 9.0)(rng);
            CHECK(q.value(q.index_up(t)) >= t);
        }
    }
}

TEST_CASE("latency recursion") {
    PlatformProfile prof = bench_profile();
    SUBCASE("all-local chain is a straight sum") {
        CallGraph g = chain3();
        ConcurrencyProfile conc{1, 1, 2, 1};
        double lat = latency_recursion(g, prof, conc, all_local_plan(g));
        CHECK(lat == Approx(2e9 / (prof.f_local / 2.0)).epsilon(1e-12));
    }
    SUBCASE("all-local fig8 is the critical compute path") {
        CallGraph g = load_graph("fixtures/fig8.json");
        double lat = latency_recursion(g, prof, kOne, all_local_plan(g));
        CHECK(lat == Approx(6.0).epsilon(1e-12));  // 2-4-9-12-14-15 path
    }
    SUBCASE("matches an independent max-plus evaluation on the t2 scenario") {
        CallGraph g = load_graph("fixtures/t2subtree.json");
        OffloadPlan plan = all_local_plan(g);
        plan.decisions[4] = 1;
        plan.decisions[5] = 1;
        plan.powers[{1, 4}] = 0.03;
        plan.powers[{2, 4}] = 0.02;
        plan.powers[{3, 5}] = 0.05;
        double lat = latency_recursion(g, prof, kOne, plan);
        auto ul = [&](double bits, double p) {
            return bits / (prof.bandwidth * std::log2(1.0 + prof.snr_gain * p));
        };
        double t4 = std::max(ul(1.2e6, 0.03), ul(1.2e6, 0.02)) + 1e9 / prof.f_remote;
        double t5 = ul(5e6, 0.05) + 6e8 / prof.f_remote;
        double t6 = std::max(t4 + 5e6 / prof.c_dl, t5 + 5e6 / prof.c_dl) +
                    2e9 / prof.f_local;
        CHECK(lat == Approx(t6).epsilon(1e-12));
    }
    SUBCASE("zero-power uplink edge gives infinite latency") {
        CallGraph g = chain3();
        OffloadPlan plan = all_local_plan(g);
        plan.decisions[2] = 1;
        CHECK(std::isinf(latency_recursion(g, prof, kOne, plan)));
    }
}

TEST_CASE("edge power table") {
    PlatformProfile prof = bench_profile();
    prof.p_rf = 0.05;
    QuantGrid grid(4.0, 0.05);
    const int K = grid.k_max();
    SUBCASE("flat parent tables reduce to the unconstrained minimum") {
        std::vector<double> flat(static_cast<size_t>(K) + 1, 0.0);
        EdgePowerChoice ch = edge_power_table(prof, kOne, grid, flat, 4e6, 0.1, K);
        REQUIRE(ch.feasible);
        PowerChoice unconstrained = optimal_serial_power(prof, 0.0);
        CHECK(ch.cost == Approx(unconstrained.cost * 4e6).epsilon(1e-6));
        CHECK(ch.power == Approx(unconstrained.power).epsilon(1e-3));
    }
    SUBCASE("tight budgets pick the fastest feasible slot") {
        std::vector<double> flat(static_cast<size_t>(K) + 1, 0.0);
        // 4e5 bits fit the first slot past the remote compute time, but only
        // near the top of its power window
        int jmin = grid.q_index(0.1);
        EdgePowerChoice ch =
            edge_power_table(prof, kOne, grid, flat, 4e5, 0.1, jmin + 1);
        REQUIRE(ch.feasible);
        CHECK(ch.slot == jmin);
        CHECK(ch.power > 0.4);  // top region of the window
        CHECK(!edge_power_table(prof, kOne, grid, flat, 4e5, 0.1, jmin).feasible);
    }
    SUBCASE("matches a dense 2-d scan over slots and powers") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 8; ++trial) {
            double bits = std::uniform_real_distribution<double>(5e5, 8e6)(rng);
            double lr = std::uniform_real_distribution<double>(0.0, 0.4)(rng);
            int k = std::uniform_int_distribution<int>(8, K)(rng);
            std::vector<double> parent(static_cast<size_t>(K) + 1, 0.0);
            double v = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
            for (int i = K; i >= 1; --i) {
                parent[static_cast<size_t>(i)] = v;
                if (std::bernoulli_distribution(0.2)(rng))
                    v += std::uniform_real_distribution<double>(0.0, 0.3)(rng);
            }
            EdgePowerChoice ch = edge_power_table(prof, kOne, grid, parent, bits, lr, k);
            double best = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= k; ++j) {
                int pidx = k - j;
                if (pidx < 1) continue;
                double d_hi = grid.value(j) - lr;
                if (d_hi <= 0.0) continue;
                double p_lo = power_for_duration(bits, d_hi, prof, kOne).power;
                double d_lo = grid.value(j - 1) - lr;
                double p_hi = d_lo > 0.0
                                  ? power_for_duration(bits, d_lo, prof, kOne).power
                                  : prof.p_max;
                p_lo = std::max(p_lo, prof.p_min);
                p_hi = std::min(p_hi, prof.p_max);
                if (p_lo > p_hi) continue;
                for (int i = 0; i <= 4000; ++i) {
                    double pw = p_lo + (p_hi - p_lo) * i / 4000.0;
                    double rate = parallel_uplink_rate(pw, prof, kOne);
                    if (rate <= 0.0) continue;
                    double cand = (pw + prof.p_rf) * bits / rate +
                                  parent[static_cast<size_t>(pidx)];
                    best = std::min(best, cand);
                }
            }
            if (!ch.feasible) {
                CHECK(std::isinf(best));
            } else {
                CHECK(ch.cost <= best * (1.0 + 1e-6));
                CHECK(ch.cost >= best * (1.0 - 1e-6));
            }
        }
    }
}

TEST_CASE("tree dp tables") {
    PlatformProfile prof = bench_profile();
    CallGraph g = load_graph("fixtures/t2subtree.json");
    QuantGrid grid(4.0, 0.05);
    DpTables t = compute_tree_tables(g, prof, kOne, grid);
    SUBCASE("tables are nonincreasing in the budget") {
        for (const auto& [n, tab] : t.e_local)
            for (size_t k = 2; k < tab.size(); ++k) CHECK(tab[k] <= tab[k - 1]);
        for (const auto& [n, tab] : t.e_remote)
            for (size_t k = 2; k < tab.size(); ++k) CHECK(tab[k] <= tab[k - 1]);
    }
    SUBCASE("data nodes are free and never remote") {
        for (NodeId n : {1, 2, 3}) {
            CHECK(t.e_local.at(n)[1] == 0.0);
            CHECK(std::isinf(t.e_remote.at(n)[grid.k_max()]));
        }
    }
}

TEST_CASE("parallel tree solver") {
    PlatformProfile prof = bench_profile();
    CallGraph g = load_graph("fixtures/t2subtree.json");
    SUBCASE("generous deadlines never cost more than all-local") {
        double crit = latency_recursion(g, prof, kOne, all_local_plan(g));
        QuantGrid grid(crit + 1.0, 0.05);
        ParallelSolution sol = solve_parallel_tree(g, prof, kOne, grid);
        REQUIRE(sol.status == SolveStatus::ok);
        double all_local_energy =
            evaluate_parallel_energy(g, prof, kOne, all_local_plan(g));
        CHECK(sol.energy_j <= all_local_energy * (1.0 + 1e-12));
    }
    SUBCASE("impossible deadlines are reported") {
        QuantGrid grid(2.0, 0.05);
        CHECK(solve_parallel_tree(g, prof, kOne, grid).status ==
              SolveStatus::infeasible_deadline);
    }
    SUBCASE("feasible by construction and inside the oracle sandwich") {
        QuantGrid grid(4.0, 0.05);
        ParallelSolution sol = solve_parallel_tree(g, prof, kOne, grid);
        REQUIRE(sol.status == SolveStatus::ok);
        CHECK(latency_recursion(g, prof, kOne, sol.plan) <= 4.0);
        CHECK(sol.energy_j ==
              Approx(evaluate_parallel_energy(g, prof, kOne, sol.plan)).epsilon(1e-9));
        OracleResult oracle = brute_force_parallel(g, prof, kOne, 4.0, 200);
        REQUIRE(oracle.status == SolveStatus::ok);
        CHECK(sol.energy_j >= oracle.objective * (1.0 - 1e-6));
        CHECK(sol.energy_j <= oracle.objective * 1.05);
    }
    SUBCASE("halving eps never increases the energy") {
        for (double lmax : {4.0, 8.0}) {
            ParallelSolution coarse =
                solve_parallel_tree(g, prof, kOne, QuantGrid(lmax, 0.05));
            ParallelSolution fine =
                solve_parallel_tree(g, prof, kOne, QuantGrid(lmax, 0.025));
            REQUIRE(coarse.status == SolveStatus::ok);
            REQUIRE(fine.status == SolveStatus::ok);
            CHECK(fine.energy_j <= coarse.energy_j * (1.0 + 1e-9));
        }
    }
    SUBCASE("refuses non-trees") {
        CallGraph fig8 = load_graph("fixtures/fig8.json");
        CHECK(solve_parallel_tree(fig8, prof, kOne, QuantGrid(6.0, 0.1)).status ==
              SolveStatus::not_a_tree);
    }
}

TEST_CASE("parallel general solver") {
    PlatformProfile prof = bench_profile();
    CallGraph fig8 = load_graph("fixtures/fig8.json");
    SUBCASE("tree input goes through unchanged") {
        CallGraph g = load_graph("fixtures/t2subtree.json");
        QuantGrid grid(4.0, 0.05);
        ParallelSolution a = solve_parallel_tree(g, prof, kOne, grid);
        ParallelSolution b = solve_parallel_general(g, prof, kOne, grid);
        CHECK(a.energy_j == Approx(b.energy_j).epsilon(1e-12));
        CHECK(decisions_bitstring(g, a.plan) == decisions_bitstring(g, b.plan));
    }
    SUBCASE("fig8 deadline is honored by the returned plan") {
        QuantGrid grid(6.0, 0.1);
        ParallelSolution sol = solve_parallel_general(fig8, prof, kOne, grid);
        REQUIRE(sol.status == SolveStatus::ok);
        CHECK(latency_recursion(fig8, prof, kOne, sol.plan) <= 6.0);
        CHECK(evaluate_parallel_energy(fig8, prof, kOne, sol.plan) ==
              Approx(sol.energy_j).epsilon(1e-9));
    }
    SUBCASE("energy falls as the deadline relaxes") {
        double prev = std::numeric_limits<double>::infinity();
        for (double lmax : {4.0, 6.0, 8.0, 10.0, 14.0}) {
            ParallelSolution sol =
                solve_parallel_general(fig8, prof, kOne, QuantGrid(lmax, 0.2));
            REQUIRE(sol.status == SolveStatus::ok);
            CHECK(sol.energy_j <= prev * (1.0 + 1e-12));
            prev = sol.energy_j;
        }
    }
    SUBCASE("eps refinement on the general path") {
        ParallelSolution coarse =
            solve_parallel_general(fig8, prof, kOne, QuantGrid(6.0, 0.2));
        ParallelSolution fine =
            solve_parallel_general(fig8, prof, kOne, QuantGrid(6.0, 0.1));
        REQUIRE(coarse.status == SolveStatus::ok);
        REQUIRE(fine.status == SolveStatus::ok);
        CHECK(fine.energy_j <= coarse.energy_j * (1.0 + 1e-9));
    }
    SUBCASE("small deadlines are infeasible") {
        CHECK(solve_parallel_general(fig8, prof, kOne, QuantGrid(1.0, 0.1)).status ==
              SolveStatus::infeasible_deadline);
    }
}

TEST_CASE("general solver on a diamond against a grid enumeration") {
    PlatformProfile prof = bench_profile();
    CallGraph g({{1, 0.0, true}, {2, 8e8, false}, {3, 1.2e9, false}, {4, 6e8, false}},
                {{1, 2, 3e6}, {1, 3, 4e6}, {2, 4, 2e6}, {3, 4, 2e6}}, 4);
    REQUIRE(validate_graph(g).valid());
    REQUIRE(decompose(g).separators == std::set<NodeId>{1});

    const double lmax = 1.5;
    QuantGrid grid(lmax, 0.05);
    ParallelSolution sol = solve_parallel_general(g, prof, kOne, grid);
    REQUIRE(sol.status == SolveStatus::ok);
    CHECK(latency_recursion(g, prof, kOne, sol.plan) <= lmax);
    CHECK(evaluate_parallel_energy(g, prof, kOne, sol.plan) ==
          Approx(sol.energy_j).epsilon(1e-9));

    // independent enumeration: decisions for {2,3}, 200-point log power grids.
    // Each DP hop consumes at most its exact delay plus two slots, so with
    // two-edge paths the solver is bracketed by the grid optima at the full
    // deadline and at the deadline shortened by five slots.
    const double lmax_reduced = lmax - 5 * grid.eps();
    double best = std::numeric_limits<double>::infinity();
    double best_reduced = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 4; ++mask) {
        OffloadPlan plan = all_local_plan(g);
        plan.decisions[2] = mask & 1;
        plan.decisions[3] = (mask >> 1) & 1;
        std::vector<EdgeKey> ul;
        for (const auto& e : g.edges())
            if (plan.is_uplink_edge(e.from, e.to)) ul.push_back({e.from, e.to});
        std::vector<std::vector<double>> grids;
        for (const auto& e : ul) {
            double pmin = power_for_duration(g.edge_bits(e.first, e.second), lmax,
                                             prof, kOne)
                              .power;
            std::vector<double> pts;
            for (int i = 0; i < 200; ++i)
                pts.push_back(pmin * std::pow(prof.p_max / pmin, i / 199.0));
            grids.push_back(std::move(pts));
        }
        std::vector<size_t> idx(ul.size(), 0);
        bool done = false;
        while (!done) {
            for (size_t i = 0; i < ul.size(); ++i)
                plan.powers[ul[i]] = grids[i][idx[i]];
            double lat = latency_recursion(g, prof, kOne, plan);
            if (lat <= lmax) {
                double e = evaluate_parallel_energy(g, prof, kOne, plan);
                best = std::min(best, e);
                if (lat <= lmax_reduced) best_reduced = std::min(best_reduced, e);
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
    REQUIRE(std::isfinite(best));
    REQUIRE(std::isfinite(best_reduced));
    CHECK(sol.energy_j >= best * (1.0 - 1e-3));
    CHECK(sol.energy_j <= best_reduced * (1.0 + 1e-9));
}

TEST_CASE("general solver with jointly fed branches against closed form") {
    // two data separators feed both mid nodes, so each branch has two core
    // sources and goes through the per-profile re-solve
    PlatformProfile prof = bench_profile();
    prof.p_rf = 0.05;
    CallGraph g({{1, 0.0, true},
                 {2, 0.0, true},
                 {3, 9e8, false},
                 {4, 1.1e9, false},
                 {5, 5e8, false}},
                {{1, 3, 2e6}, {1, 4, 3e6}, {2, 3, 1e6}, {2, 4, 2e6},
                 {3, 5, 1e6}, {4, 5, 1e6}}, 5);
    REQUIRE(validate_graph(g).valid());
    REQUIRE(decompose(g).separators == std::set<NodeId>{1, 2});

    // at a generous deadline every uplink runs at its unconstrained optimum,
    // so the best energy has a closed form per decision pair
    double per_bit = optimal_serial_power(prof, 0.0).cost;  // c = p_rf
    double dl_leg = (prof.p_rf + prof.p_rx) / prof.c_dl;
    double expect = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 4; ++mask) {
        int i3 = mask & 1, i4 = (mask >> 1) & 1;
        double e = prof.p_local * 5e8 / prof.f_local;  // root always local
        e += i3 ? per_bit * 3e6 + dl_leg * 1e6 : prof.p_local * 9e8 / prof.f_local;
        e += i4 ? per_bit * 5e6 + dl_leg * 1e6 : prof.p_local * 1.1e9 / prof.f_local;
        expect = std::min(expect, e);
    }

    QuantGrid grid(20.0, 0.05);
    ParallelSolution sol = solve_parallel_general(g, prof, kOne, grid);
    REQUIRE(sol.status == SolveStatus::ok);
    CHECK(latency_recursion(g, prof, kOne, sol.plan) <= 20.0);
    CHECK(sol.energy_j ==
          Approx(evaluate_parallel_energy(g, prof, kOne, sol.plan)).epsilon(1e-9));
    CHECK(sol.energy_j >= expect * (1.0 - 1e-9));
    CHECK(sol.energy_j <= expect * 1.02);
}

TEST_CASE("general solver with a separator feeding the root") {
    PlatformProfile prof = bench_profile();
    prof.p_rf = 0.04;
    prof.p_rx = 0.01;
    CallGraph g({{1, 0.0, true}, {2, 7e8, false}, {3, 1.3e9, false}, {4, 4e8, false}},
                {{1, 2, 2e6}, {2, 3, 3e6}, {2, 4, 1e6}, {3, 4, 2e6}}, 4);
    REQUIRE(validate_graph(g).valid());
    REQUIRE(decompose(g).separators == std::set<NodeId>{2});

    // generous deadline: every uplink sits at its unconstrained optimum, so
    // the exact optimum is a small enumeration over the two free decisions
    double per_bit = optimal_serial_power(prof, 0.0).cost;
    double dl_leg = (prof.p_rf + prof.p_rx) / prof.c_dl;
    double expect = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 4; ++mask) {
        OffloadPlan plan = all_local_plan(g);
        plan.decisions[2] = mask & 1;
        plan.decisions[3] = (mask >> 1) & 1;
        double e = 0.0;
        for (const auto& nd : g.nodes())
            if (!nd.is_data && plan.decision(nd.id) == 0)
                e += prof.p_local * nd.cycles / prof.f_local;
        for (const auto& ed : g.edges()) {
            if (plan.is_uplink_edge(ed.from, ed.to)) e += per_bit * ed.bits;
            if (plan.is_downlink_edge(ed.from, ed.to)) e += dl_leg * ed.bits;
        }
        expect = std::min(expect, e);
    }

    QuantGrid grid(30.0, 0.05);
    ParallelSolution sol = solve_parallel_general(g, prof, kOne, grid);
    REQUIRE(sol.status == SolveStatus::ok);
    CHECK(latency_recursion(g, prof, kOne, sol.plan) <= 30.0);
    CHECK(sol.energy_j ==
          Approx(evaluate_parallel_energy(g, prof, kOne, sol.plan)).epsilon(1e-9));
    CHECK(sol.energy_j >= expect * (1.0 - 1e-9));
    CHECK(sol.energy_j <= expect * 1.02);
}

TEST_CASE("tree dp on random trees stays inside deterministic bounds") {
    PlatformProfile prof = bench_profile();
    std::mt19937 rng(31);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        int n = std::uniform_int_distribution<int>(3, 6)(rng);
        std::vector<Edge> edges;
        for (int i = 1; i < n; ++i)
            edges.push_back({i, std::uniform_int_distribution<int>(i + 1, n)(rng),
                             std::uniform_real_distribution<double>(2e5, 6e6)(rng)});
        std::set<NodeId> with_parent;
        for (const auto& e : edges) with_parent.insert(e.to);
        std::vector<TaskNode> nodes;
        for (int i = 1; i <= n; ++i)
            nodes.push_back({i, std::uniform_real_distribution<double>(0.0, 2e9)(rng),
                             !with_parent.count(i)});
        CallGraph g(std::move(nodes), std::move(edges), n);
        if (!validate_graph(g).valid()) continue;  // duplicate edge rolls
        REQUIRE(decompose(g).is_tree);

        double crit = latency_recursion(g, prof, kOne, all_local_plan(g));
        double lmax = crit * std::uniform_real_distribution<double>(0.9, 2.0)(rng);
        const double eps = 0.05;
        QuantGrid grid(lmax, eps);
        ParallelSolution sol = solve_parallel_tree(g, prof, kOne, grid);
        if (sol.status != SolveStatus::ok) continue;
        ++checked;
        CHECK(latency_recursion(g, prof, kOne, sol.plan) <= lmax);
        CHECK(sol.energy_j ==
              Approx(evaluate_parallel_energy(g, prof, kOne, sol.plan)).epsilon(1e-9));

        // each hop consumes at most its exact delay plus two slots, so
        // anything a dense grid schedules under the reduced deadline the
        // solver matches
        double reduced = lmax - 2.0 * n * eps;
        if (reduced > 0.0) {
            OracleResult tight =
                brute_force_parallel(g, prof, kOne, reduced, 40, 10);
            if (tight.status == SolveStatus::ok)
                CHECK(sol.energy_j <= tight.objective * (1.0 + 1e-9));
        }
        OracleResult loose = brute_force_parallel(g, prof, kOne, lmax, 40, 10);
        if (loose.status == SolveStatus::ok)
            CHECK(sol.energy_j >= loose.objective * 0.95);
    }
    CHECK(checked >= 8);
}

TEST_CASE("separate design parallel") {
    PlatformProfile prof = bench_profile();
    CallGraph g = load_graph("fixtures/t2subtree.json");
    QuantGrid grid(4.0, 0.05);
    SeparateDesignParallel sep = separate_design_parallel(g, prof, kOne, grid);
    SUBCASE("frozen powers cannot beat the joint design") {
        ParallelSolution joint = solve_parallel_tree(g, prof, kOne, grid);
        REQUIRE(joint.status == SolveStatus::ok);
        if (sep.status == SolveStatus::ok)
            CHECK(sep.energy_j >= joint.energy_j * (1.0 - 1e-12));
    }
    SUBCASE("single operating point per scenario") {
        SeparateDesignParallel again = separate_design_parallel(g, prof, kOne, grid);
        if (sep.status == SolveStatus::ok) {
            CHECK(sep.energy_j == again.energy_j);
            CHECK(sep.latency_s == again.latency_s);
        }
    }
    SUBCASE("general graphs: one dominated point at every deadline") {
        CallGraph fig8 = load_graph("fixtures/fig8.json");
        double first_e = 0.0, first_l = 0.0;
        for (double lmax : {6.0, 10.0, 14.0}) {
            QuantGrid gg(lmax, 0.1);
            SeparateDesignParallel s = separate_design_parallel(fig8, prof, kOne, gg);
            ParallelSolution joint = solve_parallel_general(fig8, prof, kOne, gg);
            REQUIRE(s.status == SolveStatus::ok);
            REQUIRE(joint.status == SolveStatus::ok);
            CHECK(s.energy_j >= joint.energy_j * (1.0 - 1e-12));
            if (first_e == 0.0) {
                first_e = s.energy_j;
                first_l = s.latency_s;
            }
            CHECK(s.energy_j == first_e);  // no physical-layer adaptation
            CHECK(s.latency_s == first_l);
        }
    }
    SUBCASE("falls back to all-local when offloading never fits") {
        CallGraph heavy({{1, 0.0, true}, {2, 1e9, false}, {3, 1e9, false}},
                        {{1, 2, 1e12}, {2, 3, 1e12}}, 3);
        QuantGrid hgrid(3.0, 0.05);
        SeparateDesignParallel res = separate_design_parallel(heavy, prof, kOne, hgrid);
        REQUIRE(res.status == SolveStatus::ok);
        CHECK(decisions_bitstring(heavy, res.plan) == "000");
    }
}

TEST_CASE("auto concurrency picks a simulator-checked knob") {
    PlatformProfile prof = bench_profile();
    CallGraph fig8 = load_graph("fixtures/fig8.json");
    QuantGrid grid(8.0, 0.2);
    AutoConcResult ac = solve_parallel_auto(fig8, prof, grid, 0.05);
    REQUIRE(ac.solution.status == SolveStatus::ok);
    CHECK(ac.conc >= 1);
    CHECK(ac.conc <= 4);
    CHECK(ac.sim_energy_j > 0.0);
}

TEST_CASE("deadline sweep rows") {
    PlatformProfile prof = bench_profile();
    CallGraph g = load_graph("fixtures/t2subtree.json");
    auto rows = sweep_deadline(g, prof, 1, {2.0, 4.0, 8.0}, 0.1, 0.05);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].status == SolveStatus::infeasible_deadline);
    for (size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].status == SolveStatus::ok);
        CHECK(rows[i].recursion_latency_s <= rows[i].lmax_s);
        CHECK(rows[i].sim_energy_j >= rows[i].dp_energy_j * (1.0 - 1e-9));
    }
    CHECK(rows[2].dp_energy_j <= rows[1].dp_energy_j * (1.0 + 1e-12));
}
