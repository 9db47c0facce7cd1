#include "offload/cli.hpp"

#include <cmath>
#include <stdexcept>

#include <CLI11.hpp>

#include "offload/io.hpp"
#include "offload/oracle.hpp"
#include "offload/parallel.hpp"
#include "offload/serial.hpp"
#include "offload/simulator.hpp"

namespace offload {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnsupported = 3;

int status_exit(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return kExitOk;
        case SolveStatus::infeasible_deadline: return kExitInfeasible;
        case SolveStatus::not_a_tree:
        case SolveStatus::unsupported_structure: return kExitUnsupported;
        case SolveStatus::limit_exceeded: return kExitValidation;
    }
    return kExitValidation;
}

CallGraph load_valid_graph(const std::string& path) {
    CallGraph g = load_graph(path);
    ValidationReport rep = validate_graph(g);
    if (!rep.valid())
        throw std::runtime_error("invalid call graph " + path + ":\n" + rep.summary());
    return g;
}

int parse_conc(const std::string& s) {
    if (s == "auto") return 0;
    int v = std::stoi(s);
    if (v < 1 || v > 4) throw std::runtime_error("conc must be 1..4 or auto");
    return v;
}

struct CommonArgs {
    std::string graph, profile, plan, out;
    double lambda = 1.0, lmax = 1.0, eps = 0.1, eps_d = 0.1;
    std::string conc = "1";
    std::string mode = "serial";
    std::string values;
    int grid_points = 200, limit = 20, limit_par = 10;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"joint task-offloading and uplink-power optimizer"};
    app.require_subcommand(1);
    CommonArgs a;

    auto* validate = app.add_subcommand("validate", "check a call-graph file");
    validate->add_option("graph", a.graph)->required();

    auto* solve = app.add_subcommand("solve", "optimize a plan");
    solve->require_subcommand(1);
    auto* solve_serial = solve->add_subcommand("serial");
    solve_serial->add_option("--graph", a.graph)->required();
    solve_serial->add_option("--profile", a.profile)->required();
    solve_serial->add_option("--lambda", a.lambda)->required();
    solve_serial->add_option("--out", a.out);
    auto* solve_par = solve->add_subcommand("parallel");
    solve_par->add_option("--graph", a.graph)->required();
    solve_par->add_option("--profile", a.profile)->required();
    solve_par->add_option("--lmax", a.lmax)->required();
    solve_par->add_option("--eps", a.eps)->required();
    solve_par->add_option("--conc", a.conc);
    solve_par->add_option("--eps-d", a.eps_d);
    solve_par->add_option("--out", a.out);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a stored plan");
    evaluate->add_option("--mode", a.mode)
        ->required()
        ->check(CLI::IsMember({"serial", "recursion", "simulate"}));
    evaluate->add_option("--graph", a.graph)->required();
    evaluate->add_option("--profile", a.profile)->required();
    evaluate->add_option("--plan", a.plan)->required();
    evaluate->add_option("--eps-d", a.eps_d);
    evaluate->add_option("--conc", a.conc);

    auto* sweep = app.add_subcommand("sweep", "trade-off curves to CSV");
    sweep->require_subcommand(1);
    auto* sweep_serial = sweep->add_subcommand("serial");
    sweep_serial->add_option("--graph", a.graph)->required();
    sweep_serial->add_option("--profile", a.profile)->required();
    sweep_serial->add_option("--lambdas", a.values)->required();
    sweep_serial->add_option("--out", a.out);
    auto* sweep_par = sweep->add_subcommand("parallel");
    sweep_par->add_option("--graph", a.graph)->required();
    sweep_par->add_option("--profile", a.profile)->required();
    sweep_par->add_option("--lmax", a.values)->required();
    sweep_par->add_option("--eps", a.eps)->required();
    sweep_par->add_option("--conc", a.conc);
    sweep_par->add_option("--eps-d", a.eps_d);
    sweep_par->add_option("--out", a.out);

    auto* oracle = app.add_subcommand("oracle", "brute-force reference solve");
    oracle->require_subcommand(1);
    auto* oracle_serial = oracle->add_subcommand("serial");
    oracle_serial->add_option("--graph", a.graph)->required();
    oracle_serial->add_option("--profile", a.profile)->required();
    oracle_serial->add_option("--lambda", a.lambda)->required();
    oracle_serial->add_option("--limit", a.limit);
    auto* oracle_par = oracle->add_subcommand("parallel");
    oracle_par->add_option("--graph", a.graph)->required();
    oracle_par->add_option("--profile", a.profile)->required();
    oracle_par->add_option("--lmax", a.lmax)->required();
    oracle_par->add_option("--grid-points", a.grid_points);
    oracle_par->add_option("--limit", a.limit_par);
    oracle_par->add_option("--conc", a.conc);

    auto* timeline = app.add_subcommand("timeline", "simulate and export a timeline");
    timeline->add_option("--graph", a.graph)->required();
    timeline->add_option("--profile", a.profile)->required();
    timeline->add_option("--plan", a.plan)->required();
    timeline->add_option("--out", a.out)->required();
    timeline->add_option("--eps-d", a.eps_d);

    std::vector<char*> argv;
    std::vector<std::string> storage = args;
    storage.insert(storage.begin(), "offload");
    argv.reserve(storage.size());
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (validate->parsed()) {
            CallGraph g = load_graph(a.graph);
            ValidationReport rep = validate_graph(g);
            if (rep.valid()) {
                out << "valid: " << g.size() << " nodes, " << g.edges().size()
                    << " edges\n";
                return kExitOk;
            }
            err << rep.summary();
            return kExitValidation;
        }

        if (solve_serial->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            SerialSolution sol = solve_serial_general(g, prof, a.lambda);
            if (sol.status != SolveStatus::ok) {
                err << "error: " << to_string(sol.status) << "\n";
                return status_exit(sol.status);
            }
            SerialEval ev = evaluate_serial(g, prof, sol.plan);
            out << "objective_J " << format_double(sol.objective) << "\n"
                << "energy_J " << format_double(ev.value.energy_j) << "\n"
                << "latency_s " << format_double(ev.value.latency_s) << "\n"
                << "decisions " << decisions_bitstring(g, sol.plan) << "\n";
            if (sol.degenerate_power) out << "flag degenerate-power\n";
            if (!a.out.empty()) write_file(a.out, plan_to_json_text(sol.plan));
            return kExitOk;
        }

        if (solve_par->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            QuantGrid grid(a.lmax, a.eps);
            int conc = parse_conc(a.conc);
            ParallelSolution sol;
            int used = conc;
            if (conc == 0) {
                AutoConcResult ac = solve_parallel_auto(g, prof, grid, a.eps_d);
                sol = ac.solution;
                used = ac.conc;
            } else {
                sol = solve_parallel_general(g, prof, {conc, conc, conc, conc}, grid);
            }
            if (sol.status != SolveStatus::ok) {
                err << "error: " << to_string(sol.status) << "\n";
                return status_exit(sol.status);
            }
            ConcurrencyProfile cp{used, used, used, used};
            out << "dp_energy_J " << format_double(sol.energy_j) << "\n"
                << "recursion_latency_s "
                << format_double(latency_recursion(g, prof, cp, sol.plan)) << "\n"
                << "conc " << used << "\n"
                << "decisions " << decisions_bitstring(g, sol.plan) << "\n";
            if (!a.out.empty()) write_file(a.out, plan_to_json_text(sol.plan));
            return kExitOk;
        }

        if (evaluate->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            OffloadPlan plan = load_plan(a.plan);
            int conc = parse_conc(a.conc);
            if (conc == 0) conc = 1;
            ConcurrencyProfile cp{conc, conc, conc, conc};
            if (a.mode == "serial") {
                SerialEval ev = evaluate_serial(g, prof, plan);
                out << "energy_J " << format_double(ev.value.energy_j) << "\n"
                    << "latency_s " << format_double(ev.value.latency_s) << "\n";
                if (ev.zero_power_edge) out << "flag zero-power-edge\n";
            } else if (a.mode == "recursion") {
                out << "energy_J "
                    << format_double(evaluate_parallel_energy(g, prof, cp, plan))
                    << "\n"
                    << "latency_s "
                    << format_double(latency_recursion(g, prof, cp, plan)) << "\n";
            } else {
                SimResult sim = run(g, prof, plan, a.eps_d);
                if (sim.stalled) {
                    err << "error: " << sim.stall_diagnostic << "\n";
                    return kExitInfeasible;
                }
                out << run_summary_json(sim);
            }
            return kExitOk;
        }

        if (sweep_serial->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            auto rows = sweep_lambda(g, prof, parse_value_list(a.values));
            std::string csv = serial_sweep_csv(g, rows);
            if (a.out.empty())
                out << csv;
            else
                write_file(a.out, csv);
            return kExitOk;
        }

        if (sweep_par->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            auto rows = sweep_deadline(g, prof, parse_conc(a.conc),
                                       parse_value_list(a.values), a.eps, a.eps_d);
            std::string csv = parallel_sweep_csv(g, rows);
            if (a.out.empty())
                out << csv;
            else
                write_file(a.out, csv);
            return kExitOk;
        }

        if (oracle_serial->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            OracleResult res = brute_force_serial(g, prof, a.lambda, a.limit);
            if (res.status != SolveStatus::ok) {
                err << "error: " << to_string(res.status) << "\n";
                return status_exit(res.status);
            }
            out << "objective_J " << format_double(res.objective) << "\n"
                << "enumerated " << res.enumerated << "\n"
                << "decisions " << decisions_bitstring(g, res.plan) << "\n";
            return kExitOk;
        }

        if (oracle_par->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            int conc = parse_conc(a.conc);
            if (conc == 0) conc = 1;
            OracleResult res = brute_force_parallel(
                g, prof, {conc, conc, conc, conc}, a.lmax, a.grid_points, a.limit_par);
            if (res.status != SolveStatus::ok) {
                err << "error: " << to_string(res.status) << "\n";
                return status_exit(res.status);
            }
            out << "energy_J " << format_double(res.objective) << "\n"
                << "enumerated " << res.enumerated << "\n"
                << "decisions " << decisions_bitstring(g, res.plan) << "\n";
            return kExitOk;
        }

        if (timeline->parsed()) {
            CallGraph g = load_valid_graph(a.graph);
            PlatformProfile prof = load_profile(a.profile);
            OffloadPlan plan = load_plan(a.plan);
            SimResult sim = run(g, prof, plan, a.eps_d);
            write_file(a.out, export_timeline(sim.timeline));
            if (sim.stalled) {
                err << "error: " << sim.stall_diagnostic << "\n";
                return kExitInfeasible;
            }
            out << run_summary_json(sim);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    err << "error: no subcommand\n";
    return kExitValidation;
}

}  // namespace offload
