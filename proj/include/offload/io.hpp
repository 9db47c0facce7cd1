#pragma once

// File formats: strict-schema JSON for graphs, profiles, plans and scenarios
// (unknown keys are rejected with the offending path), CSV emission for sweep
// curves, and the run-summary document. All floats are written with nine
// significant digits so identical inputs give byte-identical outputs.

#include <optional>
#include <string>
#include <vector>

#include "offload/graph.hpp"
#include "offload/parallel.hpp"
#include "offload/physical.hpp"
#include "offload/plan.hpp"
#include "offload/serial.hpp"
#include "offload/simulator.hpp"

namespace offload {

std::string format_double(double v);  // %.9g

CallGraph load_graph(const std::string& path);
CallGraph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const CallGraph& g);

PlatformProfile load_profile(const std::string& path);
PlatformProfile profile_from_json_text(const std::string& text);

OffloadPlan load_plan(const std::string& path);
OffloadPlan plan_from_json_text(const std::string& text);
std::string plan_to_json_text(const OffloadPlan& plan);

struct Scenario {
    std::string graph_path;
    std::string profile_path;
    std::string mode;  // "serial" or "parallel"
    std::vector<double> lambdas;    // serial knob
    std::vector<double> lmax_list;  // parallel knob
    std::optional<double> eps;
    std::optional<double> eps_d;
    std::optional<int> conc;  // 0 = auto
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& sc);

std::string serial_sweep_csv(const CallGraph& g,
                             const std::vector<SerialSweepPoint>& rows);
std::string parallel_sweep_csv(const CallGraph& g,
                               const std::vector<ParallelSweepRow>& rows);
std::string run_summary_json(const SimResult& r);

// "a:b:logN" / "a:b:linN" range expressions or a plain comma list.
std::vector<double> parse_value_list(const std::string& spec);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace offload
