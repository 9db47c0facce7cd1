#include "offload/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

using nlohmann::json;

namespace offload {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw std::runtime_error("schema error at " + path + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional = {}) {
    if (!obj.is_object()) schema_error(where, "expected an object");
    for (const auto& k : required)
        if (!obj.contains(k)) schema_error(where, "missing key '" + k + "'");
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        bool known = false;
        for (const auto& r : required)
            if (k == r) known = true;
        for (const auto& o : optional)
            if (k == o) known = true;
        if (!known) schema_error(where, "unknown key '" + k + "'");
    }
}

double num_at(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.at(key).is_number()) schema_error(where + "." + key, "expected a number");
    return obj.at(key).get<double>();
}

json parse_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("invalid JSON in " + what);
    return j;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// ---------------------------------------------------------------------------
// Call graph
// ---------------------------------------------------------------------------

CallGraph graph_from_json_text(const std::string& text) {
    json j = parse_text(text, "call graph");
    require_keys(j, "$", {"nodes", "edges", "root"});
    if (!j["nodes"].is_array()) schema_error("$.nodes", "expected an array");
    if (!j["edges"].is_array()) schema_error("$.edges", "expected an array");
    if (!j["root"].is_number_integer()) schema_error("$.root", "expected an integer");

    std::vector<TaskNode> nodes;
    size_t i = 0;
    for (const auto& nj : j["nodes"]) {
        std::string where = "$.nodes[" + std::to_string(i++) + "]";
        require_keys(nj, where, {"id", "cycles", "is_data"});
        if (!nj["id"].is_number_integer()) schema_error(where + ".id", "expected an integer");
        if (!nj["is_data"].is_boolean()) schema_error(where + ".is_data", "expected a boolean");
        nodes.push_back({nj["id"].get<int>(), num_at(nj, where, "cycles"),
                         nj["is_data"].get<bool>()});
    }
    std::vector<Edge> edges;
    i = 0;
    for (const auto& ej : j["edges"]) {
        std::string where = "$.edges[" + std::to_string(i++) + "]";
        require_keys(ej, where, {"from", "to", "bits"});
        edges.push_back({ej["from"].get<int>(), ej["to"].get<int>(),
                         num_at(ej, where, "bits")});
    }
    return CallGraph(std::move(nodes), std::move(edges), j["root"].get<int>());
}

CallGraph load_graph(const std::string& path) {
    return graph_from_json_text(read_file(path));
}

std::string graph_to_json_text(const CallGraph& g) {
    json j;
    j["nodes"] = json::array();
    for (const auto& n : g.nodes())
        j["nodes"].push_back({{"id", n.id}, {"cycles", n.cycles}, {"is_data", n.is_data}});
    j["edges"] = json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"bits", e.bits}});
    j["root"] = g.root();
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Platform profile
// ---------------------------------------------------------------------------

PlatformProfile profile_from_json_text(const std::string& text) {
    json j = parse_text(text, "profile");
    require_keys(j, "$",
                 {"f_local", "f_remote", "p_local", "p_rf", "p_rx", "c_dl",
                  "bandwidth", "snr_gain_db"},
                 {"dl_bandwidth", "p_max", "p_min"});
    PlatformProfile p;
    p.f_local = num_at(j, "$", "f_local");
    p.f_remote = num_at(j, "$", "f_remote");
    p.p_local = num_at(j, "$", "p_local");
    p.p_rf = num_at(j, "$", "p_rf");
    p.p_rx = num_at(j, "$", "p_rx");
    p.c_dl = num_at(j, "$", "c_dl");
    p.bandwidth = num_at(j, "$", "bandwidth");
    p.snr_gain = std::pow(10.0, num_at(j, "$", "snr_gain_db") / 10.0);
    p.dl_bandwidth = j.contains("dl_bandwidth") ? num_at(j, "$", "dl_bandwidth")
                                                : p.bandwidth;
    if (j.contains("p_max")) p.p_max = num_at(j, "$", "p_max");
    if (j.contains("p_min")) p.p_min = num_at(j, "$", "p_min");
    if (!(p.f_local > 0.0)) schema_error("$.f_local", "must be positive");
    if (!(p.f_remote > 0.0)) schema_error("$.f_remote", "must be positive");
    if (!(p.p_local > 0.0)) schema_error("$.p_local", "must be positive");
    if (!(p.c_dl > 0.0)) schema_error("$.c_dl", "must be positive");
    if (!(p.bandwidth > 0.0)) schema_error("$.bandwidth", "must be positive");
    if (!(p.dl_bandwidth > 0.0)) schema_error("$.dl_bandwidth", "must be positive");
    if (p.p_rf < 0.0) schema_error("$.p_rf", "must be non-negative");
    if (p.p_rx < 0.0) schema_error("$.p_rx", "must be non-negative");
    if (p.p_min < 0.0 || p.p_min >= p.p_max)
        schema_error("$.p_min", "requires 0 <= p_min < p_max");
    return p;
}

PlatformProfile load_profile(const std::string& path) {
    return profile_from_json_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Plan
// ---------------------------------------------------------------------------

OffloadPlan plan_from_json_text(const std::string& text) {
    json j = parse_text(text, "plan");
    require_keys(j, "$", {"decisions", "powers"});
    OffloadPlan plan;
    for (const auto& [k, v] : j["decisions"].items()) {
        int dec = v.get<int>();
        if (dec != 0 && dec != 1) schema_error("$.decisions." + k, "expected 0 or 1");
        plan.decisions[std::stoi(k)] = dec;
    }
    for (const auto& [k, v] : j["powers"].items()) {
        auto dash = k.find('-');
        if (dash == std::string::npos)
            schema_error("$.powers." + k, "expected 'from-to' key");
        NodeId from = std::stoi(k.substr(0, dash));
        NodeId to = std::stoi(k.substr(dash + 1));
        plan.powers[{from, to}] = v.get<double>();
    }
    return plan;
}

OffloadPlan load_plan(const std::string& path) {
    return plan_from_json_text(read_file(path));
}

std::string plan_to_json_text(const OffloadPlan& plan) {
    std::ostringstream os;
    os << "{\n  \"decisions\": {";
    bool first = true;
    for (const auto& [id, dec] : plan.decisions) {
        os << (first ? "" : ", ") << "\"" << id << "\": " << dec;
        first = false;
    }
    os << "},\n  \"powers\": {";
    first = true;
    for (const auto& [key, p] : plan.powers) {
        os << (first ? "" : ", ") << "\"" << key.first << "-" << key.second
           << "\": " << format_double(p);
        first = false;
    }
    os << "}\n}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

Scenario scenario_from_json_text(const std::string& text) {
    json j = parse_text(text, "scenario");
    require_keys(j, "$", {"graph", "profile", "mode"},
                 {"lambdas", "lmax_list", "eps", "eps_d", "conc"});
    Scenario sc;
    sc.graph_path = j["graph"].get<std::string>();
    sc.profile_path = j["profile"].get<std::string>();
    sc.mode = j["mode"].get<std::string>();
    if (sc.mode != "serial" && sc.mode != "parallel")
        schema_error("$.mode", "expected 'serial' or 'parallel'");
    if (j.contains("lambdas"))
        for (const auto& v : j["lambdas"]) sc.lambdas.push_back(v.get<double>());
    if (j.contains("lmax_list"))
        for (const auto& v : j["lmax_list"]) sc.lmax_list.push_back(v.get<double>());
    if (j.contains("eps")) sc.eps = j["eps"].get<double>();
    if (j.contains("eps_d")) sc.eps_d = j["eps_d"].get<double>();
    if (j.contains("conc")) {
        if (j["conc"].is_string() && j["conc"].get<std::string>() == "auto")
            sc.conc = 0;
        else
            sc.conc = j["conc"].get<int>();
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    Scenario sc = scenario_from_json_text(read_file(path));
    CallGraph g = load_graph(sc.graph_path);
    ValidationReport rep = validate_graph(g);
    if (!rep.valid())
        throw std::runtime_error("scenario graph " + sc.graph_path + " is invalid:\n" +
                                 rep.summary());
    load_profile(sc.profile_path);
    return sc;
}

std::string scenario_to_json_text(const Scenario& sc) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"graph\": \"" << sc.graph_path << "\",\n";
    os << "  \"profile\": \"" << sc.profile_path << "\",\n";
    os << "  \"mode\": \"" << sc.mode << "\"";
    auto emit_list = [&os](const char* key, const std::vector<double>& vs) {
        os << ",\n  \"" << key << "\": [";
        for (size_t i = 0; i < vs.size(); ++i)
            os << (i ? ", " : "") << format_double(vs[i]);
        os << "]";
    };
    if (!sc.lambdas.empty()) emit_list("lambdas", sc.lambdas);
    if (!sc.lmax_list.empty()) emit_list("lmax_list", sc.lmax_list);
    if (sc.eps) os << ",\n  \"eps\": " << format_double(*sc.eps);
    if (sc.eps_d) os << ",\n  \"eps_d\": " << format_double(*sc.eps_d);
    if (sc.conc) {
        if (*sc.conc == 0)
            os << ",\n  \"conc\": \"auto\"";
        else
            os << ",\n  \"conc\": " << *sc.conc;
    }
    os << "\n}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// CSV and summaries
// ---------------------------------------------------------------------------

std::string serial_sweep_csv(const CallGraph& g,
                             const std::vector<SerialSweepPoint>& rows) {
    std::ostringstream os;
    os << "lambda,energy_J,latency_s,decisions_bitstring\n";
    for (const auto& r : rows)
        os << format_double(r.lambda) << "," << format_double(r.energy_j) << ","
           << format_double(r.latency_s) << "," << decisions_bitstring(g, r.plan)
           << "\n";
    return os.str();
}

std::string parallel_sweep_csv(const CallGraph& g,
                               const std::vector<ParallelSweepRow>& rows) {
    std::ostringstream os;
    os << "lmax_s,eps_s,conc,dp_energy_J,recursion_latency_s,sim_energy_J,"
          "sim_latency_s,decisions_bitstring\n";
    for (const auto& r : rows) {
        os << format_double(r.lmax_s) << "," << format_double(r.eps_s) << ","
           << r.conc << "," << format_double(r.dp_energy_j) << ","
           << format_double(r.recursion_latency_s) << ","
           << format_double(r.sim_energy_j) << "," << format_double(r.sim_latency_s)
           << ",";
        if (r.status == SolveStatus::ok)
            os << decisions_bitstring(g, r.plan);
        else
            os << to_string(r.status);
        os << "\n";
    }
    return os.str();
}

std::string run_summary_json(const SimResult& r) {
    std::ostringstream os;
    os << "{\"energy_J\": " << format_double(r.energy_j)
       << ", \"latency_s\": " << format_double(r.latency_s)
       << ", \"steps\": " << r.steps << ", \"eps_d\": " << format_double(r.eps_d)
       << "}\n";
    return os.str();
}

std::vector<double> parse_value_list(const std::string& spec) {
    std::vector<double> out;
    auto colon1 = spec.find(':');
    if (colon1 != std::string::npos) {
        auto colon2 = spec.find(':', colon1 + 1);
        if (colon2 == std::string::npos)
            throw std::runtime_error("bad range spec '" + spec + "'");
        double a = std::stod(spec.substr(0, colon1));
        double b = std::stod(spec.substr(colon1 + 1, colon2 - colon1 - 1));
        std::string tail = spec.substr(colon2 + 1);
        bool log_scale;
        if (tail.rfind("log", 0) == 0)
            log_scale = true;
        else if (tail.rfind("lin", 0) == 0)
            log_scale = false;
        else
            throw std::runtime_error("bad range spec '" + spec + "'");
        int n = std::stoi(tail.substr(3));
        if (n < 1) throw std::runtime_error("bad range spec '" + spec + "'");
        if (n == 1) return {a};
        if (log_scale && (a <= 0.0 || b <= 0.0))
            throw std::runtime_error("log range needs positive endpoints");
        for (int i = 0; i < n; ++i) {
            double f = static_cast<double>(i) / (n - 1);
            out.push_back(log_scale ? a * std::pow(b / a, f) : a + (b - a) * f);
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    if (out.empty()) throw std::runtime_error("empty value list '" + spec + "'");
    return out;
}

}  // namespace offload
