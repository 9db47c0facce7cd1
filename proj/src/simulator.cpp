#include "offload/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "offload/serial.hpp"

namespace offload {

namespace {

bool active_state(NodeExecState s) {
    return s == NodeExecState::UL || s == NodeExecState::DL ||
           s == NodeExecState::CP_L || s == NodeExecState::CP_R;
}

UplinkStream* current_stream(SimState& s, NodeId n) {
    auto it = s.ul_queue.find(n);
    if (it == s.ul_queue.end()) return nullptr;
    for (auto& st : it->second)
        if (st.bits > 0.0) return &st;
    return nullptr;
}

}  // namespace

const char* to_string(NodeExecState s) {
    switch (s) {
        case NodeExecState::ID: return "ID";
        case NodeExecState::CM: return "CM";
        case NodeExecState::CP_L: return "CP_L";
        case NodeExecState::CP_R: return "CP_R";
        case NodeExecState::UL: return "UL";
        case NodeExecState::DL: return "DL";
    }
    return "?";
}

SimState init_sim(const CallGraph& g, const PlatformProfile& prof,
                  const OffloadPlan& plan, double eps_d) {
    (void)prof;
    if (eps_d <= 0.0) throw std::invalid_argument("init_sim: eps_d <= 0");
    for (const auto& [id, dec] : plan.decisions) {
        if (!g.has_node(id))
            throw std::invalid_argument("init_sim: plan references unknown node " +
                                        std::to_string(id));
        if (dec == 1 && (g.is_data(id) || id == g.root()))
            throw std::invalid_argument("init_sim: node " + std::to_string(id) +
                                        " cannot be offloaded");
    }

    SimState s;
    s.eps_d = eps_d;
    for (const auto& nd : g.nodes()) {
        s.x[nd.id] = nd.is_data ? NodeExecState::CP_L : NodeExecState::ID;
        if (plan.decision(nd.id) == 0)
            s.cyc_local[nd.id] = nd.cycles;
        else
            s.cyc_remote[nd.id] = nd.cycles;
    }
    for (const auto& nd : g.nodes()) {
        NodeId n = nd.id;
        if (plan.decision(n) == 0 && !nd.is_data) {
            // output uploads, one stream per offloaded child, served by id
            for (NodeId c : g.children(n))
                if (plan.decision(c) == 1)
                    s.ul_queue[n].push_back(
                        {c, g.edge_bits(n, c), plan.power(n, c)});
        } else if (plan.decision(n) == 1) {
            // input bits from data parents, pooled into one stream
            double bits = 0.0, power = 0.0;
            for (NodeId m : g.parents(n))
                if (g.is_data(m)) {
                    bits += g.edge_bits(m, n);
                    power = std::max(power, plan.power(m, n));
                }
            if (bits > 0.0) s.ul_queue[n].push_back({0, bits, power});
        }
    }
    for (const auto& e : g.edges())
        if (plan.is_downlink_edge(e.from, e.to)) s.dl_bits[{e.from, e.to}] = e.bits;
    return s;
}

void step(SimState& s, const CallGraph& g, const PlatformProfile& prof,
          const OffloadPlan& plan) {
    const double eps = s.eps_d;
    const auto old_x = s.x;
    auto old_state = [&](NodeId n) { return old_x.at(n); };

    // concurrency counts frozen over the interval
    int n_ul = 0, n_l = 0, n_r = 0, n_dl = 0;
    for (const auto& [n, st] : old_x) {
        if (st == NodeExecState::UL) ++n_ul;
        if (st == NodeExecState::CP_L) ++n_l;
        if (st == NodeExecState::CP_R) ++n_r;
    }
    auto dl_stream_active = [&](NodeId m, NodeId n) {
        auto it = s.dl_bits.find({m, n});
        return old_state(n) == NodeExecState::DL && it != s.dl_bits.end() &&
               it->second > 0.0 && old_state(m) == NodeExecState::CM;
    };
    for (const auto& [key, bits] : s.dl_bits) {
        (void)bits;
        if (dl_stream_active(key.first, key.second)) ++n_dl;
    }
    s.n_ul = n_ul;
    s.n_dl = n_dl;
    s.n_l = n_l;
    s.n_r = n_r;

    // residual updates and energy charges
    for (const auto& [n, st] : old_x) {
        if (st == NodeExecState::UL) {
            if (UplinkStream* stream = current_stream(s, n)) {
                double rate =
                    uplink_capacity(static_cast<double>(n_ul) * stream->power, prof) /
                    static_cast<double>(n_ul);
                stream->bits = std::max(0.0, stream->bits - rate * eps);
                s.energy_ul += (stream->power + prof.p_rf) * eps;
            }
        } else if (st == NodeExecState::CP_L) {
            double& c = s.cyc_local[n];
            c = std::max(0.0, c - prof.f_local / static_cast<double>(n_l) * eps);
            s.energy_local += prof.p_local / static_cast<double>(n_l) * eps;
        } else if (st == NodeExecState::CP_R) {
            double& c = s.cyc_remote[n];
            c = std::max(0.0, c - prof.f_remote / static_cast<double>(n_r) * eps);
        }
    }
    for (auto& [key, bits] : s.dl_bits) {
        if (dl_stream_active(key.first, key.second)) {
            bits = std::max(0.0, bits - prof.c_dl / static_cast<double>(n_dl) * eps);
            s.energy_dl += (prof.p_rx + prof.p_rf) * eps;
        }
    }
    s.energy = s.energy_ul + s.energy_dl + s.energy_local;

    // transitions, guarded by the states other nodes held at the step start
    for (const auto& nd : g.nodes()) {
        NodeId n = nd.id;
        NodeExecState st = old_state(n);
        switch (st) {
            case NodeExecState::UL: {
                if (current_stream(s, n) != nullptr) break;  // keep uploading
                s.x[n] = plan.decision(n) == 0 ? NodeExecState::CM
                                               : NodeExecState::CP_R;
                break;
            }
            case NodeExecState::DL: {
                bool drained = true;
                bool parents_done = true;
                for (NodeId m : g.parents(n)) {
                    auto it = s.dl_bits.find({m, n});
                    if (it != s.dl_bits.end() && it->second > 0.0) drained = false;
                    if (old_state(m) != NodeExecState::CM) parents_done = false;
                }
                if (drained && parents_done) s.x[n] = NodeExecState::CP_L;
                break;
            }
            case NodeExecState::CP_L: {
                if (s.cyc_local[n] > 0.0) break;
                if (!nd.is_data && current_stream(s, n) != nullptr)
                    s.x[n] = NodeExecState::UL;
                else
                    s.x[n] = NodeExecState::CM;
                break;
            }
            case NodeExecState::CP_R: {
                if (s.cyc_remote[n] <= 0.0) s.x[n] = NodeExecState::CM;
                break;
            }
            case NodeExecState::CM:
                break;
            case NodeExecState::ID: {
                bool all_cm = true;
                bool any_remote_parent_cm = false;
                bool any_remote_parent = false;
                for (NodeId m : g.parents(n)) {
                    if (old_state(m) != NodeExecState::CM) all_cm = false;
                    if (plan.decision(m) == 1) {
                        any_remote_parent = true;
                        if (old_state(m) == NodeExecState::CM)
                            any_remote_parent_cm = true;
                    }
                }
                if (plan.decision(n) == 0) {
                    if (any_remote_parent_cm)
                        s.x[n] = NodeExecState::DL;
                    else if (!any_remote_parent && all_cm)
                        s.x[n] = NodeExecState::CP_L;
                } else if (all_cm) {
                    s.x[n] = current_stream(s, n) != nullptr ? NodeExecState::UL
                                                             : NodeExecState::CP_R;
                }
                break;
            }
        }
    }
    ++s.step;
}

SimResult run(const CallGraph& g, const PlatformProfile& prof,
              const OffloadPlan& plan, double eps_d, long max_steps) {
    SimState s = init_sim(g, prof, plan, eps_d);
    SimResult out;
    out.eps_d = eps_d;
    for (const auto& [n, q] : s.ul_queue)
        if (plan.decision(n) == 0 && q.size() > 1)
            out.warnings.push_back("serialized uploads at node " + std::to_string(n));

    if (max_steps <= 0) {
        SerialEval ser = evaluate_serial(g, prof, plan);
        double horizon = ser.value.latency_s;
        if (!std::isfinite(horizon)) {
            double sum_cycles = 0.0;
            for (const auto& nd : g.nodes()) sum_cycles += nd.cycles;
            horizon = sum_cycles / prof.f_local;
        }
        max_steps = static_cast<long>(std::ceil(10.0 * horizon / eps_d)) +
                    16 * static_cast<long>(g.size());
    }

    // run-length timeline bookkeeping (active states only)
    std::map<NodeId, std::pair<NodeExecState, double>> open;
    auto record = [&](double now) {
        for (const auto& [n, st] : s.x) {
            auto it = open.find(n);
            if (it != open.end() && it->second.first != st) {
                out.timeline.push_back({n, it->second.first, it->second.second, now});
                open.erase(it);
            }
            if (!open.count(n) && active_state(st)) open[n] = {st, now};
        }
    };
    record(0.0);

    auto residual_sum = [&]() {
        double t = 0.0;
        for (const auto& [n, q] : s.ul_queue)
            for (const auto& st : q) t += st.bits;
        for (const auto& [k, b] : s.dl_bits) t += b;
        for (const auto& [n, c] : s.cyc_local) t += c;
        for (const auto& [n, c] : s.cyc_remote) t += c;
        return t;
    };

    while (s.x.at(g.root()) != NodeExecState::CM) {
        if (s.step >= max_steps) {
            out.stalled = true;
            break;
        }
        auto prev_x = s.x;
        double prev_res = residual_sum();
        step(s, g, prof, plan);
        record(static_cast<double>(s.step) * eps_d);
        if (s.x == prev_x && residual_sum() == prev_res) {
            out.stalled = true;
            break;
        }
    }

    double now = static_cast<double>(s.step) * eps_d;
    for (const auto& [n, entry] : open)
        out.timeline.push_back({n, entry.first, entry.second, now});
    std::sort(out.timeline.begin(), out.timeline.end(),
              [](const TimelineRow& a, const TimelineRow& b) {
                  if (a.start_s != b.start_s) return a.start_s < b.start_s;
                  return a.node < b.node;
              });

    out.energy_j = s.energy;
    out.latency_s = now;
    out.steps = s.step;
    if (out.stalled) {
        std::ostringstream os;
        os << "stalled-schedule:";
        for (const auto& [n, st] : s.x)
            if (st != NodeExecState::CM) os << " " << n << "=" << to_string(st);
        out.stall_diagnostic = os.str();
        out.latency_s = std::numeric_limits<double>::infinity();
    }
    return out;
}

std::string export_timeline(const Timeline& timeline) {
    std::ostringstream os;
    os << "node,state,start_s,end_s\n";
    char buf[64];
    for (const auto& row : timeline) {
        os << row.node << "," << to_string(row.state) << ",";
        std::snprintf(buf, sizeof(buf), "%.9g", row.start_s);
        os << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.9g", row.end_s);
        os << buf << "\n";
    }
    return os.str();
}

}  // namespace offload
