#pragma once

// Declarative experiment configurations: the colony-maintenance and the
// persistent-monitoring setups, their file form, and the mappings from raw
// world state to task signals and costs.
//
// File form is JSON. Every key is optional and falls back to the default of
// the scenario's kind; unknown keys are errors.
//
//   {
//     "kind": "colony",
//     "seed": 1, "dt": 0.1, "t_final": 600,
//     "robots":  {"count": 12, "v_max": 1, "radius": 0.25, "idle_slot_radius": 2.5},
//     "barrier": {"alpha": 1},
//     "domain":  {"center": [0, 0], "outer_radius": 30},
//     "tasks":   {"gamma": [12, 7.2]},
//     "colony":  {...}, "monitoring": {...},
//     "events":  [{"time": 120, "type": "cargo", "amount": 10, "location": [20, 0]},
//                 {"time": 172.5, "type": "removal", "count": 6}]
//   }

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ggta/cbf.hpp"

namespace ggta {

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

enum class ScenarioKind { Colony, Monitoring };
enum class EventKind { CargoDelivery, RobotRemoval };

struct ScheduledEvent {
    double time = 0.0;
    EventKind kind = EventKind::CargoDelivery;
    int amount = 0;  // cargo units or robots removed
    Vec2 location;   // cargo only

    bool operator==(const ScheduledEvent&) const = default;
};

struct ColonyParams {
    double inner_radius = 5.0;     // R_i, the colony disk
    double sensing_range = 5.0;    // h
    double energy_source = 4.0;    // J per delivered source
    double energy_drain = 0.1;     // J/s colony leakage
    double energy_max = 100.0;
    double energy_initial = 50.0;
    int cargo_capacity = 10;       // c_max
    Vec2 depot{20.0, 0.0};
    double depot_wait = 2.0;       // s
    double depot_radius = 1.5;     // arrival distance at the depot
    int sources = 20;
    double return_noise = 0.05;    // sigma per metre travelled
    std::vector<double> costs{0.0, 0.0};

    bool operator==(const ColonyParams&) const = default;
};

struct MonitoringParams {
    double rate_accumulate = 0.75;  // A
    double rate_collect = 2.0;      // B
    double info_max = 1.0;          // R_max
    double diameter = 4.0;          // D, cost normalization
    double service_radius = 0.1;
    Vec2 idle_point{2.0, 2.0};
    std::vector<Vec2> nodes;

    bool operator==(const MonitoringParams&) const = default;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Colony;
    std::uint64_t seed = 1;
    double dt = 0.1;
    double t_final = 600.0;

    int robots = 12;
    double v_max = 1.0;
    double robot_radius = 0.25;   // r, minimum centre distance
    double idle_slot_radius = 2.5;
    double cbf_alpha = 1.0;

    Vec2 domain_center;
    double outer_radius = 30.0;   // R_o
    std::vector<double> gamma{12.0, 7.2};

    ColonyParams colony;
    MonitoringParams monitoring;
    std::vector<ScheduledEvent> events;

    [[nodiscard]] std::size_t num_tasks() const {
        return kind == ScenarioKind::Colony ? 2 : monitoring.nodes.size();
    }

    bool operator==(const ScenarioConfig&) const = default;
};

inline ScenarioConfig colony_default() {
    ScenarioConfig c;
    c.kind = ScenarioKind::Colony;
    c.events = {
        {120.0, EventKind::CargoDelivery, 10, {20.0, 0.0}},
        {225.0, EventKind::CargoDelivery, 10, {20.0, 0.0}},
        {172.5, EventKind::RobotRemoval, 6, {}},
    };
    return c;
}

/// Five nodes on a regular pentagon of radius 1.5 m around the idle point.
inline std::vector<Vec2> pentagon_nodes(Vec2 center, double radius) {
    std::vector<Vec2> nodes;
    for (int k = 0; k < 5; ++k) {
        const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 5.0;
        nodes.push_back(center + Vec2{std::cos(angle), std::sin(angle)} * radius);
    }
    return nodes;
}

inline ScenarioConfig monitoring_default() {
    ScenarioConfig c;
    c.kind = ScenarioKind::Monitoring;
    c.t_final = 1000.0;
    c.robots = 4;
    c.v_max = 4.0;
    c.robot_radius = 0.04;
    c.idle_slot_radius = 0.15;
    c.domain_center = {2.0, 2.0};
    c.outer_radius = 2.0;
    c.monitoring.nodes = pentagon_nodes({2.0, 2.0}, 1.5);
    c.gamma.assign(c.monitoring.nodes.size(), 4.0);
    return c;
}

inline void validate(const ScenarioConfig& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ScenarioError(std::string("invalid scenario: ") + what);
    };
    require(c.dt > 0.0 && std::isfinite(c.dt), "dt must be positive");
    require(c.t_final > 0.0 && std::isfinite(c.t_final), "t_final must be positive");
    require(c.robots >= 1, "robots.count must be at least 1");
    require(c.v_max > 0.0, "robots.v_max must be positive");
    require(c.robot_radius > 0.0, "robots.radius must be positive");
    require(c.idle_slot_radius >= 0.0, "robots.idle_slot_radius must be nonnegative");
    require(c.cbf_alpha > 0.0 && c.cbf_alpha * c.dt <= 1.0, "barrier.alpha must satisfy 0 < alpha*dt <= 1");
    require(c.outer_radius > c.robot_radius, "domain.outer_radius must exceed robots.radius");
    require(c.gamma.size() == c.num_tasks(), "tasks.gamma needs one entry per task");
    for (double g : c.gamma) require(g > 0.0, "tasks.gamma entries must be positive");
    for (const auto& e : c.events) {
        require(e.time >= 0.0, "event times must be nonnegative");
        require(e.amount >= 0, "event amounts must be nonnegative");
    }
    if (c.kind == ScenarioKind::Colony) {
        const auto& p = c.colony;
        require(p.inner_radius > 0.0 && p.inner_radius < c.outer_radius, "colony.inner_radius must lie in (0, R_o)");
        require(p.sensing_range > 0.0, "colony.sensing_range must be positive");
        require(p.energy_max > 0.0, "colony.energy_max must be positive");
        require(p.energy_initial > 0.0, "colony.energy_initial must be positive");
        require(p.energy_drain >= 0.0 && p.energy_source >= 0.0, "colony energy rates must be nonnegative");
        require(p.cargo_capacity > 0, "colony.cargo_capacity must be positive");
        require(p.depot_wait >= 0.0 && p.depot_radius > 0.0, "colony depot timing must be nonnegative");
        require(p.sources >= 0, "colony.sources must be nonnegative");
        require(p.return_noise >= 0.0, "colony.return_noise must be nonnegative");
        require(p.costs.size() == 2, "colony.costs needs two entries");
        for (double x : p.costs) require(x >= 0.0, "colony.costs must be nonnegative");
        for (const auto& e : c.events) {
            require(e.kind != EventKind::CargoDelivery || norm(e.location - p.depot) <= p.depot_radius,
                    "cargo events must drop at colony.depot");
        }
    } else {
        const auto& p = c.monitoring;
        require(!p.nodes.empty(), "monitoring.nodes must not be empty");
        require(p.rate_accumulate > 0.0 && p.rate_collect > 0.0, "monitoring rates must be positive");
        require(p.info_max > 0.0, "monitoring.info_max must be positive");
        require(p.diameter > 0.0, "monitoring.diameter must be positive");
        require(p.service_radius > 0.0, "monitoring.service_radius must be positive");
        for (const auto& e : c.events) {
            require(e.kind == EventKind::RobotRemoval, "monitoring scenarios only accept removal events");
        }
    }
}

// ---- signals and costs ------------------------------------------------------

/// s_1 = E_c / E_max and s_2 = 1 - c / c_max, clamped to [0,1].
inline std::vector<double> colony_signals(const ScenarioConfig& c, double energy, int cargo) {
    return {std::clamp(energy / c.colony.energy_max, 0.0, 1.0),
            std::clamp(1.0 - static_cast<double>(cargo) / c.colony.cargo_capacity, 0.0, 1.0)};
}

/// s_k = 1 - R_k / R_max, clamped to [0,1].
inline double monitoring_signal(const ScenarioConfig& c, double info) {
    return std::clamp(1.0 - info / c.monitoring.info_max, 0.0, 1.0);
}

/// Distance from the robot to node k (1-based) over D, capped at 1: the
/// square's diagonal is longer than D, so corners would otherwise exceed it.
inline double monitoring_cost(const ScenarioConfig& c, Vec2 robot, std::size_t node) {
    return std::min(1.0, norm(c.monitoring.nodes.at(node - 1) - robot) / c.monitoring.diameter);
}

// ---- file form --------------------------------------------------------------

namespace detail {

using nlohmann::json;

inline json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

inline const char* kind_name(ScenarioKind k) { return k == ScenarioKind::Colony ? "colony" : "monitoring"; }

/// Reads keys out of one JSON object and complains about any it never read.
class StrictObject {
public:
    StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ScenarioError(where("") + "expected an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            convert(*it, out);
        } catch (const json::exception& e) {
            throw ScenarioError(where(key) + e.what());
        }
    }

    [[nodiscard]] const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    [[nodiscard]] std::string where(const std::string& key) const {
        std::string p = path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
        return p.empty() ? std::string{} : "'" + p + "': ";
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.contains(it.key())) throw ScenarioError(where(it.key()) + "unknown key");
        }
    }

private:
    template <class T>
    static void convert(const json& j, T& out) {
        out = j.get<T>();
    }
    static void convert(const json& j, Vec2& out) {
        const auto v = j.get<std::vector<double>>();
        if (v.size() != 2) throw ScenarioError("a point needs two coordinates");
        out = {v[0], v[1]};
    }
    static void convert(const json& j, std::vector<Vec2>& out) {
        out.clear();
        for (const auto& p : j) {
            Vec2 v;
            convert(p, v);
            out.push_back(v);
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace detail

inline nlohmann::json to_json(const ScenarioConfig& c) {
    using detail::json;
    using detail::vec_json;
    json j;
    j["kind"] = detail::kind_name(c.kind);
    j["seed"] = c.seed;
    j["dt"] = c.dt;
    j["t_final"] = c.t_final;
    j["robots"] = {{"count", c.robots},
                   {"v_max", c.v_max},
                   {"radius", c.robot_radius},
                   {"idle_slot_radius", c.idle_slot_radius}};
    j["barrier"] = {{"alpha", c.cbf_alpha}};
    j["domain"] = {{"center", vec_json(c.domain_center)}, {"outer_radius", c.outer_radius}};
    j["tasks"] = {{"gamma", c.gamma}};
    if (c.kind == ScenarioKind::Colony) {
        const auto& p = c.colony;
        j["colony"] = {{"inner_radius", p.inner_radius},   {"sensing_range", p.sensing_range},
                       {"energy_source", p.energy_source}, {"energy_drain", p.energy_drain},
                       {"energy_max", p.energy_max},       {"energy_initial", p.energy_initial},
                       {"cargo_capacity", p.cargo_capacity}, {"depot", vec_json(p.depot)},
                       {"depot_wait", p.depot_wait},       {"depot_radius", p.depot_radius},
                       {"sources", p.sources},             {"return_noise", p.return_noise},
                       {"costs", p.costs}};
    } else {
        const auto& p = c.monitoring;
        json nodes = json::array();
        for (auto v : p.nodes) nodes.push_back(vec_json(v));
        j["monitoring"] = {{"rate_accumulate", p.rate_accumulate}, {"rate_collect", p.rate_collect},
                           {"info_max", p.info_max},               {"diameter", p.diameter},
                           {"service_radius", p.service_radius},   {"idle_point", vec_json(p.idle_point)},
                           {"nodes", nodes}};
    }
    json events = json::array();
    for (const auto& e : c.events) {
        if (e.kind == EventKind::CargoDelivery) {
            events.push_back({{"time", e.time}, {"type", "cargo"}, {"amount", e.amount}, {"location", vec_json(e.location)}});
        } else {
            events.push_back({{"time", e.time}, {"type", "removal"}, {"count", e.amount}});
        }
    }
    j["events"] = events;
    return j;
}

inline ScenarioConfig from_json(const nlohmann::json& j) {
    detail::StrictObject top(j, "");
    std::string kind = "colony";
    top.read("kind", kind);
    ScenarioConfig c;
    if (kind == "colony") {
        c = colony_default();
    } else if (kind == "monitoring") {
        c = monitoring_default();
    } else {
        throw ScenarioError("'kind': expected \"colony\" or \"monitoring\", got \"" + kind + "\"");
    }
    top.read("seed", c.seed);
    top.read("dt", c.dt);
    top.read("t_final", c.t_final);
    if (const auto* r = top.child("robots")) {
        detail::StrictObject o(*r, "robots");
        o.read("count", c.robots);
        o.read("v_max", c.v_max);
        o.read("radius", c.robot_radius);
        o.read("idle_slot_radius", c.idle_slot_radius);
        o.finish();
    }
    if (const auto* b = top.child("barrier")) {
        detail::StrictObject o(*b, "barrier");
        o.read("alpha", c.cbf_alpha);
        o.finish();
    }
    if (const auto* d = top.child("domain")) {
        detail::StrictObject o(*d, "domain");
        o.read("center", c.domain_center);
        o.read("outer_radius", c.outer_radius);
        o.finish();
    }
    if (const auto* t = top.child("tasks")) {
        detail::StrictObject o(*t, "tasks");
        o.read("gamma", c.gamma);
        o.finish();
    }
    if (const auto* s = top.child("colony")) {
        if (c.kind != ScenarioKind::Colony) throw ScenarioError("'colony': section not allowed for monitoring");
        detail::StrictObject o(*s, "colony");
        auto& p = c.colony;
        o.read("inner_radius", p.inner_radius);
        o.read("sensing_range", p.sensing_range);
        o.read("energy_source", p.energy_source);
        o.read("energy_drain", p.energy_drain);
        o.read("energy_max", p.energy_max);
        o.read("energy_initial", p.energy_initial);
        o.read("cargo_capacity", p.cargo_capacity);
        o.read("depot", p.depot);
        o.read("depot_wait", p.depot_wait);
        o.read("depot_radius", p.depot_radius);
        o.read("sources", p.sources);
        o.read("return_noise", p.return_noise);
        o.read("costs", p.costs);
        o.finish();
    }
    if (const auto* s = top.child("monitoring")) {
        if (c.kind != ScenarioKind::Monitoring) throw ScenarioError("'monitoring': section not allowed for colony");
        detail::StrictObject o(*s, "monitoring");
        auto& p = c.monitoring;
        o.read("rate_accumulate", p.rate_accumulate);
        o.read("rate_collect", p.rate_collect);
        o.read("info_max", p.info_max);
        o.read("diameter", p.diameter);
        o.read("service_radius", p.service_radius);
        o.read("idle_point", p.idle_point);
        o.read("nodes", p.nodes);
        o.finish();
    }
    if (const auto* ev = top.child("events")) {
        if (!ev->is_array()) throw ScenarioError("'events': expected an array");
        c.events.clear();
        for (std::size_t i = 0; i < ev->size(); ++i) {
            detail::StrictObject o((*ev)[i], "events[" + std::to_string(i) + "]");
            ScheduledEvent e;
            std::string type;
            o.read("time", e.time);
            o.read("type", type);
            if (type == "cargo") {
                e.kind = EventKind::CargoDelivery;
                o.read("amount", e.amount);
                o.read("location", e.location);
            } else if (type == "removal") {
                e.kind = EventKind::RobotRemoval;
                o.read("count", e.amount);
            } else {
                throw ScenarioError(o.where("type") + "expected \"cargo\" or \"removal\"");
            }
            o.finish();
            c.events.push_back(e);
        }
    }
    top.finish();
    validate(c);
    return c;
}

/// 1-based line of byte offset `pos` in `text`.
inline std::size_t line_of(const std::string& text, std::size_t pos) {
    pos = std::min(pos, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

/// Parses JSON text, turning syntax errors into "line N: ..." diagnostics.
inline nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(source + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                            ": syntax error: " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<scenario>") {
    const auto j = parse_json_text(text, source);
    try {
        return from_json(j);
    } catch (const ScenarioError& e) {
        throw ScenarioError(source + ": " + e.what());
    }
}

inline std::string dump_scenario(const ScenarioConfig& c) { return to_json(c).dump(2) + "\n"; }

/// A built-in name ("colony", "monitoring") or a path to a scenario file.
inline ScenarioConfig load_scenario(const std::string& name_or_path) {
    if (name_or_path == "colony") return colony_default();
    if (name_or_path == "monitoring") return monitoring_default();
    return parse_scenario(read_text_file(name_or_path), name_or_path);
}

/// Applies "a.b.c=value" to the file form and re-reads it. The value is
/// taken as JSON when it parses, otherwise as a string.
inline ScenarioConfig apply_override(const ScenarioConfig& c, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ScenarioError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    auto value = nlohmann::json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    auto j = to_json(c);
    nlohmann::json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ScenarioError("override '" + assignment + "': empty key segment");
        if (dot == std::string::npos) {
            if (!node->is_object()) throw ScenarioError("override '" + assignment + "': '" + part + "' has no parent section");
            (*node)[part] = value;
            break;
        }
        if (!node->is_object() || !node->contains(part)) {
            throw ScenarioError("override '" + assignment + "': unknown section '" + part + "'");
        }
        node = &(*node)[part];
        start = dot + 1;
    }
    try {
        return from_json(j);
    } catch (const ScenarioError& e) {
        throw ScenarioError("override '" + assignment + "': " + e.what());
    }
}

}  // namespace ggta
