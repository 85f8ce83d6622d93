#pragma once

// Fixed-step simulator for the colony-maintenance and persistent-monitoring
// experiments. One call to `step` advances the world by dt:
//
//   events -> behavior transitions -> signal dynamics -> allocation of idle
//   robots -> reference velocities -> barrier filter -> integration
//
// Transitions run before allocation so a robot that finishes its task is
// re-assigned in the same step.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ggta/allocate.hpp"
#include "ggta/cbf.hpp"
#include "ggta/game.hpp"
#include "ggta/rng.hpp"
#include "ggta/scenario.hpp"

namespace ggta {

enum class Behavior {
    IdleAtBase,
    RandomWalkTarget,
    ApproachItem,
    ReturnHome,
    TravelToDepot,
    WaitAtDepot,
    TravelToNode,
    ServiceNode,
};

enum class ItemKind { EnergySource, Cargo };

struct Item {
    ItemKind kind = ItemKind::EnergySource;
    int id = 0;
    bool operator==(const Item&) const = default;
};

struct RobotState {
    int id = 0;
    int group = 0;
    Vec2 position;
    Vec2 home;  // idle slot
    int assigned_task = 0;
    Behavior behavior = Behavior::IdleAtBase;
    Vec2 target;                  // walk target, item, depot or node position
    int target_id = -1;           // source index or node (1-based)
    double wait_remaining = 0.0;  // s, at the depot
    std::optional<Item> payload;
    double energy = 0.0;          // E_robot, <= 0: motion energy not yet restored
    std::optional<Vec2> memory;   // last source picked up
    RandomStream assign_rng;
    RandomStream walk_rng;
};

struct EventSchedule {
    std::vector<ScheduledEvent> events;  // sorted by time, stable
    std::size_t next = 0;

    static EventSchedule from(const std::vector<ScheduledEvent>& list) {
        EventSchedule s{list, 0};
        std::stable_sort(s.events.begin(), s.events.end(),
                         [](const ScheduledEvent& a, const ScheduledEvent& b) { return a.time < b.time; });
        return s;
    }
};

enum class RunStatus { Running, Completed, EnergyDepleted };

struct WorldState {
    long step = 0;
    double clock = 0.0;
    std::vector<RobotState> robots;

    double energy = 0.0;  // E_c
    int cargo_depot = 0;
    int cargo_in_transit = 0;
    int cargo_delivered = 0;
    int cargo_arrived = 0;  // everything ever dropped at the depot
    int cargo_scheduled = 0;

    std::vector<double> info;  // R_k, index k-1
    std::vector<Vec2> sources;

    RandomStream world_rng;
    EventSchedule schedule;
    std::optional<double> first_cargo_time;  // scheduled time of the first drop
    RunStatus status = RunStatus::Running;
    int next_robot_id = 0;
};

/// What one step did, for metrics and bookkeeping checks.
struct StepReport {
    int deliveries = 0;          // energy sources dropped in the colony
    double charged = 0.0;        // J drawn from the colony to recharge robots
    double motion_energy = 0.0;  // J spent moving this step
    double removed_deficit = 0.0;
    int removed = 0;
    int deadlocks = 0;
    std::vector<int> released;  // ids that finished a task and went idle this step
    double min_distance = std::numeric_limits<double>::infinity();
    double max_radius = 0.0;  // from the domain center
    double conservation_residual = 0.0;
};

struct MetricsRow {
    double t = 0.0;
    double energy = 0.0;
    double system_energy = 0.0;
    int cargo = 0;
    int n_idle = 0;
    std::vector<int> n_task;
    std::vector<double> info;
    double min_distance = 0.0;
    int delivered = 0;
    int deadlocks = 0;
};

struct RunMetrics {
    ScenarioKind kind = ScenarioKind::Colony;
    std::size_t tasks = 0;
    std::vector<MetricsRow> rows;

    RunStatus status = RunStatus::Running;
    double final_energy = 0.0;
    std::optional<double> all_cargo_elapsed;  // s from the first cargo drop to the step that finished delivery
    long deadlock_robot_steps = 0;
    long deadlock_steps = 0;
    long robot_steps = 0;
    double min_distance_safe = std::numeric_limits<double>::infinity();  // over steps without deadlock
    double max_radius = 0.0;
    double max_conservation_residual = 0.0;
    bool allocation_valid = true;
};

// ---- signal-state dynamics ---------------------------------------------------

/// Explicit Euler step of the colony energy: leakage, delivered sources and
/// the energy handed to recharging robots.
inline double colony_energy_step(const ColonyParams& p, double energy, int deliveries, double charged, double dt) {
    return energy - p.energy_drain * dt + deliveries * p.energy_source - charged;
}

struct RobotEnergyUpdate {
    double energy = 0.0;  // new E_robot
    double drawn = 0.0;   // J taken from the colony by charging
};

/// Motion drains 0.1 E_drain at full speed; charging restores E_robot to 0.
inline RobotEnergyUpdate robot_energy_step(const ColonyParams& p, double energy, double speed, double v_max,
                                           bool charging, double dt) {
    if (charging) return {0.0, -energy};
    return {energy - 0.1 * p.energy_drain * (speed / v_max) * dt, 0.0};
}

inline double node_information_step(const MonitoringParams& p, double info, int robots_in_range, double dt) {
    return std::clamp(info + (p.rate_accumulate - p.rate_collect * robots_in_range) * dt, 0.0, p.info_max);
}

// ---- geometry helpers --------------------------------------------------------

namespace detail {

inline constexpr double kWaypointTolerance = 0.5;  // m, random-walk targets
inline constexpr double kPickupTolerance = 0.25;   // m, energy sources

/// Clamp a point into the annulus R_i <= |p| <= R_o around the origin.
inline Vec2 project_annulus(Vec2 p, double inner, double outer) {
    const double d = norm(p);
    if (d > outer) return p * (outer / d);
    if (d < inner) return d > 0.0 ? p * (inner / d) : Vec2{inner, 0.0};
    return p;
}

inline double neighbor_radius(const ScenarioConfig& c) {
    return std::max(4.0 * c.robot_radius, 2.0 * c.robot_radius + 2.0 * c.v_max * c.dt);
}

inline bool in_colony(const ScenarioConfig& c, Vec2 p) { return norm(p) <= c.colony.inner_radius; }

inline void become_idle(RobotState& r) {
    r.assigned_task = 0;
    r.behavior = Behavior::IdleAtBase;
    r.target = r.home;
    r.target_id = -1;
    r.payload.reset();
}

inline Vec2 random_walk_target(const ScenarioConfig& c, RobotState& r) {
    const double heading = 2.0 * std::numbers::pi * r.walk_rng.uniform();
    const Vec2 raw = r.position + Vec2{std::cos(heading), std::sin(heading)} * c.colony.sensing_range;
    return project_annulus(raw, c.colony.inner_radius, c.outer_radius);
}

}  // namespace detail

/// Harvesting behavior for one robot. Switches to ApproachItem when a source
/// is within sensing range, draws a new walk target once the current one is
/// reached, and returns the reference velocity.
inline Vec2 random_walk_step(RobotState& r, const ScenarioConfig& c, const std::vector<Vec2>& sources) {
    if (r.behavior == Behavior::RandomWalkTarget) {
        int nearest = -1;
        double best = c.colony.sensing_range;
        for (std::size_t s = 0; s < sources.size(); ++s) {
            const double d = norm(sources[s] - r.position);
            if (d <= best) {
                best = d;
                nearest = static_cast<int>(s);
            }
        }
        if (nearest >= 0) {
            r.behavior = Behavior::ApproachItem;
            r.target_id = nearest;
            r.target = sources[static_cast<std::size_t>(nearest)];
        } else if (norm(r.target - r.position) <= detail::kWaypointTolerance) {
            r.target = detail::random_walk_target(c, r);
        }
    }
    return approach_velocity(r.position, r.target, c.v_max, c.dt);
}

// ---- world setup -------------------------------------------------------------

inline WorldState init_world(const ScenarioConfig& c, std::uint64_t seed) {
    validate(c);
    WorldState w;
    w.world_rng = RandomStream(derive_seed(seed, "world"));
    w.schedule = EventSchedule::from(c.events);
    for (const auto& e : c.events) {
        if (e.kind == EventKind::CargoDelivery) w.cargo_scheduled += e.amount;
    }

    const auto n = static_cast<std::size_t>(c.robots);
    Vec2 base = c.kind == ScenarioKind::Colony ? Vec2{} : c.monitoring.idle_point;
    for (std::size_t i = 0; i < n; ++i) {
        RobotState r;
        r.id = static_cast<int>(i);
        r.group = c.kind == ScenarioKind::Colony ? 0 : static_cast<int>(i);
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        r.home = base + Vec2{std::cos(angle), std::sin(angle)} * c.idle_slot_radius;
        r.position = r.home;
        r.target = r.home;
        r.assign_rng = RandomStream(derive_seed(seed, "assign", i));
        r.walk_rng = RandomStream(derive_seed(seed, "walk", i));
        w.robots.push_back(std::move(r));
    }
    w.next_robot_id = c.robots;

    if (c.kind == ScenarioKind::Colony) {
        w.energy = c.colony.energy_initial;
        // Start positions uniform in the colony disk, kept apart by 4r.
        const double spread = c.colony.inner_radius - c.robot_radius;
        for (std::size_t i = 0; i < n; ++i) {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                const double rad = spread * std::sqrt(w.world_rng.uniform());
                const double ang = 2.0 * std::numbers::pi * w.world_rng.uniform();
                const Vec2 p{rad * std::cos(ang), rad * std::sin(ang)};
                bool clear = true;
                for (std::size_t j = 0; j < i; ++j) {
                    if (norm(w.robots[j].position - p) < 4.0 * c.robot_radius) clear = false;
                }
                if (clear) {
                    w.robots[i].position = p;
                    break;
                }
            }
        }
        const double r2_in = c.colony.inner_radius * c.colony.inner_radius;
        const double r2_out = c.outer_radius * c.outer_radius;
        for (int s = 0; s < c.colony.sources; ++s) {
            const double rad = std::sqrt(r2_in + (r2_out - r2_in) * w.world_rng.uniform());
            const double ang = 2.0 * std::numbers::pi * w.world_rng.uniform();
            w.sources.push_back({rad * std::cos(ang), rad * std::sin(ang)});
        }
    } else {
        w.info.assign(c.num_tasks(), 0.0);
    }
    return w;
}

/// Total system energy: colony store minus what robots have spent moving.
inline double system_energy(const WorldState& w) {
    double s = w.energy;
    for (const auto& r : w.robots) s += r.energy;
    return s;
}

inline std::vector<int> task_counts(const WorldState& w, std::size_t tasks) {
    std::vector<int> n(tasks + 1, 0);
    for (const auto& r : w.robots) ++n[static_cast<std::size_t>(r.assigned_task)];
    return n;
}

/// The allocation game seen by the idle robots. Colony robots form one
/// group; in the monitoring scenario every robot is its own group with
/// distance costs.
inline ProblemInstance build_instance(const ScenarioConfig& c, const WorldState& w) {
    ProblemInstance inst;
    const std::size_t m = c.num_tasks();
    for (std::size_t k = 1; k <= m; ++k) inst.tasks.push_back({static_cast<int>(k), c.gamma[k - 1]});
    if (c.kind == ScenarioKind::Colony) {
        inst.signals = colony_signals(c, w.energy, w.cargo_depot);
        inst.groups.push_back({1, c.colony.costs});
        inst.counts = AssignmentCounts(1, m + 1, 0);
        for (const auto& r : w.robots) ++inst.counts(0, static_cast<std::size_t>(r.assigned_task));
    } else {
        for (double info : w.info) inst.signals.push_back(monitoring_signal(c, info));
        inst.counts = AssignmentCounts(w.robots.size(), m + 1, 0);
        for (std::size_t i = 0; i < w.robots.size(); ++i) {
            GroupSpec g{static_cast<int>(i + 1), {}};
            for (std::size_t k = 1; k <= m; ++k) g.costs.push_back(monitoring_cost(c, w.robots[i].position, k));
            inst.groups.push_back(std::move(g));
            inst.counts(i, static_cast<std::size_t>(w.robots[i].assigned_task)) = 1;
        }
    }
    return inst;
}

namespace detail {

inline void apply_events(WorldState& w, StepReport& rep) {
    auto& s = w.schedule;
    while (s.next < s.events.size() && s.events[s.next].time <= w.clock + 1e-9) {
        const auto& e = s.events[s.next++];
        if (e.kind == EventKind::CargoDelivery) {
            w.cargo_depot += e.amount;
            w.cargo_arrived += e.amount;
            if (!w.first_cargo_time) w.first_cargo_time = e.time;
            continue;
        }
        // Removal: uniform without replacement (partial Fisher-Yates).
        const std::size_t count = std::min(static_cast<std::size_t>(e.amount), w.robots.size());
        std::vector<std::size_t> idx(w.robots.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(w.world_rng.below(idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        std::vector<bool> gone(w.robots.size(), false);
        for (std::size_t i = 0; i < count; ++i) gone[idx[i]] = true;
        std::vector<RobotState> kept;
        for (std::size_t i = 0; i < w.robots.size(); ++i) {
            auto& r = w.robots[i];
            if (!gone[i]) {
                kept.push_back(std::move(r));
                continue;
            }
            if (r.payload && r.payload->kind == ItemKind::Cargo) {
                ++w.cargo_depot;
                --w.cargo_in_transit;
            }
            rep.removed_deficit -= r.energy;
            ++rep.removed;
        }
        w.robots = std::move(kept);
    }
}

inline void colony_transitions(const ScenarioConfig& c, WorldState& w, StepReport& rep) {
    const auto& p = c.colony;
    for (auto& r : w.robots) {
        switch (r.behavior) {
            case Behavior::ApproachItem:
                if (norm(r.target - r.position) <= kPickupTolerance) {
                    // Sources regrow where they were, so the spot is worth remembering.
                    r.payload = Item{ItemKind::EnergySource, r.target_id};
                    r.memory = r.target;
                    r.behavior = Behavior::ReturnHome;
                    r.target = {};
                }
                break;
            case Behavior::ReturnHome:
                if (in_colony(c, r.position)) {
                    if (r.payload && r.payload->kind == ItemKind::EnergySource) {
                        ++rep.deliveries;
                    } else if (r.payload && r.payload->kind == ItemKind::Cargo) {
                        --w.cargo_in_transit;
                        ++w.cargo_delivered;
                    }
                    become_idle(r);
                }
                break;
            case Behavior::TravelToDepot:
                if (norm(p.depot - r.position) <= p.depot_radius) {
                    r.behavior = Behavior::WaitAtDepot;
                    r.wait_remaining = p.depot_wait;
                }
                break;
            case Behavior::WaitAtDepot:
                r.wait_remaining -= c.dt;
                if (r.wait_remaining <= 1e-9) {
                    if (w.cargo_depot > 0) {
                        --w.cargo_depot;
                        ++w.cargo_in_transit;
                        r.payload = Item{ItemKind::Cargo, w.cargo_delivered + w.cargo_in_transit};
                    }
                    r.behavior = Behavior::ReturnHome;
                    r.target = {};
                }
                break;
            default:
                break;
        }
    }
}

inline void monitoring_transitions(const ScenarioConfig& c, WorldState& w) {
    for (auto& r : w.robots) {
        if (r.behavior == Behavior::TravelToNode && norm(r.target - r.position) <= c.monitoring.service_radius) {
            r.behavior = Behavior::ServiceNode;
        }
        if (r.behavior == Behavior::ServiceNode && w.info[static_cast<std::size_t>(r.target_id - 1)] <= 0.0) {
            become_idle(r);
        }
    }
}

inline void start_task(const ScenarioConfig& c, RobotState& r, int task) {
    r.assigned_task = task;
    if (c.kind == ScenarioKind::Monitoring) {
        r.behavior = Behavior::TravelToNode;
        r.target_id = task;
        r.target = c.monitoring.nodes[static_cast<std::size_t>(task - 1)];
        return;
    }
    if (task == 2) {
        r.behavior = Behavior::TravelToDepot;
        r.target = c.colony.depot;
        return;
    }
    r.behavior = Behavior::RandomWalkTarget;
    if (r.memory) {
        // Head back to the remembered source, blurred in proportion to the trip.
        const double sigma = c.colony.return_noise * norm(*r.memory - r.position);
        const Vec2 noisy = *r.memory + Vec2{r.walk_rng.normal(), r.walk_rng.normal()} * sigma;
        r.target = project_annulus(noisy, c.colony.inner_radius, c.outer_radius);
    } else {
        r.target = random_walk_target(c, r);
    }
}

inline Vec2 reference_velocity(const ScenarioConfig& c, const WorldState& w, RobotState& r) {
    switch (r.behavior) {
        case Behavior::RandomWalkTarget:
        case Behavior::ApproachItem:
            return random_walk_step(r, c, w.sources);
        case Behavior::ReturnHome:
            return approach_velocity(r.position, {}, c.v_max, c.dt);
        case Behavior::WaitAtDepot:
            return {};
        default:
            return approach_velocity(r.position, r.target, c.v_max, c.dt);
    }
}

}  // namespace detail

/// Advances the world by one step of c.dt. Returns what happened; sets
/// w.status to EnergyDepleted when the colony runs dry.
inline StepReport step(WorldState& w, const ScenarioConfig& c, bool* allocation_valid = nullptr) {
    StepReport rep;
    const bool colony = c.kind == ScenarioKind::Colony;
    const double before = system_energy(w);

    // (1) events and task completions
    detail::apply_events(w, rep);
    std::vector<int> busy;
    for (const auto& r : w.robots) {
        if (r.assigned_task != 0) busy.push_back(r.id);
    }
    if (colony) {
        detail::colony_transitions(c, w, rep);
    } else {
        detail::monitoring_transitions(c, w);
    }
    for (const auto& r : w.robots) {
        if (r.assigned_task == 0 && std::find(busy.begin(), busy.end(), r.id) != busy.end()) rep.released.push_back(r.id);
    }

    // (2) signal-state dynamics
    if (colony) {
        for (auto& r : w.robots) {
            if (detail::in_colony(c, r.position) && r.energy != 0.0) {
                const auto upd = robot_energy_step(c.colony, r.energy, 0.0, c.v_max, true, c.dt);
                rep.charged += upd.drawn;
                r.energy = upd.energy;
            }
        }
        w.energy = colony_energy_step(c.colony, w.energy, rep.deliveries, rep.charged, c.dt);
    } else {
        for (std::size_t k = 0; k < w.info.size(); ++k) {
            int in_range = 0;
            for (const auto& r : w.robots) {
                if (norm(r.position - c.monitoring.nodes[k]) <= c.monitoring.service_radius) ++in_range;
            }
            w.info[k] = node_information_step(c.monitoring, w.info[k], in_range, c.dt);
        }
    }

    // (3)-(4) signals and one allocation round for the idle robots
    const bool any_idle = std::any_of(w.robots.begin(), w.robots.end(), [](const RobotState& r) { return r.assigned_task == 0; });
    if (any_idle) {
        const auto inst = build_instance(c, w);
        const auto alloc = allocate(inst);
        if (allocation_valid != nullptr && !alloc.report.valid) *allocation_valid = false;
        for (std::size_t i = 0; i < w.robots.size(); ++i) {
            auto& r = w.robots[i];
            if (r.assigned_task != 0) continue;
            const std::size_t row = colony ? 0 : i;
            const int a = sample_assignment(alloc.strategy, row, r.assign_rng.uniform());
            if (a != 0) detail::start_task(c, r, a);
        }
    }

    // (5)-(6) reference velocities through the barrier filter
    std::vector<Vec2> velocity(w.robots.size());
    std::vector<Vec2> snapshot(w.robots.size());
    for (std::size_t i = 0; i < w.robots.size(); ++i) snapshot[i] = w.robots[i].position;
    const double reach = detail::neighbor_radius(c);
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
        auto& r = w.robots[i];
        VelocityQP qp;
        qp.v_ref = detail::reference_velocity(c, w, r);
        qp.position = snapshot[i];
        qp.v_max = c.v_max;
        qp.r = c.robot_radius;
        qp.R_o = c.outer_radius;
        qp.center = c.domain_center;
        qp.alpha = c.cbf_alpha;
        for (std::size_t j = 0; j < snapshot.size(); ++j) {
            if (j != i && norm(snapshot[j] - snapshot[i]) <= reach) qp.neighbor_positions.push_back(snapshot[j]);
        }
        const auto f = filter_velocity(qp);
        velocity[i] = f.v;
        if (f.deadlock) ++rep.deadlocks;
    }

    // (7) integrate positions and motion energy
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
        auto& r = w.robots[i];
        r.position += velocity[i] * c.dt;
        if (colony) {
            const double spent = 0.1 * c.colony.energy_drain * (norm(velocity[i]) / c.v_max) * c.dt;
            r.energy -= spent;
            rep.motion_energy += spent;
        }
        rep.max_radius = std::max(rep.max_radius, norm(r.position - c.domain_center));
    }
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
        for (std::size_t j = i + 1; j < w.robots.size(); ++j) {
            rep.min_distance = std::min(rep.min_distance, norm(w.robots[i].position - w.robots[j].position));
        }
    }

    ++w.step;
    w.clock = static_cast<double>(w.step) * c.dt;

    if (colony) {
        const double expected = before - c.colony.energy_drain * c.dt + rep.deliveries * c.colony.energy_source -
                                rep.motion_energy + rep.removed_deficit;
        rep.conservation_residual = std::abs(system_energy(w) - expected);
        if (w.energy <= 0.0) w.status = RunStatus::EnergyDepleted;
    }
    return rep;
}

inline MetricsRow snapshot_row(const ScenarioConfig& c, const WorldState& w, const StepReport& rep) {
    MetricsRow row;
    row.t = w.clock;
    row.energy = w.energy;
    row.system_energy = system_energy(w);
    row.cargo = w.cargo_depot;
    const auto n = task_counts(w, c.num_tasks());
    row.n_idle = n[0];
    row.n_task.assign(n.begin() + 1, n.end());
    row.info = w.info;
    row.min_distance = rep.min_distance;
    row.delivered = w.cargo_delivered;
    row.deadlocks = rep.deadlocks;
    return row;
}

/// Runs one scenario to t_final or until the colony runs out of energy.
inline RunMetrics run(const ScenarioConfig& c, std::uint64_t seed) {
    auto w = init_world(c, seed);
    RunMetrics m;
    m.kind = c.kind;
    m.tasks = c.num_tasks();
    const long steps = std::lround(c.t_final / c.dt);
    m.rows.reserve(static_cast<std::size_t>(steps));
    while (w.step < steps && w.status == RunStatus::Running) {
        const auto rep = step(w, c, &m.allocation_valid);
        m.rows.push_back(snapshot_row(c, w, rep));
        if (!m.all_cargo_elapsed && w.cargo_scheduled > 0 && w.cargo_delivered == w.cargo_scheduled) {
            m.all_cargo_elapsed = w.clock - w.first_cargo_time.value_or(0.0);
        }
        m.robot_steps += static_cast<long>(w.robots.size());
        m.deadlock_robot_steps += rep.deadlocks;
        if (rep.deadlocks > 0) {
            ++m.deadlock_steps;
        } else {
            m.min_distance_safe = std::min(m.min_distance_safe, rep.min_distance);
        }
        m.max_radius = std::max(m.max_radius, rep.max_radius);
        m.max_conservation_residual = std::max(m.max_conservation_residual, rep.conservation_residual);
    }
    if (w.status == RunStatus::Running) w.status = RunStatus::Completed;
    m.status = w.status;
    m.final_energy = w.energy;
    return m;
}

// ---- CSV ---------------------------------------------------------------------

inline std::string metrics_header(const ScenarioConfig& c) {
    std::string h = "t";
    const std::size_t m = c.num_tasks();
    if (c.kind == ScenarioKind::Colony) {
        h += ",E_colony,E_system,cargo";
    } else {
        for (std::size_t k = 1; k <= m; ++k) h += fmt::format(",R_{}", k);
    }
    h += ",n_idle";
    for (std::size_t k = 1; k <= m; ++k) h += fmt::format(",n_task{}", k);
    h += ",min_dist";
    if (c.kind == ScenarioKind::Colony) h += ",delivered";
    h += ",deadlocks";
    return h;
}

inline void write_metrics_csv(std::ostream& out, const ScenarioConfig& c, const RunMetrics& m) {
    out << metrics_header(c) << '\n';
    std::string line;
    for (const auto& row : m.rows) {
        line = fmt::format("{:.10g}", row.t);
        if (c.kind == ScenarioKind::Colony) {
            line += fmt::format(",{},{},{}", row.energy, row.system_energy, row.cargo);
        } else {
            for (double r : row.info) line += fmt::format(",{}", r);
        }
        line += fmt::format(",{}", row.n_idle);
        for (int n : row.n_task) line += fmt::format(",{}", n);
        line += fmt::format(",{}", row.min_distance);
        if (c.kind == ScenarioKind::Colony) line += fmt::format(",{}", row.delivered);
        line += fmt::format(",{}\n", row.deadlocks);
        out << line;
    }
}

}  // namespace ggta
