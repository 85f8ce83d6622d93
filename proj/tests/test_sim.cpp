#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "ggta/sim.hpp"

using namespace ggta;

namespace {

std::string csv_of(const ScenarioConfig& c, const RunMetrics& m) {
    std::ostringstream out;
    write_metrics_csv(out, c, m);
    return out.str();
}

ScenarioConfig short_colony(double t_final) {
    auto c = colony_default();
    c.t_final = t_final;
    return c;
}

}  // namespace

TEST(ColonyEnergyStep, Examples) {
    const auto p = colony_default().colony;
    EXPECT_NEAR(colony_energy_step(p, 50.0, 0, 0.0, 1.0), 49.9, 1e-12);
    EXPECT_NEAR(colony_energy_step(p, 50.0, 1, 0.0, 0.0), 54.0, 1e-12);
    EXPECT_EQ(colony_energy_step(p, 50.0, 0, 0.0, 0.0), 50.0);
    EXPECT_NEAR(colony_energy_step(p, 50.0, 0, 0.3, 0.0), 49.7, 1e-12);
}

TEST(RobotEnergyStep, Examples) {
    const auto p = colony_default().colony;
    EXPECT_NEAR(robot_energy_step(p, 0.0, 1.0, 1.0, false, 1.0).energy, -0.01, 1e-15);
    EXPECT_EQ(robot_energy_step(p, -0.2, 0.0, 1.0, false, 1.0).energy, -0.2);
    const auto charged = robot_energy_step(p, -0.2, 1.0, 1.0, true, 1.0);
    EXPECT_EQ(charged.energy, 0.0);
    EXPECT_DOUBLE_EQ(charged.drawn, 0.2);
}

TEST(NodeInformationStep, Examples) {
    const auto p = monitoring_default().monitoring;
    EXPECT_DOUBLE_EQ(node_information_step(p, 0.5, 1, 0.2), 0.25);
    EXPECT_EQ(node_information_step(p, 0.5, 1, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(node_information_step(p, 0.1, 0, 1.0), 0.85);
    EXPECT_EQ(node_information_step(p, 1.0, 0, 1.0), 1.0);
    EXPECT_EQ(node_information_step(p, 0.9, 0, 1.0), 1.0);
}

TEST(RandomWalkStep, ReachedTargetDrawsNewOneAtSensingRange) {
    const auto c = colony_default();
    RobotState r;
    r.walk_rng = RandomStream(3);
    r.behavior = Behavior::RandomWalkTarget;
    r.assigned_task = 1;
    r.position = {15.0, 0.0};
    r.target = r.position;
    for (int i = 0; i < 50; ++i) {
        r.target = r.position;
        random_walk_step(r, c, {});
        EXPECT_EQ(r.behavior, Behavior::RandomWalkTarget);
        EXPECT_NEAR(norm(r.target - r.position), c.colony.sensing_range, 1e-12);
    }
}

TEST(RandomWalkStep, SourceInRangeIsApproached) {
    const auto c = colony_default();
    RobotState r;
    r.behavior = Behavior::RandomWalkTarget;
    r.assigned_task = 1;
    r.position = {15.0, 0.0};
    r.target = {15.0, 4.0};
    const std::vector<Vec2> sources{{25.0, 0.0}, {18.0, 3.0}, {14.0, -2.0}};
    const Vec2 v = random_walk_step(r, c, sources);
    EXPECT_EQ(r.behavior, Behavior::ApproachItem);
    EXPECT_EQ(r.target_id, 2);
    EXPECT_EQ(r.target, (Vec2{14.0, -2.0}));
    EXPECT_NEAR(norm(v), c.v_max, 1e-12);
}

TEST(RandomWalkStep, TargetsStayInsideAnnulus) {
    const auto c = colony_default();
    RobotState r;
    r.walk_rng = RandomStream(4);
    r.behavior = Behavior::RandomWalkTarget;
    r.assigned_task = 1;
    bool hit_edge = false;
    for (int i = 0; i < 200; ++i) {
        r.position = {29.9, 0.0};
        r.target = r.position;
        random_walk_step(r, c, {});
        const double d = norm(r.target);
        EXPECT_LE(d, c.outer_radius + 1e-12);
        EXPECT_GE(d, c.colony.inner_radius - 1e-12);
        if (std::abs(d - c.outer_radius) < 1e-12) hit_edge = true;
    }
    EXPECT_TRUE(hit_edge);
}

TEST(Step, SatisfiedColonyOnlyAdvancesClockAndEnergy) {
    auto c = colony_default();
    c.colony.energy_initial = 200.0;  // s_1 stays clamped at 1
    c.events.clear();
    auto w = init_world(c, 5);
    for (auto& r : w.robots) r.position = r.home;
    const auto before = w;
    const auto rep = step(w, c);
    EXPECT_DOUBLE_EQ(w.clock, 0.1);
    EXPECT_NEAR(w.energy, 200.0 - 0.01, 1e-12);
    EXPECT_EQ(rep.deadlocks, 0);
    ASSERT_EQ(w.robots.size(), before.robots.size());
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
        EXPECT_EQ(w.robots[i].position, before.robots[i].position);
        EXPECT_EQ(w.robots[i].assigned_task, 0);
    }
    EXPECT_EQ(w.sources, before.sources);
}

TEST(Step, CargoArrivesAt120Seconds) {
    const auto c = short_colony(121.0);
    const auto m = run(c, 7);
    int at_120 = -1, before = -1;
    for (const auto& row : m.rows) {
        if (std::abs(row.t - 120.1) < 1e-6) at_120 = row.cargo;
        if (std::abs(row.t - 120.0) < 1e-6) before = row.cargo;
    }
    EXPECT_EQ(before, 0);
    EXPECT_EQ(at_120, 10);
}

TEST(Step, RemovalRestoresCarriedCargo) {
    auto c = colony_default();
    c.events = {{0.0, EventKind::RobotRemoval, 12, {}}};
    auto w = init_world(c, 1);
    auto& carrier = w.robots[3];
    carrier.assigned_task = 2;
    carrier.behavior = Behavior::ReturnHome;
    carrier.payload = Item{ItemKind::Cargo, 1};
    carrier.position = {15.0, 0.0};
    carrier.energy = -0.3;
    w.cargo_arrived = 1;
    w.cargo_in_transit = 1;
    const double system_before = system_energy(w);
    const auto rep = step(w, c);
    EXPECT_TRUE(w.robots.empty());
    EXPECT_EQ(rep.removed, 12);
    EXPECT_EQ(w.cargo_depot, 1);
    EXPECT_EQ(w.cargo_in_transit, 0);
    EXPECT_NEAR(rep.removed_deficit, 0.3, 1e-15);
    EXPECT_LE(rep.conservation_residual, 1e-9);
    EXPECT_NEAR(system_energy(w), system_before + 0.3 - 0.01, 1e-12);
}

TEST(Step, RemovalIsUniformWithoutReplacement) {
    auto c = colony_default();
    c.events = {{0.0, EventKind::RobotRemoval, 6, {}}};
    std::map<int, int> removed;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        auto w = init_world(c, seed);
        step(w, c);
        ASSERT_EQ(w.robots.size(), 6u);
        std::vector<bool> kept(12, false);
        for (const auto& r : w.robots) kept[static_cast<std::size_t>(r.id)] = true;
        for (int id = 0; id < 12; ++id) {
            if (!kept[static_cast<std::size_t>(id)]) ++removed[id];
        }
    }
    // Each robot is removed with probability 1/2: 200 +- 4 sigma (sigma = 10).
    for (int id = 0; id < 12; ++id) EXPECT_NEAR(removed[id], 200, 40) << "robot " << id;
}

TEST(Step, EventScheduleIsSorted) {
    const auto s = EventSchedule::from(colony_default().events);
    ASSERT_EQ(s.events.size(), 3u);
    EXPECT_DOUBLE_EQ(s.events[0].time, 120.0);
    EXPECT_DOUBLE_EQ(s.events[1].time, 172.5);
    EXPECT_DOUBLE_EQ(s.events[2].time, 225.0);
}

TEST(SimInvariants, ColonyBookkeepingEveryStep) {
    const auto c = colony_default();
    auto w = init_world(c, 11);
    std::map<int, int> task_of;
    for (const auto& r : w.robots) task_of[r.id] = r.assigned_task;
    const long steps = std::lround(c.t_final / c.dt);
    while (w.step < steps && w.status == RunStatus::Running) {
        const auto rep = step(w, c);
        ASSERT_LE(rep.conservation_residual, 1e-9) << "t=" << w.clock;
        ASSERT_EQ(w.cargo_depot + w.cargo_in_transit + w.cargo_delivered, w.cargo_arrived) << "t=" << w.clock;
        ASSERT_GE(w.cargo_depot, 0);
        for (const auto& r : w.robots) {
            ASSERT_EQ(r.assigned_task == 0, r.behavior == Behavior::IdleAtBase);
            if (r.payload) { ASSERT_EQ(r.behavior, Behavior::ReturnHome); }
            ASSERT_LE(r.energy, 0.0);
            // Hysteresis: only idle -> task or task -> idle. A robot that
            // finished this step may be sampled again in the same step.
            const int prev = task_of[r.id];
            const bool released = std::find(rep.released.begin(), rep.released.end(), r.id) != rep.released.end();
            ASSERT_TRUE(prev == r.assigned_task || prev == 0 || r.assigned_task == 0 || released)
                << "robot " << r.id << " switched " << prev << " -> " << r.assigned_task;
            task_of[r.id] = r.assigned_task;
        }
    }
}

TEST(SimInvariants, ColonyDefaultRunIsSafeAndConserving) {
    const auto c = colony_default();
    const auto m = run(c, 2);
    EXPECT_TRUE(m.allocation_valid);
    EXPECT_EQ(m.rows.size(), 6000u);
    EXPECT_LE(m.max_conservation_residual, 1e-9);
    EXPECT_GE(m.min_distance_safe, c.robot_radius - 1e-6);
    EXPECT_LE(m.max_radius, c.outer_radius + c.v_max * c.dt);
    EXPECT_LT(static_cast<double>(m.deadlock_robot_steps), 0.01 * static_cast<double>(m.robot_steps));
}

TEST(SimInvariants, RobotCountDropsByRemovedAtRemovalStep) {
    const auto c = short_colony(200.0);
    const auto m = run(c, 3);
    int previous = 12;
    for (const auto& row : m.rows) {
        int alive = row.n_idle;
        for (int n : row.n_task) alive += n;
        if (std::abs(row.t - 172.6) < 1e-6) {
            EXPECT_EQ(alive, previous - 6);
        } else {
            EXPECT_EQ(alive, previous) << "t=" << row.t;
        }
        previous = alive;
    }
    EXPECT_EQ(previous, 6);
}

TEST(SimInvariants, MonitoringInformationStaysClamped) {
    auto c = monitoring_default();
    c.t_final = 300.0;
    const auto m = run(c, 4);
    EXPECT_TRUE(m.allocation_valid);
    for (const auto& row : m.rows) {
        for (double r : row.info) {
            ASSERT_GE(r, 0.0);
            ASSERT_LE(r, c.monitoring.info_max);
        }
    }
    EXPECT_GE(m.min_distance_safe, c.robot_radius - 1e-6);
    EXPECT_LE(m.max_radius, c.outer_radius + c.v_max * c.dt);
}

TEST(SimInvariants, SameSeedSameCsv) {
    const auto c = short_colony(250.0);
    EXPECT_EQ(csv_of(c, run(c, 9)), csv_of(c, run(c, 9)));
    EXPECT_NE(csv_of(c, run(c, 9)), csv_of(c, run(c, 10)));
    auto mc = monitoring_default();
    mc.t_final = 100.0;
    EXPECT_EQ(csv_of(mc, run(mc, 9)), csv_of(mc, run(mc, 9)));
}

TEST(Run, FastDrainDepletesAfterFiveSeconds) {
    auto c = colony_default();
    c.colony.energy_drain = 10.0;
    const auto m = run(c, 1);
    EXPECT_EQ(m.status, RunStatus::EnergyDepleted);
    ASSERT_FALSE(m.rows.empty());
    // Colony drain alone empties 50 J in 5 s; recharging up to 12 robots at
    // 0.1 * 10 J/s each can at most bring that forward to 50 / 22 s.
    EXPECT_LE(m.rows.back().t, 5.0 + c.dt);
    EXPECT_GE(m.rows.back().t, 50.0 / 22.0 - c.dt);
    EXPECT_LE(m.final_energy, 0.0);
}

TEST(MetricsCsv, Headers) {
    EXPECT_EQ(metrics_header(colony_default()),
              "t,E_colony,E_system,cargo,n_idle,n_task1,n_task2,min_dist,delivered,deadlocks");
    EXPECT_EQ(metrics_header(monitoring_default()),
              "t,R_1,R_2,R_3,R_4,R_5,n_idle,n_task1,n_task2,n_task3,n_task4,n_task5,min_dist,deadlocks");
}

TEST(MetricsCsv, OneRowPerStep) {
    const auto c = short_colony(10.0);
    const auto csv = csv_of(c, run(c, 1));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
    EXPECT_EQ(csv.substr(csv.find('\n') + 1, 4), "0.1,");
}
