#include <gtest/gtest.h>

#include "ggta/scenario.hpp"
#include "ggta/sim.hpp"

using namespace ggta;

TEST(ColonyDefault, TableValues) {
    const auto c = colony_default();
    EXPECT_EQ(c.kind, ScenarioKind::Colony);
    EXPECT_EQ(c.robots, 12);
    EXPECT_EQ(c.num_tasks(), 2u);
    EXPECT_EQ(c.gamma, (std::vector<double>{12.0, 7.2}));
    EXPECT_DOUBLE_EQ(c.colony.sensing_range, 5.0);
    EXPECT_DOUBLE_EQ(c.robot_radius, 0.25);
    EXPECT_DOUBLE_EQ(c.outer_radius, 30.0);
    EXPECT_DOUBLE_EQ(c.colony.inner_radius, 5.0);
    EXPECT_DOUBLE_EQ(c.colony.energy_source, 4.0);
    EXPECT_DOUBLE_EQ(c.colony.energy_drain, 0.1);
    EXPECT_EQ(c.colony.costs, (std::vector<double>{0.0, 0.0}));
    EXPECT_DOUBLE_EQ(c.t_final, 600.0);
    EXPECT_EQ(c.colony.cargo_capacity, 10);
    ASSERT_EQ(c.events.size(), 3u);
    EXPECT_DOUBLE_EQ(c.events[0].time, 120.0);
    EXPECT_DOUBLE_EQ(c.events[1].time, 225.0);
    EXPECT_DOUBLE_EQ(c.events[2].time, 172.5);
    EXPECT_EQ(c.events[2].kind, EventKind::RobotRemoval);
    EXPECT_EQ(c.events[2].amount, 6);
    EXPECT_EQ(c.events[0].amount, 10);
    EXPECT_EQ(c.events[0].location, (Vec2{20.0, 0.0}));
}

TEST(ColonyDefault, SignalMapping) {
    const auto c = colony_default();
    const auto s = colony_signals(c, 50.0, 0);
    EXPECT_DOUBLE_EQ(s[0], 0.5);
    EXPECT_DOUBLE_EQ(s[1], 1.0);
    EXPECT_DOUBLE_EQ(colony_signals(c, 150.0, 10)[0], 1.0);
    EXPECT_DOUBLE_EQ(colony_signals(c, 150.0, 10)[1], 0.0);
    EXPECT_DOUBLE_EQ(colony_signals(c, -3.0, 25)[0], 0.0);
    EXPECT_DOUBLE_EQ(colony_signals(c, -3.0, 25)[1], 0.0);
}

TEST(MonitoringDefault, TableValues) {
    const auto c = monitoring_default();
    EXPECT_EQ(c.robots, 4);
    EXPECT_EQ(c.num_tasks(), 5u);
    EXPECT_DOUBLE_EQ(c.monitoring.rate_accumulate, 0.75);
    EXPECT_DOUBLE_EQ(c.monitoring.rate_collect, 2.0);
    EXPECT_DOUBLE_EQ(c.monitoring.info_max, 1.0);
    EXPECT_DOUBLE_EQ(c.robot_radius, 0.04);
    EXPECT_DOUBLE_EQ(c.monitoring.diameter, 4.0);
    EXPECT_DOUBLE_EQ(c.v_max, 4.0);
    EXPECT_EQ(c.monitoring.idle_point, (Vec2{2.0, 2.0}));
    EXPECT_GE(c.t_final, 1000.0);
    // Nodes sit inside the 4 m square.
    for (Vec2 n : c.monitoring.nodes) {
        EXPECT_GE(n.x, 0.0);
        EXPECT_LE(n.x, 4.0);
        EXPECT_GE(n.y, 0.0);
        EXPECT_LE(n.y, 4.0);
    }
}

TEST(MonitoringDefault, CostsAndSignals) {
    const auto c = monitoring_default();
    for (std::size_t k = 1; k <= 5; ++k) EXPECT_EQ(monitoring_cost(c, c.monitoring.nodes[k - 1], k), 0.0);
    EXPECT_DOUBLE_EQ(monitoring_signal(c, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(monitoring_signal(c, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(monitoring_signal(c, 0.25), 0.75);
    EXPECT_LE(monitoring_cost(c, {0.0, 0.0}, 1), 1.0);
}

TEST(Scenario, DefaultsGiveValidInstancesAtStart) {
    for (const auto& c : {colony_default(), monitoring_default()}) {
        EXPECT_NO_THROW(validate(c));
        const auto w = init_world(c, 1);
        const auto inst = build_instance(c, w);
        EXPECT_NO_THROW(inst.validate());
        EXPECT_EQ(inst.total_idle(), c.robots);
    }
}

TEST(ScenarioFile, RoundTripIsLossless) {
    for (auto c : {colony_default(), monitoring_default()}) {
        c.seed = 987654321;
        c.dt = 0.05;
        c.gamma[0] = 1.0 / 3.0;
        c.domain_center = {0.1, -0.7};
        EXPECT_EQ(parse_scenario(dump_scenario(c)), c);
    }
}

TEST(ScenarioFile, PartialFileFillsDefaults) {
    const auto c = parse_scenario(R"({"kind": "monitoring", "t_final": 50})");
    auto expected = monitoring_default();
    expected.t_final = 50;
    EXPECT_EQ(c, expected);
}

TEST(ScenarioFile, UnknownKeysRejected) {
    EXPECT_THROW(parse_scenario(R"({"kind": "colony", "colour": 1})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"robots": {"count": 3, "speed": 2}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"kind": "colony", "monitoring": {}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"events": [{"time": 1, "type": "meteor"}]})"), ScenarioError);
}

TEST(ScenarioFile, SyntaxErrorNamesLine) {
    try {
        parse_scenario("{\n  \"kind\": \"colony\",\n  \"dt\": ,\n}", "bad.json");
        FAIL() << "expected a syntax error";
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.json:3"), std::string::npos) << e.what();
    }
}

TEST(ScenarioFile, TypeErrorsAndValidation) {
    EXPECT_THROW(parse_scenario(R"({"dt": "fast"})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"dt": -1})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"kind": "swarm"})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"tasks": {"gamma": [1, 2, 3]}})"), ScenarioError);
    EXPECT_THROW(parse_scenario(R"({"barrier": {"alpha": 20}})"), ScenarioError);
}

TEST(ScenarioOverride, DottedKeys) {
    auto c = apply_override(colony_default(), "colony.energy_drain=10");
    EXPECT_DOUBLE_EQ(c.colony.energy_drain, 10.0);
    c = apply_override(c, "robots.count=20");
    EXPECT_EQ(c.robots, 20);
    c = apply_override(c, "tasks.gamma=[5,6]");
    EXPECT_EQ(c.gamma, (std::vector<double>{5.0, 6.0}));
    c = apply_override(c, "t_final=30");
    EXPECT_DOUBLE_EQ(c.t_final, 30.0);
}

TEST(ScenarioOverride, Errors) {
    EXPECT_THROW(apply_override(colony_default(), "colony.energy_drian=10"), ScenarioError);
    EXPECT_THROW(apply_override(colony_default(), "nothing"), ScenarioError);
    EXPECT_THROW(apply_override(colony_default(), "planet.mass=3"), ScenarioError);
    EXPECT_THROW(apply_override(colony_default(), "robots.count=abc"), ScenarioError);
}

TEST(LoadScenario, BuiltinNames) {
    EXPECT_EQ(load_scenario("colony"), colony_default());
    EXPECT_EQ(load_scenario("monitoring"), monitoring_default());
    EXPECT_THROW(load_scenario("/no/such/file.json"), ScenarioError);
}
