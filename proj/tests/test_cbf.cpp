#include <gtest/gtest.h>

#include <cmath>

#include "ggta/cbf.hpp"
#include "ggta/rng.hpp"

using namespace ggta;

namespace {

/// Row values a.v - b for the barrier rows, recomputed from scratch.
double worst_row(const VelocityQP& qp, Vec2 v) {
    const Vec2 q = qp.position - qp.center;
    double worst = 2.0 * dot(q, v) - qp.alpha * (qp.R_o * qp.R_o - norm2(q));
    for (Vec2 pj : qp.neighbor_positions) {
        const Vec2 d = qp.position - pj;
        worst = std::max(worst, -dot(d, v) - 0.25 * qp.alpha * (norm2(d) - qp.r * qp.r));
    }
    return worst;
}

}  // namespace

TEST(FilterVelocity, UnconstrainedPassesThrough) {
    VelocityQP qp;
    qp.v_ref = {0.3, -0.4};
    const auto out = filter_velocity(qp);
    EXPECT_EQ(out.v, qp.v_ref);
    EXPECT_FALSE(out.deadlock);
}

TEST(FilterVelocity, ProjectsOntoSpeedBall) {
    VelocityQP qp;
    qp.v_ref = {3.0, 4.0};
    const auto out = filter_velocity(qp);
    EXPECT_NEAR(out.v.x, 0.6, 1e-12);
    EXPECT_NEAR(out.v.y, 0.8, 1e-12);
}

TEST(FilterVelocity, ContainmentStopsOutwardMotionAtEdge) {
    VelocityQP qp;
    qp.position = {30.0, 0.0};
    qp.v_ref = {1.0, 0.0};
    const auto out = filter_velocity(qp);
    EXPECT_LE(out.v.x, 1e-12);
    EXPECT_FALSE(out.deadlock);
}

TEST(FilterVelocity, RejectsBadParameters) {
    VelocityQP qp;
    qp.v_max = 0.0;
    EXPECT_THROW(filter_velocity(qp), std::invalid_argument);
    qp = {};
    qp.R_o = 0.1;
    EXPECT_THROW(filter_velocity(qp), std::invalid_argument);
}

TEST(FilterVelocity, CoincidentNeighborIsDeadlock) {
    VelocityQP qp;
    qp.v_ref = {1.0, 0.0};
    qp.neighbor_positions = {{0.0, 0.0}};
    const auto out = filter_velocity(qp);
    EXPECT_TRUE(out.deadlock);
    EXPECT_EQ(out.v, (Vec2{0.0, 0.0}));
}

TEST(FilterVelocity, HeadOnIsSymmetricAndSafe) {
    const double r = 0.25, dt = 0.1;
    Vec2 a{-2.0, 0.0}, b{2.0, 0.0};
    double closest = norm(a - b);
    for (int s = 0; s < 200; ++s) {
        VelocityQP qa, qb;
        qa.position = a;
        qa.v_ref = {1.0, 0.0};
        qa.neighbor_positions = {b};
        qb.position = b;
        qb.v_ref = {-1.0, 0.0};
        qb.neighbor_positions = {a};
        const auto va = filter_velocity(qa).v;
        const auto vb = filter_velocity(qb).v;
        EXPECT_NEAR(va.x, -vb.x, 1e-12);
        EXPECT_NEAR(va.y, -vb.y, 1e-12);
        a += va * dt;
        b += vb * dt;
        closest = std::min(closest, norm(a - b));
    }
    EXPECT_GE(closest, r - 1e-6);
}

TEST(FilterVelocityProperty, FeasibleAndOptimalAgainstSampling) {
    RandomStream rng(21);
    for (int rep = 0; rep < 3000; ++rep) {
        VelocityQP qp;
        qp.r = 0.25;
        qp.R_o = 5.0;
        qp.v_max = rng.uniform(0.5, 2.0);
        qp.alpha = rng.uniform(0.5, 5.0);
        const double rad = 4.9 * std::sqrt(rng.uniform());
        const double ang = 6.283185307179586 * rng.uniform();
        qp.position = {rad * std::cos(ang), rad * std::sin(ang)};
        qp.v_ref = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        const int n = static_cast<int>(rng.below(6));
        for (int j = 0; j < n; ++j) {
            const double d = rng.uniform(0.26, 1.2);
            const double phi = 6.283185307179586 * rng.uniform();
            qp.neighbor_positions.push_back(qp.position + Vec2{d * std::cos(phi), d * std::sin(phi)});
        }
        const auto out = filter_velocity(qp);
        // The start is safe, so v = 0 is feasible and the filter cannot deadlock.
        ASSERT_FALSE(out.deadlock);
        EXPECT_LE(norm(out.v), qp.v_max + 1e-9);
        EXPECT_LE(worst_row(qp, out.v), 1e-9);
        // No sampled feasible velocity is closer to v_ref.
        const double best = norm2(out.v - qp.v_ref);
        for (int t = 0; t < 200; ++t) {
            const double sr = qp.v_max * std::sqrt(rng.uniform());
            const double sa = 6.283185307179586 * rng.uniform();
            const Vec2 v{sr * std::cos(sa), sr * std::sin(sa)};
            if (worst_row(qp, v) <= 0.0) { EXPECT_GE(norm2(v - qp.v_ref), best - 1e-9); }
        }
    }
}

TEST(ApproachVelocity, NeverOvershoots) {
    const Vec2 v = approach_velocity({0, 0}, {0.05, 0}, 1.0, 0.1);
    EXPECT_NEAR(v.x, 0.5, 1e-12);
    EXPECT_EQ(approach_velocity({1, 1}, {1, 1}, 1.0, 0.1), (Vec2{0, 0}));
    EXPECT_NEAR(norm(approach_velocity({0, 0}, {10, 10}, 2.0, 0.1)), 2.0, 1e-12);
}
