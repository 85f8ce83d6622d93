#pragma once

// Per-robot velocity filter: track a reference velocity under a speed limit,
// a disk-shaped domain and pairwise collision barriers.
//
// Barrier rows (alpha is the class-K gain):
//   containment   2 q.v <= alpha (R_o^2 - |q|^2),   q = p - center
//   neighbor j    d.v   >= -(alpha / 4) (|d|^2 - r^2), d = p - p_j
// Both robots of a pair enforce their half of the pairwise condition, and
// because |d|^2 is convex the discrete update keeps
//   h(t + dt) >= (1 - alpha dt) h(t),
// so separation survives any step with alpha dt <= 1. v = 0 satisfies every
// row whenever the current state is safe.
//
// The QP is two-dimensional, so it is solved exactly: the optimum is either
// v_ref itself, a projection onto one active row or the speed circle, or the
// intersection of two of them. All candidates are enumerated and the
// closest feasible one wins.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ggta {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const noexcept { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o) noexcept {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) noexcept { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }
constexpr double norm2(Vec2 v) noexcept { return dot(v, v); }

/// Unit vector towards `to`, scaled to `speed` but never past the target
/// within one step of length `dt`.
inline Vec2 approach_velocity(Vec2 from, Vec2 to, double speed, double dt) {
    const Vec2 d = to - from;
    const double dist = norm(d);
    if (dist <= 0.0) return {};
    return d * (std::min(speed, dist / dt) / dist);
}

struct VelocityQP {
    Vec2 v_ref;
    Vec2 position;
    std::vector<Vec2> neighbor_positions;
    double v_max = 1.0;
    double r = 0.25;      // minimum centre distance
    double R_o = 30.0;    // domain radius around `center`
    Vec2 center;
    double alpha = 1.0;   // barrier gain, 1/s
};

struct FilteredVelocity {
    Vec2 v;
    bool deadlock = false;  // no feasible velocity; v is zero
    std::size_t rows = 0;   // barrier rows built
};

namespace detail {

/// Half-plane a.v <= b with |a| = 1.
struct HalfPlane {
    Vec2 a;
    double b;
};

inline constexpr double kRowTol = 1e-12;

}  // namespace detail

/// Closest velocity to v_ref satisfying the speed limit and every barrier row.
inline FilteredVelocity filter_velocity(const VelocityQP& qp) {
    if (!(qp.v_max > 0.0) || !(qp.r > 0.0) || !(qp.R_o > qp.r) || !(qp.alpha > 0.0)) {
        throw std::invalid_argument("filter_velocity: need v_max > 0, r > 0, R_o > r, alpha > 0");
    }
    using detail::HalfPlane;
    std::vector<HalfPlane> rows;
    rows.reserve(qp.neighbor_positions.size() + 1);
    FilteredVelocity out;

    // Rows with a vanishing normal are either always true or never true.
    auto push = [&](Vec2 a, double b) {
        const double len = norm(a);
        if (len < 1e-15) {
            if (b < 0.0) out.deadlock = true;
            return;
        }
        rows.push_back({a / len, b / len});
    };

    const Vec2 q = qp.position - qp.center;
    push(q * 2.0, qp.alpha * (qp.R_o * qp.R_o - norm2(q)));
    for (const Vec2& pj : qp.neighbor_positions) {
        const Vec2 d = qp.position - pj;
        const double h = norm2(d) - qp.r * qp.r;
        push(d * -1.0, 0.25 * qp.alpha * h);
    }
    out.rows = rows.size();
    if (out.deadlock) return out;

    const double vmax = qp.v_max;
    auto feasible = [&](Vec2 v) {
        if (norm(v) > vmax * (1.0 + 1e-12)) return false;
        for (const auto& row : rows) {
            if (dot(row.a, v) > row.b + detail::kRowTol * std::max(1.0, std::abs(row.b))) return false;
        }
        return true;
    };

    Vec2 best;
    double best_cost = std::numeric_limits<double>::infinity();
    bool found = false;
    auto consider = [&](Vec2 v) {
        if (!feasible(v)) return;
        const double cost = norm2(v - qp.v_ref);
        if (cost < best_cost) {
            best_cost = cost;
            best = v;
            found = true;
        }
    };

    const double ref_speed = norm(qp.v_ref);
    consider(ref_speed > vmax ? qp.v_ref * (vmax / ref_speed) : qp.v_ref);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& ri = rows[i];
        // Projection onto the line, then the line's crossings with the speed circle.
        const Vec2 foot = ri.a * ri.b;
        consider(qp.v_ref - ri.a * (dot(ri.a, qp.v_ref) - ri.b));
        const double half_chord2 = vmax * vmax - ri.b * ri.b;
        if (half_chord2 >= 0.0) {
            const Vec2 along{-ri.a.y, ri.a.x};
            const double half_chord = std::sqrt(half_chord2);
            consider(foot + along * half_chord);
            consider(foot - along * half_chord);
        }
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const auto& rj = rows[j];
            const double det = cross(ri.a, rj.a);
            if (std::abs(det) < 1e-14) continue;
            consider(Vec2{(ri.b * rj.a.y - rj.b * ri.a.y) / det, (ri.a.x * rj.b - rj.a.x * ri.b) / det});
        }
    }

    if (found) {
        out.v = best;
    } else {
        out.deadlock = true;
    }
    return out;
}

}  // namespace ggta
