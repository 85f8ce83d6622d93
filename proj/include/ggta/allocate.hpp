#pragma once

// Iterated elimination of dominated strategies.
//
// 1. Groups without idle robots sit out; identical-cost groups are pooled.
// 2. Each task is offered to its cheapest player and the idle-feasible closed
//    form is evaluated. If every player keeps a nonnegative idle probability
//    this is already the equilibrium.
// 3. Otherwise a primal active-set search takes over. The equilibrium
//    maximizes a concave potential over the players' flows
//    x_k^i = n_0^i p_k^i, and the working support is kept as a forest whose
//    nodes are players, tasks and one shared "idle" node. On a forest the
//    indifference conditions have a unique solution found by propagation
//    along the tree, so every round is linear in the support size.
//    Infeasible solutions are approached only up to the first flow that hits
//    zero and that edge leaves the support; profitable edges outside it
//    (a costlier group joining once the cheaper pool is exhausted, a group
//    dropping idle) enter, and an entering edge that would close a cycle is
//    absorbed by shifting flow around the cycle.
// 4. Should the search stall, Gauss-Seidel best response on the potential
//    is the fallback. The oracle certifies whatever comes out.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ggta/equilibrium.hpp"
#include "ggta/game.hpp"
#include "ggta/solvers.hpp"

namespace ggta {

struct AllocationResult {
    MixedStrategy strategy;
    SupportSet support;
    EquilibriumReport report;
    int support_rounds = 0;  // forest solves in step 3
    bool used_best_response = false;
};

namespace detail {

inline constexpr double kAdmitTol = 1e-11;
inline constexpr double kFlowTol = 1e-12;

/// Flows in robot units: flow[p][k] for tasks, flow[p][0] is the idle mass.
using PlayerFlows = std::vector<std::vector<double>>;

struct ForestSolution {
    PlayerFlows flow;
    std::vector<double> lambda;  // common value of each player's support
};

struct SearchOutcome {
    bool converged = false;
    PlayerProbs probs;
    int rounds = 0;
    int pricing_rounds = 0;
};

/// Working support as an adjacency structure. Node ids: players 0..np-1,
/// task k at np+k-1, the idle node last.
class SupportForest {
public:
    SupportForest(std::size_t players, std::size_t tasks)
        : np_(players), m_(tasks), adj_(players + tasks + 1) {}

    [[nodiscard]] std::size_t players() const noexcept { return np_; }
    [[nodiscard]] std::size_t tasks() const noexcept { return m_; }
    [[nodiscard]] std::size_t idle_node() const noexcept { return np_ + m_; }
    [[nodiscard]] std::size_t node_of(std::size_t action) const noexcept {
        return action == 0 ? idle_node() : np_ + action - 1;
    }
    [[nodiscard]] std::size_t action_of(std::size_t node) const noexcept {
        return node == idle_node() ? 0 : node - np_ + 1;
    }
    [[nodiscard]] const std::vector<std::size_t>& neighbors(std::size_t node) const { return adj_[node]; }

    [[nodiscard]] bool has(std::size_t player, std::size_t action) const {
        const auto& a = adj_[player];
        return std::find(a.begin(), a.end(), node_of(action)) != a.end();
    }
    void add(std::size_t player, std::size_t action) {
        const std::size_t v = node_of(action);
        adj_[player].push_back(v);
        adj_[v].push_back(player);
    }
    void remove(std::size_t player, std::size_t action) {
        const std::size_t v = node_of(action);
        std::erase(adj_[player], v);
        std::erase(adj_[v], player);
    }

    /// Node path from `from` to `to` through the forest, empty if they lie in
    /// different trees.
    [[nodiscard]] std::vector<std::size_t> path(std::size_t from, std::size_t to) const {
        std::vector<std::size_t> parent(adj_.size(), kNone);
        std::vector<std::size_t> queue{from};
        parent[from] = from;
        for (std::size_t head = 0; head < queue.size() && parent[to] == kNone; ++head) {
            for (std::size_t w : adj_[queue[head]]) {
                if (parent[w] == kNone) {
                    parent[w] = queue[head];
                    queue.push_back(w);
                }
            }
        }
        if (parent[to] == kNone) return {};
        std::vector<std::size_t> out{to};
        while (out.back() != from) out.push_back(parent[out.back()]);
        std::reverse(out.begin(), out.end());
        return out;
    }

    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

private:
    std::size_t np_;
    std::size_t m_;
    std::vector<std::vector<std::size_t>> adj_;
};

/// Unique optimum of the potential restricted to the forest's edges. Within
/// a tree all values are fixed up to one shift: an idle player pins it at
/// zero, otherwise the tree's total demand must equal its players' pools.
/// Flows then follow by peeling leaves towards the root.
/// Only entries on forest edges are written; `assigned[k]` is |n_k|.
inline void solve_forest(const ProblemInstance& inst, const std::vector<Player>& players,
                         const std::vector<double>& assigned, const SupportForest& forest, ForestSolution& sol) {
    const std::size_t np = players.size();
    const std::size_t m = inst.num_tasks();
    const std::size_t idle = forest.idle_node();
    constexpr std::size_t none = SupportForest::kNone;

    sol.flow.resize(np, std::vector<double>(m + 1, 0.0));
    sol.lambda.assign(np, 0.0);

    std::vector<std::size_t> parent(idle, none);
    std::vector<double> offset(idle, 0.0);  // lambda for players, mu for tasks
    std::vector<std::size_t> order;
    std::vector<double> demand(m + 1, 0.0);

    for (std::size_t root = 0; root < np; ++root) {
        if (parent[root] != none) continue;
        // Collect the tree, rooted at its idle player when it has one.
        order.clear();
        order.push_back(root);
        parent[root] = root;
        std::size_t idle_root = forest.has(root, 0) ? root : none;
        for (std::size_t head = 0; head < order.size(); ++head) {
            const std::size_t u = order[head];
            for (std::size_t w : forest.neighbors(u)) {
                if (w == idle) continue;
                if (parent[w] == none) {
                    parent[w] = u;
                    order.push_back(w);
                    if (w < np && forest.has(w, 0)) idle_root = w;
                }
            }
        }
        if (idle_root != none && idle_root != root) {
            for (std::size_t u : order) parent[u] = none;
            order.assign(1, idle_root);
            parent[idle_root] = idle_root;
            for (std::size_t head = 0; head < order.size(); ++head) {
                const std::size_t u = order[head];
                for (std::size_t w : forest.neighbors(u)) {
                    if (w != idle && parent[w] == none) {
                        parent[w] = u;
                        order.push_back(w);
                    }
                }
            }
        }
        const std::size_t top = order.front();

        offset[top] = 0.0;
        for (std::size_t idx = 1; idx < order.size(); ++idx) {
            const std::size_t u = order[idx];
            const std::size_t p = parent[u];
            offset[u] = u < np ? offset[p] - players[u].costs[p - np] : offset[p] + players[p].costs[u - np];
        }

        double shift = 0.0;
        if (idle_root == none) {
            double supply = 0.0;
            double free_demand = 0.0;
            double gamma_sum = 0.0;
            for (std::size_t u : order) {
                if (u < np) {
                    supply += players[u].idle;
                } else {
                    const std::size_t k = u - np + 1;
                    free_demand += inst.gamma(k) * (1.0 - inst.signal(k) - offset[u]) - assigned[k];
                    gamma_sum += inst.gamma(k);
                }
            }
            if (gamma_sum > 0.0) shift = (free_demand - supply) / gamma_sum;
        }

        for (std::size_t u : order) {
            if (u < np) {
                sol.lambda[u] = offset[u] + shift;
            } else {
                const std::size_t k = u - np + 1;
                demand[k] = inst.gamma(k) * (1.0 - inst.signal(k) - offset[u] - shift) - assigned[k];
            }
        }

        // Leaves first: a task's parent edge carries what its children do not
        // cover, a player's parent edge carries what its children do not use.
        for (std::size_t idx = order.size(); idx-- > 1;) {
            const std::size_t u = order[idx];
            const std::size_t p = parent[u];
            if (u < np) {
                double used = 0.0;
                for (std::size_t w : forest.neighbors(u)) {
                    if (w != idle && w != p) used += sol.flow[u][w - np + 1];
                }
                sol.flow[u][p - np + 1] = players[u].idle - used;
            } else {
                const std::size_t k = u - np + 1;
                double covered = 0.0;
                for (std::size_t w : forest.neighbors(u)) {
                    if (w != p) covered += sol.flow[w][k];
                }
                sol.flow[p][k] = demand[k] - covered;
            }
        }
        if (idle_root != none) {
            double used = 0.0;
            for (std::size_t w : forest.neighbors(top)) {
                if (w != idle) used += sol.flow[top][w - np + 1];
            }
            sol.flow[top][0] = players[top].idle - used;
        }
    }
}

/// Task values 1 - s_k - load_k / gamma_k with flows read off the forest.
inline std::vector<double> task_values(const ProblemInstance& inst, const std::vector<double>& assigned,
                                       const SupportForest& forest, const PlayerFlows& flow) {
    const std::size_t np = forest.players();
    std::vector<double> mu(inst.num_tasks() + 1, 0.0);
    for (std::size_t k = 1; k <= inst.num_tasks(); ++k) {
        double load = assigned[k];
        for (std::size_t p : forest.neighbors(np + k - 1)) load += flow[p][k];
        mu[k] = 1.0 - inst.signal(k) - load / inst.gamma(k);
    }
    return mu;
}

/// Flow on edge (player, action); the idle edge carries the unassigned pool.
inline double& edge_flow(PlayerFlows& flow, std::size_t player, std::size_t action) { return flow[player][action]; }

/// Shifts flow around the cycle closed by (player, action) until some edge
/// on it empties, then drops that edge. Loads and pools are unchanged.
inline void pivot_cycle(const std::vector<std::size_t>& path, std::size_t player, std::size_t action,
                        SupportForest& forest, PlayerFlows& flow) {
    // path runs from node(action) to player; its edges alternate -,+,-,...
    const std::size_t np = forest.players();
    double step = std::numeric_limits<double>::infinity();
    std::size_t block = 0;
    for (std::size_t e = 0; e + 1 < path.size(); e += 2) {
        const std::size_t a = path[e] < np ? path[e] : path[e + 1];
        const std::size_t v = path[e] < np ? path[e + 1] : path[e];
        const double f = flow[a][forest.action_of(v)];
        if (f < step) {
            step = f;
            block = e;
        }
    }
    for (std::size_t e = 0; e + 1 < path.size(); ++e) {
        const std::size_t a = path[e] < np ? path[e] : path[e + 1];
        const std::size_t v = path[e] < np ? path[e + 1] : path[e];
        edge_flow(flow, a, forest.action_of(v)) += (e % 2 == 0 ? -step : step);
    }
    flow[player][action] += step;
    const std::size_t a = path[block] < np ? path[block] : path[block + 1];
    const std::size_t v = path[block] < np ? path[block + 1] : path[block];
    flow[a][forest.action_of(v)] = 0.0;
    forest.remove(a, forest.action_of(v));
    forest.add(player, action);
}

/// Step 3. `start` is the closed-form support; the search begins at the
/// all-idle point, which lies on it.
inline SearchOutcome forest_search(const ProblemInstance& inst, const std::vector<Player>& players,
                                   SupportForest forest) {
    const std::size_t np = players.size();
    const std::size_t m = inst.num_tasks();
    SearchOutcome out;

    std::vector<double> assigned(m + 1, 0.0);
    for (std::size_t k = 1; k <= m; ++k) assigned[k] = inst.assigned_total(k);
    PlayerFlows x(np, std::vector<double>(m + 1, 0.0));
    for (std::size_t p = 0; p < np; ++p) x[p][0] = players[p].idle;
    ForestSolution y;

    const int budget = static_cast<int>(8 * (np + m)) + 64;
    while (out.rounds < budget) {
        ++out.rounds;
        solve_forest(inst, players, assigned, forest, y);

        // Ratio test towards the face optimum.
        double step = 1.0;
        std::size_t bp = 0;
        std::size_t ba = 0;
        bool blocked = false;
        for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t v : forest.neighbors(p)) {
                const std::size_t a = forest.action_of(v);
                const double target = y.flow[p][a];
                if (target >= -kFlowTol) continue;
                const double t = x[p][a] / (x[p][a] - target);
                if (!blocked || t < step) {
                    step = t;
                    bp = p;
                    ba = a;
                    blocked = true;
                }
            }
        }
        if (blocked) {
            for (std::size_t p = 0; p < np; ++p) {
                for (std::size_t v : forest.neighbors(p)) {
                    const std::size_t a = forest.action_of(v);
                    x[p][a] += step * (y.flow[p][a] - x[p][a]);
                }
            }
            x[bp][ba] = 0.0;
            forest.remove(bp, ba);
            // A player left without any edge falls back to idle.
            if (forest.neighbors(bp).empty()) {
                forest.add(bp, 0);
                x[bp][0] = players[bp].idle;
            }
            continue;
        }

        for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t v : forest.neighbors(p)) {
                const std::size_t a = forest.action_of(v);
                x[p][a] = std::max(y.flow[p][a], 0.0);
            }
        }
        const auto mu = task_values(inst, assigned, forest, x);
        ++out.pricing_rounds;

        // Pricing: best gain per player against its current common value.
        struct Entry {
            double gain;
            std::size_t player;
            std::size_t action;
        };
        std::vector<Entry> entering;
        for (std::size_t p = 0; p < np; ++p) {
            const bool idle_in = forest.has(p, 0);
            const double value = idle_in ? 0.0 : y.lambda[p];
            Entry best{kAdmitTol, p, 0};
            bool found = false;
            if (!idle_in && -value > best.gain) {
                best.gain = -value;
                found = true;
            }
            for (std::size_t k = 1; k <= m; ++k) {
                const double gain = mu[k] - players[p].costs[k - 1] - value;
                if (gain > best.gain && !forest.has(p, k)) {
                    best = Entry{gain, p, k};
                    found = true;
                }
            }
            if (found) entering.push_back(best);
        }
        if (entering.empty()) {
            out.converged = true;
            break;
        }
        std::sort(entering.begin(), entering.end(), [](const Entry& a, const Entry& b) {
            return a.gain != b.gain ? a.gain > b.gain : a.player < b.player;
        });

        bool merged = false;
        for (const auto& e : entering) {
            auto path = forest.path(forest.node_of(e.action), e.player);
            if (path.empty()) {
                forest.add(e.player, e.action);
                merged = true;
            } else if (!merged) {
                // Nothing else changed yet, so every other edge on the cycle
                // is tight and the shift gains exactly e.gain per unit.
                pivot_cycle(path, e.player, e.action, forest, x);
                break;
            }
        }
    }

    out.probs.assign(np, std::vector<double>(m + 1, 0.0));
    for (std::size_t p = 0; p < np; ++p) {
        double used = 0.0;
        for (std::size_t k = 1; k <= m; ++k) {
            out.probs[p][k] = x[p][k] / players[p].idle;
            used += out.probs[p][k];
        }
        out.probs[p][0] = 1.0 - used;
    }
    return out;
}

/// Exact best response of one player to everyone else's loads: fill tasks
/// until their value drops to a common level lambda >= 0, with the total
/// capped by the player's idle pool.
inline void best_response(const ProblemInstance& inst, const Player& player, const std::vector<double>& other_load,
                          std::vector<double>& flow) {
    const std::size_t m = inst.num_tasks();
    // flow_k = max(0, h_k - gamma_k * lambda)
    std::vector<double> h(m + 1, 0.0);
    double free_total = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        const double g = inst.gamma(k);
        h[k] = g * (1.0 - inst.signal(k) - player.costs[k - 1]) - other_load[k];
        free_total += std::max(0.0, h[k]);
    }
    double lambda = 0.0;
    if (free_total > player.idle) {
        // Breakpoints h_k / gamma_k in decreasing order; sum is piecewise linear in lambda.
        std::vector<std::size_t> order;
        for (std::size_t k = 1; k <= m; ++k) {
            if (h[k] > 0.0) order.push_back(k);
        }
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return h[a] / inst.gamma(a) > h[b] / inst.gamma(b); });
        double sum_h = 0.0;
        double sum_g = 0.0;
        for (std::size_t idx = 0; idx < order.size(); ++idx) {
            const std::size_t k = order[idx];
            sum_h += h[k];
            sum_g += inst.gamma(k);
            lambda = (sum_h - player.idle) / sum_g;
            const double next = idx + 1 < order.size() ? h[order[idx + 1]] / inst.gamma(order[idx + 1]) : 0.0;
            if (lambda >= next) break;
        }
    }
    for (std::size_t k = 1; k <= m; ++k) flow[k] = std::max(0.0, h[k] - inst.gamma(k) * lambda);
}

/// Step 4: Gauss-Seidel best response on the potential until it settles.
inline SearchOutcome best_response_search(const ProblemInstance& inst, const std::vector<Player>& players) {
    const std::size_t m = inst.num_tasks();
    const std::size_t np = players.size();
    PlayerFlows flow(np, std::vector<double>(m + 1, 0.0));
    std::vector<double> load(m + 1, 0.0);
    for (std::size_t k = 1; k <= m; ++k) load[k] = inst.assigned_total(k);

    SearchOutcome out;
    constexpr int kMaxSweeps = 200000;
    for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            std::vector<double> next(m + 1, 0.0);
            for (std::size_t k = 1; k <= m; ++k) load[k] -= flow[p][k];
            best_response(inst, players[p], load, next);
            for (std::size_t k = 1; k <= m; ++k) {
                moved = std::max(moved, std::abs(next[k] - flow[p][k]));
                load[k] += next[k];
            }
            flow[p] = std::move(next);
        }
        ++out.rounds;
        if (moved < 1e-14) {
            out.converged = true;
            break;
        }
    }

    out.probs.assign(np, std::vector<double>(m + 1, 0.0));
    for (std::size_t p = 0; p < np; ++p) {
        double used = 0.0;
        for (std::size_t k = 1; k <= m; ++k) {
            out.probs[p][k] = flow[p][k] / players[p].idle;
            used += out.probs[p][k];
        }
        out.probs[p][0] = 1.0 - used;
    }
    return out;
}

/// Final cleanup so every row is a distribution: tiny negatives from
/// round-off are zeroed and the idle entry absorbs the remainder.
inline void tidy_rows(MixedStrategy& s) {
    for (std::size_t i = 0; i < s.num_groups(); ++i) {
        double assigned = 0.0;
        for (std::size_t a = 1; a < s.num_actions(); ++a) {
            double& p = s(i, a);
            p = std::clamp(p, 0.0, 1.0);
            if (p <= kZeroTol) p = 0.0;
            assigned += p;
        }
        if (assigned > 1.0) {
            for (std::size_t a = 1; a < s.num_actions(); ++a) s(i, a) /= assigned;
            assigned = 1.0;
        }
        s(i, 0) = 1.0 - assigned;
        if (s(i, 0) <= kZeroTol) s(i, 0) = 0.0;
    }
}

}  // namespace detail

/// Mixed Nash equilibrium of one assignment round, its supports, and the
/// oracle's certificate for it.
inline AllocationResult allocate(const ProblemInstance& inst) {
    inst.validate();
    const std::size_t m = inst.num_tasks();
    const auto players = detail::pool_players(inst);

    AllocationResult result;
    if (players.empty()) {
        result.strategy = MixedStrategy::all_idle(inst.num_groups(), inst.num_actions());
    } else {
        auto probs = detail::cheapest_player_probs(inst, players);
        const bool idle_feasible = std::all_of(probs.begin(), probs.end(),
                                               [](const auto& row) { return row[0] >= -kZeroTol; });
        if (!idle_feasible) {
            // Closed-form support: idle for everyone plus each task's cheapest player.
            detail::SupportForest forest(players.size(), m);
            for (std::size_t p = 0; p < players.size(); ++p) forest.add(p, 0);
            for (std::size_t k = 1; k <= m; ++k) {
                std::size_t best = 0;
                for (std::size_t p = 1; p < players.size(); ++p) {
                    if (players[p].costs[k - 1] < players[best].costs[k - 1]) best = p;
                }
                if (probs[best][k] > 0.0) forest.add(best, k);
            }
            auto found = detail::forest_search(inst, players, std::move(forest));
            result.support_rounds = found.rounds;
            if (!found.converged) {
                found = detail::best_response_search(inst, players);
                result.used_best_response = true;
            }
            probs = std::move(found.probs);
        }
        result.strategy = detail::expand_to_groups(inst, players, probs);
        detail::tidy_rows(result.strategy);
    }
    result.support = SupportSet::of(result.strategy);
    result.report = verify_equilibrium(inst, result.strategy);
    return result;
}

}  // namespace ggta
