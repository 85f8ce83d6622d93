#pragma once

// Closed-form and linear-system solvers for the mixed equilibrium on a fixed
// support. `allocate` (allocate.hpp) decides which support to hand them.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "ggta/game.hpp"
#include "ggta/linalg.hpp"

namespace ggta {

/// Output of the idle-feasible solvers. When `feasible` is false the idle
/// column holds the raw, negative idle probability and the caller has to
/// fall through to a no-idle solve.
struct IdleSolution {
    MixedStrategy strategy;
    bool feasible = true;
};

/// Interval of signal values for which task k admits a mixed strategy
/// against idling: [1 - (n0 + nk)/gamma, 1 - nk/gamma].
inline std::pair<double, double> signal_range(const TaskSpec& task, int idle, int assigned) {
    if (!(task.gamma > 0.0)) throw ContractViolation("signal_range: gamma must be positive");
    return {1.0 - static_cast<double>(idle + assigned) / task.gamma, 1.0 - static_cast<double>(assigned) / task.gamma};
}

/// Single homogeneous group, idle in the support:
/// p_k = (gamma_k / n0) (1 - s_k - n_k / gamma_k), clamped to [0,1].
inline IdleSolution solve_homogeneous_idle(const ProblemInstance& inst) {
    inst.validate();
    if (inst.num_groups() != 1) throw ContractViolation("solve_homogeneous_idle expects exactly one group");
    const int n0 = inst.idle_count(0);
    if (n0 == 0) throw NoIdleRobots("solve_homogeneous_idle: group has no idle robots");

    IdleSolution out{MixedStrategy(1, inst.num_actions()), true};
    double assigned = 0.0;
    for (std::size_t k = 1; k <= inst.num_tasks(); ++k) {
        const double gamma = inst.gamma(k);
        const double p = gamma / n0 * (1.0 - inst.signal(k) - inst.counts(0, k) / gamma);
        out.strategy(0, k) = std::clamp(p, 0.0, 1.0);
        assigned += out.strategy(0, k);
    }
    out.strategy(0, 0) = 1.0 - assigned;
    out.feasible = out.strategy(0, 0) >= -kZeroTol;
    if (out.feasible) out.strategy(0, 0) = std::max(0.0, out.strategy(0, 0));
    return out;
}

/// Single homogeneous group, idle strictly dominated. Builds the pairwise
/// indifference rows against the lowest-indexed support task j
///   gamma_k p_j - gamma_j p_k = (gamma_k gamma_j (s_k - s_j) + n_k gamma_j - n_j gamma_k) / n0
/// plus the normalization row, and solves them. Entries are returned
/// unclamped so the caller can eliminate nonpositive tasks.
inline MixedStrategy solve_homogeneous_noidle(const ProblemInstance& inst, const std::vector<int>& support) {
    inst.validate();
    if (inst.num_groups() != 1) throw ContractViolation("solve_homogeneous_noidle expects exactly one group");
    const int n0 = inst.idle_count(0);
    if (n0 == 0) throw NoIdleRobots("solve_homogeneous_noidle: group has no idle robots");
    if (support.empty()) throw ContractViolation("solve_homogeneous_noidle: empty support");

    std::vector<int> tasks = support;
    std::sort(tasks.begin(), tasks.end());
    tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
    for (int k : tasks) {
        if (k <= 0 || static_cast<std::size_t>(k) > inst.num_tasks()) {
            throw ContractViolation("solve_homogeneous_noidle: support must hold task indices 1..M only");
        }
    }

    const std::size_t n = tasks.size();
    linalg::DenseMatrix<double> a(n, n);
    std::vector<double> b(n, 0.0);
    const auto j = static_cast<std::size_t>(tasks.front());
    const double gj = inst.gamma(j);
    const double sj = inst.signal(j);
    const double nj = inst.counts(0, j);
    for (std::size_t r = 1; r < n; ++r) {
        const auto k = static_cast<std::size_t>(tasks[r]);
        const double gk = inst.gamma(k);
        a(r - 1, 0) = gk;
        a(r - 1, r) = -gj;
        b[r - 1] = (gk * gj * (inst.signal(k) - sj) + inst.counts(0, k) * gj - nj * gk) / n0;
    }
    for (std::size_t c = 0; c < n; ++c) a(n - 1, c) = 1.0;
    b[n - 1] = 1.0;

    const auto p = linalg::solve_linear(std::move(a), std::move(b));
    MixedStrategy out(1, inst.num_actions());
    for (std::size_t r = 0; r < n; ++r) out(0, static_cast<std::size_t>(tasks[r])) = p[r];
    return out;
}

namespace detail {

/// Robots that take part in this round: groups with idle robots, with groups
/// that have identical cost vectors pooled into one player.
struct Player {
    std::vector<std::size_t> members;
    double idle = 0.0;
    std::vector<double> costs;  // index k-1
};

inline std::vector<Player> pool_players(const ProblemInstance& inst) {
    std::vector<Player> players;
    for (std::size_t i = 0; i < inst.num_groups(); ++i) {
        if (inst.idle_count(i) == 0) continue;
        const auto& costs = inst.groups[i].costs;
        auto same = std::find_if(players.begin(), players.end(), [&](const Player& p) { return p.costs == costs; });
        if (same == players.end()) {
            players.push_back(Player{{i}, static_cast<double>(inst.idle_count(i)), costs});
        } else {
            same->members.push_back(i);
            same->idle += inst.idle_count(i);
        }
    }
    return players;
}

/// Which tasks a player mixes over, and whether idle is among them.
struct PlayerSupport {
    std::vector<int> tasks;  // ascending, 1-based
    bool idle = true;

    auto operator<=>(const PlayerSupport&) const = default;
};

/// gamma_k (1 - s_k) - |n_k|: the load at which task k is worth exactly zero
/// to a zero-cost robot.
inline std::vector<double> task_headroom(const ProblemInstance& inst) {
    std::vector<double> h(inst.num_tasks() + 1, 0.0);
    for (std::size_t k = 1; k <= inst.num_tasks(); ++k) {
        h[k] = inst.gamma(k) * (1.0 - inst.signal(k)) - inst.assigned_total(k);
    }
    return h;
}

/// Per-player probabilities, index 0 is idle.
using PlayerProbs = std::vector<std::vector<double>>;

/// Solves the indifference conditions for the given supports. A player with
/// idle in its support gets one row per task (expected utility zero against
/// idle); a player without idle gets pairwise rows against its lowest task
/// plus a normalization row. Rows couple players only through the shared
/// task loads, so each connected component of the player/task graph is an
/// independent dense system.
inline PlayerProbs solve_support_system(const ProblemInstance& inst, const std::vector<Player>& players,
                                        const std::vector<PlayerSupport>& supports) {
    const std::size_t m = inst.num_tasks();
    const std::size_t np = players.size();
    PlayerProbs probs(np, std::vector<double>(m + 1, 0.0));

    // Union-find over players [0, np) and tasks [np, np + m).
    std::vector<std::size_t> parent(np + m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < np; ++i) {
        if (!supports[i].idle && supports[i].tasks.empty()) {
            throw SingularSystem("player without idle has an empty support");
        }
        for (int k : supports[i].tasks) parent[find(i)] = find(np + static_cast<std::size_t>(k) - 1);
    }

    // Variable index of (player, task) within its component, -1 if absent.
    std::vector<std::vector<long>> var(np, std::vector<long>(m + 1, -1));
    std::vector<std::vector<std::size_t>> members(np + m);
    for (std::size_t i = 0; i < np; ++i) {
        if (!supports[i].tasks.empty()) members[find(i)].push_back(i);
    }

    const auto headroom = task_headroom(inst);
    for (std::size_t root = 0; root < np + m; ++root) {
        const auto& comp = members[root];
        if (comp.empty()) continue;

        std::vector<std::pair<std::size_t, int>> vars;
        for (std::size_t i : comp) {
            for (int k : supports[i].tasks) {
                var[i][static_cast<std::size_t>(k)] = static_cast<long>(vars.size());
                vars.emplace_back(i, k);
            }
        }
        const std::size_t n = vars.size();
        linalg::DenseMatrix<double> a(n, n);
        std::vector<double> b(n, 0.0);
        std::size_t row = 0;

        // sum_l n0^l p_k^l over the players of this component that mix over k.
        auto add_load = [&](std::size_t r, std::size_t k, double scale) {
            for (std::size_t l : comp) {
                const long v = var[l][k];
                if (v >= 0) a(r, static_cast<std::size_t>(v)) += scale * players[l].idle;
            }
        };

        // Tied idle rows (same task, same cost) would repeat; they are replaced
        // by an equal-probability row, which is how tied minimizers are pooled.
        std::vector<std::pair<std::size_t, std::size_t>> idle_rows;  // (task, player)
        for (std::size_t i : comp) {
            const auto& sup = supports[i];
            const auto& c = players[i].costs;
            if (sup.idle) {
                for (int kk : sup.tasks) {
                    const auto k = static_cast<std::size_t>(kk);
                    auto tied = std::find_if(idle_rows.begin(), idle_rows.end(), [&](const auto& e) {
                        return e.first == k && players[e.second].costs[k - 1] == c[k - 1];
                    });
                    if (tied != idle_rows.end()) {
                        a(row, static_cast<std::size_t>(var[i][k])) = 1.0;
                        a(row, static_cast<std::size_t>(var[tied->second][k])) = -1.0;
                    } else {
                        add_load(row, k, 1.0);
                        b[row] = headroom[k] - inst.gamma(k) * c[k - 1];
                        idle_rows.emplace_back(k, i);
                    }
                    ++row;
                }
            } else {
                const auto j = static_cast<std::size_t>(sup.tasks.front());
                const double gj = inst.gamma(j);
                for (std::size_t t = 1; t < sup.tasks.size(); ++t) {
                    const auto k = static_cast<std::size_t>(sup.tasks[t]);
                    const double gk = inst.gamma(k);
                    add_load(row, j, gk);
                    add_load(row, k, -gj);
                    b[row] = gj * gk * ((inst.signal(k) + c[k - 1]) - (inst.signal(j) + c[j - 1])) +
                             gj * inst.assigned_total(k) - gk * inst.assigned_total(j);
                    ++row;
                }
                for (int kk : sup.tasks) a(row, static_cast<std::size_t>(var[i][static_cast<std::size_t>(kk)])) = 1.0;
                b[row] = 1.0;
                ++row;
            }
        }

        const auto x = linalg::solve_linear(std::move(a), std::move(b));
        for (std::size_t v = 0; v < n; ++v) probs[vars[v].first][static_cast<std::size_t>(vars[v].second)] = x[v];
    }

    for (std::size_t i = 0; i < np; ++i) {
        if (supports[i].idle) {
            double assigned = 0.0;
            for (std::size_t k = 1; k <= m; ++k) assigned += probs[i][k];
            probs[i][0] = 1.0 - assigned;
        }
    }
    return probs;
}

/// Spreads per-player probabilities back onto the original groups. Groups
/// without idle robots keep the degenerate idle row.
inline MixedStrategy expand_to_groups(const ProblemInstance& inst, const std::vector<Player>& players,
                                      const PlayerProbs& probs) {
    auto out = MixedStrategy::all_idle(inst.num_groups(), inst.num_actions());
    for (std::size_t p = 0; p < players.size(); ++p) {
        for (std::size_t i : players[p].members) {
            double assigned = 0.0;
            for (std::size_t k = 1; k <= inst.num_tasks(); ++k) {
                out(i, k) = probs[p][k];
                assigned += probs[p][k];
            }
            out(i, 0) = 1.0 - assigned;
        }
    }
    return out;
}

/// Cheapest-player pass: each task goes to its cheapest idle-holding player(s); tied
/// minimizers share one probability. Returns raw per-player probabilities,
/// idle column possibly negative.
inline PlayerProbs cheapest_player_probs(const ProblemInstance& inst, const std::vector<Player>& players) {
    const std::size_t m = inst.num_tasks();
    PlayerProbs probs(players.size(), std::vector<double>(m + 1, 0.0));
    const auto headroom = task_headroom(inst);
    for (std::size_t k = 1; k <= m; ++k) {
        double cheapest = std::numeric_limits<double>::infinity();
        for (const auto& p : players) cheapest = std::min(cheapest, p.costs[k - 1]);
        double pool = 0.0;
        for (const auto& p : players) {
            if (p.costs[k - 1] == cheapest) pool += p.idle;
        }
        const double load = headroom[k] - inst.gamma(k) * cheapest;
        if (load <= 0.0) continue;  // dominated by idle: p_k = 0
        const double pk = load / pool;
        for (std::size_t i = 0; i < players.size(); ++i) {
            if (players[i].costs[k - 1] == cheapest) probs[i][k] = pk;
        }
    }
    for (auto& row : probs) row[0] = 1.0 - std::accumulate(row.begin() + 1, row.end(), 0.0);
    return probs;
}

}  // namespace detail

/// Heterogeneous groups, idle in the support: per task only the cheapest
/// idle-holding group(s) take part, with
///   pooled_n0 p_k = gamma_k (1 - s_k - c_k^min - |n_k| / gamma_k),
/// clamped to [0,1]. Everyone else gets p_k = 0.
inline IdleSolution solve_hetero_idle(const ProblemInstance& inst) {
    inst.validate();
    const auto players = detail::pool_players(inst);
    if (players.empty()) throw NoIdleRobots("solve_hetero_idle: no group has idle robots");

    auto probs = detail::cheapest_player_probs(inst, players);
    for (auto& row : probs) {
        for (std::size_t k = 1; k < row.size(); ++k) row[k] = std::min(row[k], 1.0);
    }
    IdleSolution out{detail::expand_to_groups(inst, players, probs), true};
    for (std::size_t i = 0; i < inst.num_groups(); ++i) {
        double& idle = out.strategy(i, 0);
        if (idle < -kZeroTol) {
            out.feasible = false;
        } else {
            idle = std::max(0.0, idle);
        }
    }
    return out;
}

/// Heterogeneous groups, idle strictly dominated for every group. Applies the
/// group reduction first (identical cost vectors pooled, strictly costlier
/// groups dropped from each contested task) and then solves the pairwise
/// indifference rows plus one normalization row per group. Entries are
/// returned unclamped; throws SingularSystem when the reduced system is
/// rank deficient, which means the supports were not a valid choice.
inline MixedStrategy solve_hetero_noidle(const ProblemInstance& inst, const SupportSet& supports) {
    inst.validate();
    if (supports.actions.size() != inst.num_groups()) throw ContractViolation("one support per group required");
    const auto players = detail::pool_players(inst);
    if (players.empty()) throw NoIdleRobots("solve_hetero_noidle: no group has idle robots");

    std::vector<detail::PlayerSupport> sup(players.size());
    for (std::size_t p = 0; p < players.size(); ++p) {
        sup[p].idle = false;
        for (std::size_t g : players[p].members) {
            for (int a : supports.actions[g]) {
                if (a < 0 || static_cast<std::size_t>(a) > inst.num_tasks()) {
                    throw ContractViolation("support action out of range");
                }
                if (a > 0) sup[p].tasks.push_back(a);
            }
        }
        std::sort(sup[p].tasks.begin(), sup[p].tasks.end());
        sup[p].tasks.erase(std::unique(sup[p].tasks.begin(), sup[p].tasks.end()), sup[p].tasks.end());
    }

    // Drop strictly cost-dominated players from every contested task.
    for (std::size_t k = 1; k <= inst.num_tasks(); ++k) {
        double cheapest = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < players.size(); ++p) {
            if (std::binary_search(sup[p].tasks.begin(), sup[p].tasks.end(), static_cast<int>(k))) {
                cheapest = std::min(cheapest, players[p].costs[k - 1]);
            }
        }
        for (std::size_t p = 0; p < players.size(); ++p) {
            auto& t = sup[p].tasks;
            if (players[p].costs[k - 1] > cheapest && t.size() > 1) {
                t.erase(std::remove(t.begin(), t.end(), static_cast<int>(k)), t.end());
            }
        }
    }

    const auto probs = detail::solve_support_system(inst, players, sup);
    auto out = detail::expand_to_groups(inst, players, probs);
    for (std::size_t p = 0; p < players.size(); ++p) {
        for (std::size_t g : players[p].members) out(g, 0) = 0.0;
    }
    return out;
}

}  // namespace ggta
