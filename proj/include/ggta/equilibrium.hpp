#pragma once

// Mixed-Nash certificate for a candidate strategy. Recomputes every expected
// utility from the instance directly; nothing here touches the solvers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ggta/game.hpp"

namespace ggta {

/// Checks that inside each group's support all actions share one expected
/// utility and that no action outside the support beats it. Groups without
/// idle robots are not players and must sit on the idle action.
inline EquilibriumReport verify_equilibrium(const ProblemInstance& inst, const MixedStrategy& strategy) {
    detail::check_dimensions(inst, strategy);
    const std::size_t m = inst.num_tasks();
    const std::size_t g = inst.num_groups();
    constexpr double inf = std::numeric_limits<double>::infinity();

    EquilibriumReport report;
    if (!strategy.is_distribution()) {
        report.max_support_residual = inf;
        report.valid = false;
        return report;
    }

    // Expected load per task after this round.
    std::vector<double> load(m + 1, 0.0);
    for (std::size_t k = 1; k <= m; ++k) {
        double total = 0.0;
        for (std::size_t i = 0; i < g; ++i) total += inst.counts(i, k) + inst.counts(i, 0) * strategy(i, k);
        load[k] = total;
    }

    std::vector<double> utility(m + 1, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
        if (inst.counts(i, 0) == 0) {
            if (std::abs(strategy(i, 0) - 1.0) > kSumTol) report.max_support_residual = inf;
            continue;
        }
        utility[0] = 0.0;
        for (std::size_t k = 1; k <= m; ++k) {
            const double gamma = inst.tasks[k - 1].gamma;
            utility[k] = 1.0 - load[k] / gamma - inst.signals[k - 1] - inst.groups[i].costs[k - 1];
        }

        double lo = inf;
        double hi = -inf;
        for (std::size_t a = 0; a <= m; ++a) {
            if (strategy(i, a) > kZeroTol) {
                lo = std::min(lo, utility[a]);
                hi = std::max(hi, utility[a]);
            }
        }
        report.max_support_residual = std::max(report.max_support_residual, hi - lo);
        for (std::size_t a = 0; a <= m; ++a) {
            if (strategy(i, a) <= kZeroTol) {
                report.max_dominance_violation = std::max(report.max_dominance_violation, utility[a] - hi);
            }
        }
    }
    report.valid = report.max_support_residual <= kEquilibriumTol && report.max_dominance_violation <= kEquilibriumTol;
    return report;
}

}  // namespace ggta
