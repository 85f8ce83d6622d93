#pragma once

#include <cstdint>
#include <vector>

#include "ggta/game.hpp"
#include "ggta/rng.hpp"

namespace ggta::testing {

/// One group of `idle` robots with zero costs and no assigned robots.
inline ProblemInstance homogeneous(std::vector<double> gamma, std::vector<double> signals, int idle,
                                   std::vector<int> assigned = {}) {
    ProblemInstance inst;
    const std::size_t m = gamma.size();
    for (std::size_t k = 0; k < m; ++k) inst.tasks.push_back({static_cast<int>(k + 1), gamma[k]});
    inst.signals = std::move(signals);
    inst.groups.push_back({1, std::vector<double>(m, 0.0)});
    inst.counts = AssignmentCounts(1, m + 1, 0);
    inst.counts(0, 0) = idle;
    for (std::size_t k = 0; k < assigned.size(); ++k) inst.counts(0, k + 1) = assigned[k];
    return inst;
}

/// Groups given by cost rows and count rows (idle first).
inline ProblemInstance heterogeneous(std::vector<double> gamma, std::vector<double> signals,
                                     const std::vector<std::vector<double>>& costs,
                                     const std::vector<std::vector<int>>& counts) {
    ProblemInstance inst;
    const std::size_t m = gamma.size();
    for (std::size_t k = 0; k < m; ++k) inst.tasks.push_back({static_cast<int>(k + 1), gamma[k]});
    inst.signals = std::move(signals);
    inst.counts = AssignmentCounts(costs.size(), m + 1, 0);
    for (std::size_t i = 0; i < costs.size(); ++i) {
        inst.groups.push_back({static_cast<int>(i + 1), costs[i]});
        for (std::size_t a = 0; a <= m; ++a) inst.counts(i, a) = counts[i][a];
    }
    return inst;
}

struct RandomInstanceOptions {
    std::size_t max_tasks = 5;
    std::size_t max_groups = 4;
    double max_cost = 1.0;
};

/// M in 1..max_tasks, g in 1..max_groups, gamma in [1,20], s in [0,1],
/// counts in 0..10, costs uniform in [0, max_cost].
inline ProblemInstance random_instance(RandomStream& rng, const RandomInstanceOptions& opt = {}) {
    const std::size_t m = 1 + rng.below(opt.max_tasks);
    const std::size_t g = 1 + rng.below(opt.max_groups);
    ProblemInstance inst;
    for (std::size_t k = 0; k < m; ++k) inst.tasks.push_back({static_cast<int>(k + 1), rng.uniform(1.0, 20.0)});
    for (std::size_t k = 0; k < m; ++k) inst.signals.push_back(rng.uniform());
    inst.counts = AssignmentCounts(g, m + 1, 0);
    for (std::size_t i = 0; i < g; ++i) {
        GroupSpec spec{static_cast<int>(i + 1), {}};
        for (std::size_t k = 0; k < m; ++k) spec.costs.push_back(rng.uniform(0.0, opt.max_cost));
        inst.groups.push_back(std::move(spec));
        for (std::size_t a = 0; a <= m; ++a) inst.counts(i, a) = static_cast<int>(rng.below(11));
    }
    return inst;
}

}  // namespace ggta::testing
