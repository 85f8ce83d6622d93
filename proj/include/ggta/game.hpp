#pragma once

// Domain types for one round of the task-allocation game: tasks, robot groups,
// current assignment counts, task signals and the mixed strategy the
// allocator produces. Action 0 is "idle", actions 1..M are tasks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggta {

inline constexpr double kZeroTol = 1e-12;        // support membership
inline constexpr double kEquilibriumTol = 1e-8;  // oracle residuals
inline constexpr double kSumTol = 1e-9;          // row normalization

class ContractViolation : public std::invalid_argument {
public:
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

class NoIdleRobots : public std::runtime_error {
public:
    explicit NoIdleRobots(const std::string& what) : std::runtime_error(what) {}
};

/// Row-major table indexed by (group, action).
template <class T>
class Table {
public:
    Table() = default;
    Table(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Table&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

struct TaskSpec {
    int id = 0;          // 1..M
    double gamma = 1.0;  // robot-count scale of the task
};

struct GroupSpec {
    int id = 0;                 // 1..g
    std::vector<double> costs;  // one entry per task, >= 0
};

/// counts(i, 0) is the idle pool n_0^i of group i; counts(i, k) is n_k^i.
using AssignmentCounts = Table<int>;

struct ProblemInstance {
    std::vector<TaskSpec> tasks;
    std::vector<GroupSpec> groups;
    AssignmentCounts counts;
    std::vector<double> signals;

    [[nodiscard]] std::size_t num_tasks() const noexcept { return tasks.size(); }
    [[nodiscard]] std::size_t num_groups() const noexcept { return groups.size(); }
    [[nodiscard]] std::size_t num_actions() const noexcept { return tasks.size() + 1; }

    [[nodiscard]] int idle_count(std::size_t group) const { return counts(group, 0); }
    [[nodiscard]] double gamma(std::size_t task) const { return tasks[task - 1].gamma; }
    [[nodiscard]] double signal(std::size_t task) const { return signals[task - 1]; }
    [[nodiscard]] double cost(std::size_t group, std::size_t task) const { return groups[group].costs[task - 1]; }

    /// |n_k|: robots from every group already working on task k.
    [[nodiscard]] int assigned_total(std::size_t task) const {
        int total = 0;
        for (std::size_t i = 0; i < num_groups(); ++i) total += counts(i, task);
        return total;
    }

    [[nodiscard]] int total_idle() const {
        int total = 0;
        for (std::size_t i = 0; i < num_groups(); ++i) total += idle_count(i);
        return total;
    }

    /// Throws ContractViolation naming the first broken invariant.
    void validate() const {
        const std::size_t m = num_tasks();
        if (m == 0) throw ContractViolation("instance has no tasks");
        if (signals.size() != m) throw ContractViolation("signal vector length differs from task count");
        for (std::size_t k = 0; k < m; ++k) {
            if (tasks[k].id != static_cast<int>(k + 1)) throw ContractViolation("task ids must be contiguous 1..M");
            if (!(tasks[k].gamma > 0.0)) throw ContractViolation("task " + std::to_string(k + 1) + " has gamma <= 0");
            if (!(signals[k] >= 0.0 && signals[k] <= 1.0)) {
                throw ContractViolation("signal of task " + std::to_string(k + 1) + " outside [0,1]");
            }
        }
        if (counts.rows() != num_groups() || counts.cols() != m + 1) {
            throw ContractViolation("counts must be groups x (tasks + 1)");
        }
        for (std::size_t i = 0; i < num_groups(); ++i) {
            const auto& g = groups[i];
            if (g.id != static_cast<int>(i + 1)) throw ContractViolation("group ids must be contiguous 1..g");
            if (g.costs.size() != m) throw ContractViolation("group " + std::to_string(i + 1) + " cost vector length differs from task count");
            for (double c : g.costs) {
                if (!(c >= 0.0)) throw ContractViolation("group " + std::to_string(i + 1) + " has a negative cost");
            }
            for (std::size_t a = 0; a <= m; ++a) {
                if (counts(i, a) < 0) throw ContractViolation("negative assignment count");
            }
        }
    }
};

using SignalVector = std::vector<double>;

/// Per-group probability distribution over {idle, task 1..M}.
struct MixedStrategy {
    Table<double> probs;

    MixedStrategy() = default;
    MixedStrategy(std::size_t groups, std::size_t actions) : probs(groups, actions, 0.0) {}

    static MixedStrategy all_idle(std::size_t groups, std::size_t actions) {
        MixedStrategy s(groups, actions);
        for (std::size_t i = 0; i < groups; ++i) s.probs(i, 0) = 1.0;
        return s;
    }

    [[nodiscard]] std::size_t num_groups() const noexcept { return probs.rows(); }
    [[nodiscard]] std::size_t num_actions() const noexcept { return probs.cols(); }
    [[nodiscard]] double operator()(std::size_t group, std::size_t action) const { return probs(group, action); }
    double& operator()(std::size_t group, std::size_t action) { return probs(group, action); }
    [[nodiscard]] std::span<const double> row(std::size_t group) const { return probs.row(group); }

    /// Entries in [0,1] and every row summing to 1 within kSumTol.
    [[nodiscard]] bool is_distribution() const {
        for (std::size_t i = 0; i < num_groups(); ++i) {
            double sum = 0.0;
            for (double p : row(i)) {
                if (!(p >= 0.0 && p <= 1.0)) return false;
                sum += p;
            }
            if (std::abs(sum - 1.0) > kSumTol) return false;
        }
        return true;
    }

    bool operator==(const MixedStrategy&) const = default;
};

/// Actions each group plays with probability above kZeroTol.
struct SupportSet {
    std::vector<std::vector<int>> actions;

    static SupportSet of(const MixedStrategy& s) {
        SupportSet out;
        out.actions.resize(s.num_groups());
        for (std::size_t i = 0; i < s.num_groups(); ++i) {
            for (std::size_t a = 0; a < s.num_actions(); ++a) {
                if (s(i, a) > kZeroTol) out.actions[i].push_back(static_cast<int>(a));
            }
        }
        return out;
    }

    [[nodiscard]] bool contains(std::size_t group, int action) const {
        const auto& row = actions[group];
        return std::find(row.begin(), row.end(), action) != row.end();
    }
};

struct EquilibriumReport {
    double max_support_residual = 0.0;
    double max_dominance_violation = 0.0;
    bool valid = true;
};

namespace detail {
inline void check_dimensions(const ProblemInstance& inst, const MixedStrategy& s) {
    if (s.num_groups() != inst.num_groups() || s.num_actions() != inst.num_actions()) {
        throw ContractViolation("strategy dimensions do not match the instance");
    }
}
}  // namespace detail

/// E[|N_k|] = |n_k| + sum_i n_0^i p_k^i.
inline double expected_task_count(const ProblemInstance& inst, const MixedStrategy& strategy, std::size_t task) {
    detail::check_dimensions(inst, strategy);
    if (task < 1 || task > inst.num_tasks()) throw ContractViolation("task index out of range");
    double total = inst.assigned_total(task);
    for (std::size_t i = 0; i < inst.num_groups(); ++i) total += inst.idle_count(i) * strategy(i, task);
    return total;
}

/// Expected utility of `action` for a robot of `group`. Idle is worth 0;
/// a task is worth (gamma - E[N])/gamma - s - c. The utility is linear in
/// the assignment count, so the expectation is exact.
inline double expected_utility(const ProblemInstance& inst, const MixedStrategy& strategy, std::size_t group,
                               std::size_t action) {
    detail::check_dimensions(inst, strategy);
    if (group >= inst.num_groups()) throw ContractViolation("group index out of range");
    if (action > inst.num_tasks()) throw ContractViolation("action index out of range");
    if (action == 0) return 0.0;
    const double gamma = inst.gamma(action);
    return (gamma - expected_task_count(inst, strategy, action)) / gamma - inst.signal(action) -
           inst.cost(group, action);
}

/// Inverse-CDF draw over the action order (idle, 1, ..., M): the first action
/// whose cumulative probability exceeds u.
inline int sample_assignment(const MixedStrategy& strategy, std::size_t group, double u) {
    if (group >= strategy.num_groups()) throw ContractViolation("group index out of range");
    if (!(u >= 0.0 && u < 1.0)) throw ContractViolation("uniform draw must lie in [0,1)");
    const auto row = strategy.row(group);
    double cumulative = 0.0;
    int last_positive = 0;
    for (std::size_t a = 0; a < row.size(); ++a) {
        if (row[a] <= 0.0) continue;
        cumulative += row[a];
        last_positive = static_cast<int>(a);
        if (u < cumulative) return last_positive;
    }
    // u landed in the rounding gap above the accumulated mass.
    return last_positive;
}

}  // namespace ggta
