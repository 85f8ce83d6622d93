#pragma once

// Monte Carlo campaigns: independent seeded runs fanned out over threads,
// one metrics CSV per run, and a summary that can be rebuilt from those CSVs
// alone.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "ggta/instance_io.hpp"
#include "ggta/scenario.hpp"
#include "ggta/sim.hpp"

namespace ggta {

enum class RunOutcome { Completed, Incomplete, EnergyFailure };

inline const char* outcome_name(RunOutcome o) {
    switch (o) {
        case RunOutcome::Completed: return "completed";
        case RunOutcome::Incomplete: return "incomplete";
        case RunOutcome::EnergyFailure: return "energy_failure";
    }
    return "?";
}

struct RunSummary {
    std::uint64_t seed = 0;
    RunOutcome outcome = RunOutcome::Completed;
    double final_energy = 0.0;
    std::optional<double> cargo_time;  // s from first cargo drop to all delivered
    long deadlocks = 0;                // robot-steps flagged Deadlock
    long robot_steps = 0;
    double min_distance = std::numeric_limits<double>::infinity();  // over steps without deadlock

    bool operator==(const RunSummary&) const = default;
};

struct CampaignSummary {
    int runs = 0;
    int completed = 0;
    int incomplete = 0;
    int energy_failures = 0;
    std::map<long, int> energy_histogram;  // bin b covers [5b, 5b + 5) J
    std::vector<double> cargo_times;       // completed-delivery runs, in run order
    long deadlocks = 0;
    long robot_steps = 0;
    std::vector<RunSummary> per_run;

    bool operator==(const CampaignSummary&) const = default;
};

inline constexpr double kHistogramBin = 5.0;  // J

namespace detail {

/// The value a time stamp takes after a round trip through the CSV.
inline double as_written(double t) { return std::strtod(fmt::format("{:.10g}", t).c_str(), nullptr); }

inline std::optional<double> first_cargo_event(const ScenarioConfig& c) {
    std::optional<double> t;
    for (const auto& e : c.events) {
        if (e.kind == EventKind::CargoDelivery && (!t || e.time < *t)) t = e.time;
    }
    return t;
}

inline int scheduled_cargo(const ScenarioConfig& c) {
    int total = 0;
    for (const auto& e : c.events) {
        if (e.kind == EventKind::CargoDelivery) total += e.amount;
    }
    return total;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Per-run statistics from metrics rows. Time stamps are taken as written
/// to the CSV so this agrees with `parse_metrics_csv` bit for bit.
inline RunSummary summarize_rows(const ScenarioConfig& c, const std::vector<MetricsRow>& rows, std::uint64_t seed) {
    RunSummary s;
    s.seed = seed;
    const bool colony = c.kind == ScenarioKind::Colony;
    const int cargo = detail::scheduled_cargo(c);
    const auto first = detail::first_cargo_event(c);
    for (const auto& row : rows) {
        s.deadlocks += row.deadlocks;
        long alive = row.n_idle;
        for (int n : row.n_task) alive += n;
        s.robot_steps += alive;
        if (row.deadlocks == 0) s.min_distance = std::min(s.min_distance, row.min_distance);
        if (colony && cargo > 0 && !s.cargo_time && row.delivered == cargo) {
            s.cargo_time = detail::as_written(row.t) - first.value_or(0.0);
        }
    }
    if (colony) {
        s.final_energy = rows.empty() ? c.colony.energy_initial : rows.back().energy;
        if (s.final_energy <= 0.0) {
            s.outcome = RunOutcome::EnergyFailure;
        } else if (cargo > 0 && !s.cargo_time) {
            s.outcome = RunOutcome::Incomplete;
        }
    }
    return s;
}

inline CampaignSummary aggregate(const ScenarioConfig& c, std::vector<RunSummary> runs) {
    CampaignSummary out;
    out.runs = static_cast<int>(runs.size());
    for (const auto& r : runs) {
        switch (r.outcome) {
            case RunOutcome::Completed: ++out.completed; break;
            case RunOutcome::Incomplete: ++out.incomplete; break;
            case RunOutcome::EnergyFailure: ++out.energy_failures; break;
        }
        if (c.kind == ScenarioKind::Colony) {
            ++out.energy_histogram[static_cast<long>(std::floor(r.final_energy / kHistogramBin))];
        }
        if (r.cargo_time) out.cargo_times.push_back(*r.cargo_time);
        out.deadlocks += r.deadlocks;
        out.robot_steps += r.robot_steps;
    }
    out.per_run = std::move(runs);
    return out;
}

// ---- metrics CSV reader ------------------------------------------------------

/// Reads a metrics CSV written by `write_metrics_csv` for the same scenario.
inline std::vector<MetricsRow> parse_metrics_csv(const ScenarioConfig& c, const std::string& text,
                                                 const std::string& source = "<metrics>") {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != metrics_header(c)) {
        throw InstanceError(source + ":1: unexpected metrics header");
    }
    const std::size_t m = c.num_tasks();
    const bool colony = c.kind == ScenarioKind::Colony;
    const std::size_t width = colony ? 8 + m : 4 + 2 * m;
    std::vector<MetricsRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (cells.size() != width) {
            throw InstanceError(fmt::format("{}:{}: expected {} fields, got {}", source, line_no, width, cells.size()));
        }
        std::size_t i = 0;
        auto num = [&]() {
            const std::string& cell = cells[i++];
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                throw InstanceError(fmt::format("{}:{}: bad number '{}'", source, line_no, cell));
            }
            return v;
        };
        auto count = [&]() { return static_cast<int>(num()); };
        MetricsRow row;
        row.t = num();
        if (colony) {
            row.energy = num();
            row.system_energy = num();
            row.cargo = count();
        } else {
            for (std::size_t k = 0; k < m; ++k) row.info.push_back(num());
        }
        row.n_idle = count();
        for (std::size_t k = 0; k < m; ++k) row.n_task.push_back(count());
        row.min_distance = num();
        if (colony) row.delivered = count();
        row.deadlocks = count();
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---- campaign runner ---------------------------------------------------------

inline std::string run_file_name(int index) { return fmt::format("run_{:04d}.csv", index); }

struct CampaignOptions {
    int runs = 1;
    std::uint64_t base_seed = 1;
    unsigned jobs = 0;  // 0: hardware concurrency
    std::optional<std::filesystem::path> out_dir;
};

/// Runs seeds base_seed .. base_seed + runs - 1. With an output directory,
/// each run's metrics land in run_XXXX.csv and the scenario (with the base
/// seed) in scenario.json, which is all `summarize_directory` needs.
inline CampaignSummary run_campaign(const ScenarioConfig& cfg, const CampaignOptions& opt) {
    if (opt.runs < 1) throw std::invalid_argument("campaign needs at least one run");
    ScenarioConfig c = cfg;
    c.seed = opt.base_seed;
    validate(c);
    if (opt.out_dir) {
        std::filesystem::create_directories(*opt.out_dir);
        write_file_atomic(*opt.out_dir / "scenario.json", [&](std::ostream& o) { o << dump_scenario(c); });
    }

    std::vector<RunSummary> results(static_cast<std::size_t>(opt.runs));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int i = next++; i < opt.runs; i = next++) {
            try {
                const std::uint64_t seed = opt.base_seed + static_cast<std::uint64_t>(i);
                auto m = run(c, seed);
                for (auto& row : m.rows) row.t = detail::as_written(row.t);
                if (opt.out_dir) {
                    write_file_atomic(*opt.out_dir / run_file_name(i), [&](std::ostream& o) { write_metrics_csv(o, c, m); });
                }
                results[static_cast<std::size_t>(i)] = summarize_rows(c, m.rows, seed);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = opt.runs;
            }
        }
    };

    unsigned jobs = opt.jobs != 0 ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(opt.runs));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return aggregate(c, std::move(results));
}

/// Rebuilds a campaign summary from scenario.json and the run_XXXX.csv files.
inline CampaignSummary summarize_directory(const std::filesystem::path& dir) {
    const auto cfg_path = dir / "scenario.json";
    const ScenarioConfig c = parse_scenario(read_text_file(cfg_path.string()), cfg_path.string());
    std::vector<RunSummary> runs;
    for (int i = 0;; ++i) {
        const auto path = dir / run_file_name(i);
        if (!std::filesystem::exists(path)) break;
        const auto rows = parse_metrics_csv(c, read_text_file(path.string()), path.string());
        runs.push_back(summarize_rows(c, rows, c.seed + static_cast<std::uint64_t>(i)));
    }
    if (runs.empty()) throw InstanceError(dir.string() + ": no run_0000.csv found");
    return aggregate(c, std::move(runs));
}

// ---- summary output ----------------------------------------------------------

inline void write_summary_csv(std::ostream& out, const CampaignSummary& s) {
    out << "run,seed,outcome,final_energy,cargo_time,deadlocks,robot_steps,min_dist\n";
    for (std::size_t i = 0; i < s.per_run.size(); ++i) {
        const auto& r = s.per_run[i];
        out << fmt::format("{},{},{},{},{},{},{},{}\n", i, r.seed, outcome_name(r.outcome), r.final_energy,
                           r.cargo_time ? fmt::format("{}", *r.cargo_time) : std::string{}, r.deadlocks,
                           r.robot_steps, r.min_distance);
    }
}

inline void write_summary_text(std::ostream& out, const CampaignSummary& s) {
    out << fmt::format("runs              {}\n", s.runs);
    out << fmt::format("completed         {}\n", s.completed);
    out << fmt::format("incomplete        {}\n", s.incomplete);
    out << fmt::format("energy failures   {}\n", s.energy_failures);
    const double share = s.robot_steps > 0 ? static_cast<double>(s.deadlocks) / static_cast<double>(s.robot_steps) : 0.0;
    out << fmt::format("deadlock steps    {} of {} robot-steps ({:.4f}%)\n", s.deadlocks, s.robot_steps, 100.0 * share);
    if (!s.cargo_times.empty()) {
        const auto [lo, hi] = std::minmax_element(s.cargo_times.begin(), s.cargo_times.end());
        out << fmt::format("all-cargo time    median {:.1f} s, min {:.1f} s, max {:.1f} s over {} runs\n",
                           detail::median(s.cargo_times), *lo, *hi, s.cargo_times.size());
    }
    if (!s.energy_histogram.empty()) {
        out << "final energy histogram\n";
        for (const auto& [bin, n] : s.energy_histogram) {
            out << fmt::format("  [{:>4}, {:>4}) J  {:>4}  {}\n", bin * 5, bin * 5 + 5, n, std::string(static_cast<std::size_t>(n), '#'));
        }
    }
}

/// summary.csv and summary.txt, each written atomically.
inline void write_summary_files(const std::filesystem::path& dir, const CampaignSummary& s) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "summary.csv", [&](std::ostream& o) { write_summary_csv(o, s); });
    write_file_atomic(dir / "summary.txt", [&](std::ostream& o) { write_summary_text(o, s); });
}

}  // namespace ggta
