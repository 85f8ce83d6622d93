// ggta: one-shot allocation, single simulation runs and Monte Carlo campaigns.
//
// Exit codes: 0 success, 1 malformed input or usage, 2 equilibrium check
// failed, 3 colony energy depleted.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ggta/allocate.hpp"
#include "ggta/campaign.hpp"
#include "ggta/instance_io.hpp"
#include "ggta/scenario.hpp"
#include "ggta/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMalformed = 1;
constexpr int kExitOracle = 2;
constexpr int kExitDepleted = 3;

struct ScenarioFlags {
    std::string scenario = "colony";
    std::optional<double> t_final;
    std::optional<double> dt;
    std::vector<std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scenario", scenario, "built-in name (colony, monitoring) or scenario file")
            ->capture_default_str();
        cmd->add_option("--t-final", t_final, "run length in seconds");
        cmd->add_option("--dt", dt, "time step in seconds");
        cmd->add_option("--set", overrides, "override a scenario field, e.g. colony.energy_drain=10")
            ->take_all();
    }

    [[nodiscard]] ggta::ScenarioConfig load() const {
        auto c = ggta::load_scenario(scenario);
        for (const auto& o : overrides) c = ggta::apply_override(c, o);
        if (t_final) c.t_final = *t_final;
        if (dt) c.dt = *dt;
        ggta::validate(c);
        return c;
    }
};

int cmd_allocate(const std::string& instance_path, const std::optional<std::string>& out) {
    const auto inst = ggta::load_instance(instance_path);
    const auto result = ggta::allocate(inst);
    if (out) {
        ggta::write_file_atomic(*out, [&](std::ostream& o) { ggta::write_strategy_csv(o, result.strategy); });
        std::cout << ggta::format_report(result.report);
    } else {
        ggta::write_strategy_csv(std::cout, result.strategy);
        std::cerr << ggta::format_report(result.report);
    }
    return result.report.valid ? kExitOk : kExitOracle;
}

int cmd_sim(const ScenarioFlags& flags, std::optional<std::uint64_t> seed, const std::optional<std::string>& out) {
    const auto c = flags.load();
    const auto m = ggta::run(c, seed.value_or(c.seed));
    if (out) {
        ggta::write_file_atomic(*out, [&](std::ostream& o) { ggta::write_metrics_csv(o, c, m); });
    } else {
        ggta::write_metrics_csv(std::cout, c, m);
    }
    if (m.status == ggta::RunStatus::EnergyDepleted) {
        std::cerr << fmt::format("colony energy depleted at t = {:.10g} s\n", m.rows.empty() ? 0.0 : m.rows.back().t);
        return kExitDepleted;
    }
    return kExitOk;
}

int cmd_montecarlo(const ScenarioFlags& flags, int runs, std::optional<std::uint64_t> seed, const std::string& out,
                   unsigned jobs) {
    const auto c = flags.load();
    ggta::CampaignOptions opt;
    opt.runs = runs;
    opt.base_seed = seed.value_or(c.seed);
    opt.jobs = jobs;
    opt.out_dir = out;
    const auto summary = ggta::run_campaign(c, opt);
    ggta::write_summary_files(out, summary);
    ggta::write_summary_text(std::cout, summary);
    return kExitOk;
}

int cmd_summarize(const std::string& dir, const std::optional<std::string>& out) {
    const auto summary = ggta::summarize_directory(dir);
    if (out) ggta::write_summary_files(*out, summary);
    ggta::write_summary_text(std::cout, summary);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Game-theoretic task allocation for robot swarms"};
    app.require_subcommand(1);

    std::string instance_path;
    std::optional<std::string> alloc_out;
    auto* allocate = app.add_subcommand("allocate", "solve one allocation instance (JSON) and print the strategy CSV");
    allocate->add_option("instance", instance_path, "instance file")->required();
    allocate->add_option("-o,--out", alloc_out, "write the strategy CSV here instead of stdout");

    ScenarioFlags sim_flags;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::string> sim_out;
    auto* sim = app.add_subcommand("sim", "run one simulation and write its metrics CSV");
    sim_flags.attach(sim);
    sim->add_option("--seed", sim_seed, "random seed (default: the scenario's)");
    sim->add_option("--out", sim_out, "metrics CSV path (default: stdout)");

    ScenarioFlags mc_flags;
    std::optional<std::uint64_t> mc_seed;
    int mc_runs = 100;
    std::string mc_out;
    unsigned mc_jobs = 0;
    auto* mc = app.add_subcommand("montecarlo", "run a seeded campaign and write per-run CSVs plus a summary");
    mc_flags.attach(mc);
    mc->add_option("--runs", mc_runs, "number of runs")->capture_default_str()->check(CLI::PositiveNumber);
    mc->add_option("--seed", mc_seed, "base seed; run i uses base + i");
    mc->add_option("--out", mc_out, "output directory")->required();
    mc->add_option("--jobs", mc_jobs, "worker threads (0: all cores)")->capture_default_str();

    std::string sum_dir;
    std::optional<std::string> sum_out;
    auto* summarize = app.add_subcommand("summarize", "rebuild a campaign summary from its per-run CSVs");
    summarize->add_option("dir", sum_dir, "campaign directory")->required();
    summarize->add_option("--out", sum_out, "also write summary.csv and summary.txt here");

    std::string show_name;
    auto* show = app.add_subcommand("scenario", "print a scenario in file form");
    show->add_option("name", show_name, "built-in name or scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitMalformed;
    }

    try {
        if (*allocate) return cmd_allocate(instance_path, alloc_out);
        if (*sim) return cmd_sim(sim_flags, sim_seed, sim_out);
        if (*mc) return cmd_montecarlo(mc_flags, mc_runs, mc_seed, mc_out, mc_jobs);
        if (*summarize) return cmd_summarize(sum_dir, sum_out);
        if (*show) {
            std::cout << ggta::dump_scenario(ggta::load_scenario(show_name));
            return kExitOk;
        }
    } catch (const ggta::InstanceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const ggta::ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const ggta::ContractViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    }
    return kExitMalformed;
}
