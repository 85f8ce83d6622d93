#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ggta/campaign.hpp"

using namespace ggta;
namespace fs = std::filesystem;

namespace {

ScenarioConfig quick_colony() {
    auto c = colony_default();
    c.t_final = 260.0;
    return c;
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("ggta_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Campaign, SingletonEqualsTheRun) {
    const auto c = quick_colony();
    CampaignOptions opt;
    opt.runs = 1;
    opt.base_seed = 42;
    const auto s = run_campaign(c, opt);
    auto m = run(c, 42);
    ASSERT_EQ(s.runs, 1);
    ASSERT_EQ(s.per_run.size(), 1u);
    const auto& r = s.per_run[0];
    EXPECT_EQ(r.seed, 42u);
    EXPECT_EQ(r.final_energy, m.final_energy);
    EXPECT_EQ(r.deadlocks, m.deadlock_robot_steps);
    EXPECT_EQ(r.robot_steps, m.robot_steps);
    EXPECT_EQ(r.min_distance, m.min_distance_safe);
    EXPECT_EQ(r.cargo_time.has_value(), m.all_cargo_elapsed.has_value());
    if (r.cargo_time) { EXPECT_NEAR(*r.cargo_time, *m.all_cargo_elapsed, 1e-9); }
    EXPECT_EQ(s.completed + s.incomplete + s.energy_failures, 1);
}

TEST(Campaign, SameBaseSeedSameSummaryRegardlessOfThreads) {
    const auto c = quick_colony();
    CampaignOptions a;
    a.runs = 6;
    a.base_seed = 100;
    a.jobs = 1;
    CampaignOptions b = a;
    b.jobs = 3;
    EXPECT_EQ(run_campaign(c, a), run_campaign(c, b));
}

TEST(Campaign, OutcomeCountsSumToRuns) {
    auto c = quick_colony();
    c.colony.energy_drain = 2.0;  // foraging cannot keep up for most seeds
    CampaignOptions opt;
    opt.runs = 8;
    const auto s = run_campaign(c, opt);
    EXPECT_EQ(s.completed + s.incomplete + s.energy_failures, s.runs);
    int histogram_total = 0;
    for (const auto& [bin, n] : s.energy_histogram) histogram_total += n;
    EXPECT_EQ(histogram_total, s.runs);
    EXPECT_GT(s.energy_failures, 0);
}

TEST(Campaign, SummaryRecomputesFromCsvFiles) {
    const auto c = quick_colony();
    const auto dir = fresh_dir("recompute");
    CampaignOptions opt;
    opt.runs = 4;
    opt.base_seed = 7;
    opt.out_dir = dir;
    const auto s = run_campaign(c, opt);
    write_summary_files(dir, s);
    EXPECT_TRUE(fs::exists(dir / "run_0000.csv"));
    EXPECT_TRUE(fs::exists(dir / "run_0003.csv"));
    EXPECT_FALSE(fs::exists(dir / "run_0004.csv"));
    EXPECT_TRUE(fs::exists(dir / "summary.csv"));
    EXPECT_TRUE(fs::exists(dir / "summary.txt"));
    EXPECT_EQ(summarize_directory(dir), s);
    fs::remove_all(dir);
}

TEST(Campaign, MonitoringCampaign) {
    auto c = monitoring_default();
    c.t_final = 60.0;
    CampaignOptions opt;
    opt.runs = 2;
    const auto dir = fresh_dir("monitoring");
    opt.out_dir = dir;
    const auto s = run_campaign(c, opt);
    EXPECT_EQ(s.completed, 2);
    EXPECT_TRUE(s.energy_histogram.empty());
    EXPECT_EQ(summarize_directory(dir), s);
    fs::remove_all(dir);
}

TEST(Campaign, RejectsZeroRuns) {
    CampaignOptions opt;
    opt.runs = 0;
    EXPECT_THROW(run_campaign(quick_colony(), opt), std::invalid_argument);
}

TEST(MetricsCsvReader, RoundTripsRows) {
    auto c = quick_colony();
    c.t_final = 20.0;
    auto m = run(c, 3);
    std::ostringstream out;
    write_metrics_csv(out, c, m);
    const auto rows = parse_metrics_csv(c, out.str());
    ASSERT_EQ(rows.size(), m.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].t, m.rows[i].t, 1e-9);
        EXPECT_EQ(rows[i].energy, m.rows[i].energy);
        EXPECT_EQ(rows[i].system_energy, m.rows[i].system_energy);
        EXPECT_EQ(rows[i].n_task, m.rows[i].n_task);
        EXPECT_EQ(rows[i].min_distance, m.rows[i].min_distance);
    }
}

TEST(MetricsCsvReader, RejectsMalformed) {
    const auto c = quick_colony();
    EXPECT_THROW(parse_metrics_csv(c, "t,x\n"), InstanceError);
    EXPECT_THROW(parse_metrics_csv(c, metrics_header(c) + "\n1,2,3\n"), InstanceError);
    EXPECT_THROW(parse_metrics_csv(c, metrics_header(c) + "\n0.1,a,1,0,12,0,0,1,0,0\n"), InstanceError);
}

TEST(SummaryText, MentionsEveryCount) {
    CampaignSummary s;
    s.runs = 3;
    s.completed = 1;
    s.incomplete = 1;
    s.energy_failures = 1;
    s.energy_histogram = {{0, 1}, {10, 2}};
    s.cargo_times = {200.0};
    std::ostringstream out;
    write_summary_text(out, s);
    const auto text = out.str();
    EXPECT_NE(text.find("energy failures   1"), std::string::npos);
    EXPECT_NE(text.find("[  50,   55) J"), std::string::npos);
    EXPECT_NE(text.find("median 200.0 s"), std::string::npos);
}

TEST(AtomicWrite, FailedWriterLeavesNothing) {
    const auto dir = fresh_dir("atomic");
    fs::create_directories(dir);
    const auto target = dir / "out.csv";
    EXPECT_THROW(write_file_atomic(target,
                                   [](std::ostream& o) {
                                       o << "partial";
                                       throw std::runtime_error("boom");
                                   }),
                 std::runtime_error);
    EXPECT_FALSE(fs::exists(target));
    EXPECT_TRUE(fs::is_empty(dir));
    write_file_atomic(target, [](std::ostream& o) { o << "done"; });
    EXPECT_TRUE(fs::exists(target));
    fs::remove_all(dir);
}
