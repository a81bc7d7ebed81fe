#include "snn/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace snn::bench;

namespace {

BenchConfig small(Benchmark b, std::size_t neurons, std::size_t steps)
{
    BenchConfig cfg;
    cfg.benchmark = b;
    cfg.neurons = neurons;
    cfg.steps = steps;
    cfg.warmup_runs = 1;
    cfg.timed_runs = 2;
    cfg.seed = 42;
    return cfg;
}

std::uint64_t spikes_of(const BenchResult& r, const std::string& phase, std::size_t run)
{
    for (const BenchRecord& rec : r.records)
        if (rec.phase == phase && rec.run == run) return rec.spikes;
    throw std::runtime_error("missing record");
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Bench, OneRecordPerRunAndPhase)
{
    const auto r = run(small(Benchmark::stdp_pdl, 20, 50));
    EXPECT_EQ(r.records.size(), 3u * 3u);
    const auto pdl = run(small(Benchmark::pdl, 20, 50));
    EXPECT_EQ(pdl.records.size(), 3u * 2u);
    EXPECT_FALSE(pdl.final_weights.has_value());
}

TEST(Bench, PdlRateBelowMaximalDrive)
{
    BenchConfig cfg = small(Benchmark::pdl, 100, 1000);
    cfg.q_spike = 20.0f;  // one spike moves the membrane by about its weight in mV
    const auto r = run_pdl(cfg);
    const double rate_hz = double(spikes_of(r, "forward", 0)) / 100.0 / 1.0;  // 1000 steps of 1 ms

    // Every input firing every step at weight 1: R I = N q / dt.
    const double drive = 100.0 * 20.0 / 1.0;
    const double isi = 3.0 + 20.0 * std::log((-60.0 + drive + 65.0) / (-60.0 + drive + 50.0));
    EXPECT_GT(rate_hz, 0.0);
    EXPECT_LT(rate_hz, 1000.0 / isi);
}

TEST(Bench, DefaultChargeLeavesSmallNetworkSubthreshold)
{
    // With q = dt a spike is a unit current; the mean drive of 100 inputs stays below threshold.
    const auto r = run_pdl(small(Benchmark::pdl, 100, 1000));
    EXPECT_GT(spikes_of(r, "encode", 0), 0u);
    EXPECT_EQ(spikes_of(r, "forward", 0), 0u);
}

TEST(Bench, EmptyRun)
{
    const auto r = run(small(Benchmark::stdp_pdl, 10, 0));
    for (const BenchRecord& rec : r.records) {
        EXPECT_EQ(rec.spikes, 0u);
        EXPECT_LT(rec.ms, 5.0);
    }
    EXPECT_EQ(*r.final_weight, r.initial_weight);
}

TEST(Bench, RunsReplayTheSameSeed)
{
    const auto r = run(small(Benchmark::stdp_pdl, 30, 200));
    for (const char* phase : {"encode", "forward", "train"})
        for (std::size_t k = 1; k < 3; ++k) EXPECT_EQ(spikes_of(r, phase, k), spikes_of(r, phase, 0));
    const auto again = run(small(Benchmark::stdp_pdl, 30, 200));
    EXPECT_EQ(spikes_of(again, "forward", 0), spikes_of(r, "forward", 0));
}

TEST(Bench, StdpWeightsStayInUnitInterval)
{
    BenchConfig cfg = small(Benchmark::stdp_pdl, 50, 1000);
    cfg.q_spike = 20.0f;
    const auto r = run_stdp_pdl(cfg);
    EXPECT_GT(spikes_of(r, "forward", 0), 0u);
    ASSERT_TRUE(r.final_weight.has_value());
    for (float w : r.final_weight->values()) ASSERT_TRUE(w >= 0.0f && w <= 1.0f);
    EXPECT_GE(r.final_weights->min, 0.0f);
    EXPECT_LE(r.final_weights->max, 1.0f);
}

TEST(Bench, NullLearningKeepsWeights)
{
    BenchConfig cfg = small(Benchmark::stdp_pdl, 30, 300);
    cfg.eta = 0.0f;
    const auto r = run_stdp_pdl(cfg);
    EXPECT_EQ(*r.final_weight, r.initial_weight);
}

TEST(Bench, LearningIsReproducible)
{
    BenchConfig cfg = small(Benchmark::stdp_pdl, 50, 1000);
    cfg.q_spike = 20.0f;
    const auto a = run_stdp_pdl(cfg);
    const auto b = run_stdp_pdl(cfg);
    EXPECT_NE(a.final_weights->mean, a.initial_weights.mean);
    EXPECT_EQ(*a.final_weight, *b.final_weight);
}

TEST(Bench, SummaryCoversTimedRunsOnly)
{
    BenchConfig cfg = small(Benchmark::pdl, 5, 10);
    BenchResult r;
    r.records = {{Benchmark::pdl, 5, 0, "forward", 100.0, 0},
                 {Benchmark::pdl, 5, 1, "forward", 2.0, 0},
                 {Benchmark::pdl, 5, 2, "forward", 4.0, 0}};
    const auto s = summarize(r, cfg);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].runs, 2u);
    EXPECT_DOUBLE_EQ(s[0].mean_ms, 3.0);
}

TEST(Bench, CsvRoundTrip)
{
    const auto r = run(small(Benchmark::stdp_pdl, 10, 40));
    const std::string csv = to_csv(r.records);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header);
    EXPECT_EQ(parse_csv(csv), r.records);
    EXPECT_THROW(parse_csv("nope\n"), std::invalid_argument);
    EXPECT_THROW(parse_csv(std::string(csv_header) + "\npdl,1,2\n"), std::invalid_argument);
}

TEST(Bench, JsonMirrorsRecords)
{
    const BenchConfig cfg = small(Benchmark::pdl, 10, 40);
    const auto r = run(cfg);
    const auto doc = to_json(r, cfg);
    ASSERT_EQ(doc.at("records").size(), r.records.size());
    EXPECT_EQ(doc.at("records")[0].at("phase"), r.records[0].phase);
    EXPECT_EQ(doc.at("records")[0].at("spikes").get<std::uint64_t>(), r.records[0].spikes);
}

TEST(Bench, ConfigValidationAndJson)
{
    BenchConfig cfg;
    cfg.neurons = 0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);
    cfg = BenchConfig{};
    cfg.timed_runs = 0;
    EXPECT_THROW(validate(cfg), std::invalid_argument);

    cfg = BenchConfig{};
    apply_json(cfg, nlohmann::json::parse(R"({"neurons": 12, "steps": 5, "format": "json", "benchmark": "stdp-pdl"})"));
    EXPECT_EQ(cfg.neurons, 12u);
    EXPECT_EQ(cfg.steps, 5u);
    EXPECT_EQ(cfg.format, OutputFormat::json);
    EXPECT_EQ(cfg.benchmark, Benchmark::stdp_pdl);
    EXPECT_THROW(apply_json(cfg, nlohmann::json::parse(R"({"format": "xml"})")), std::invalid_argument);
    EXPECT_THROW(parse_benchmark("mnist"), std::invalid_argument);
}

TEST(Bench, UnwritableOutputThrows)
{
    BenchConfig cfg = small(Benchmark::pdl, 5, 5);
    cfg.output = "/nonexistent-dir/out.csv";
    EXPECT_THROW(write_output(run(cfg), cfg), std::runtime_error);
}

TEST(BenchCli, FlagsOverrideConfigFile)
{
    const auto dir = std::filesystem::temp_directory_path() / "snn-bench-cli-test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"neurons": 7, "steps": 20, "warmup": 0, "runs": 1, "format": "json"})";
    }
    const std::string cmd = std::string(SNN_BENCH_EXE) + " pdl --config " + (dir / "cfg.json").string() +
                            " --neurons 9 --format csv --out " + (dir / "out.csv").string() + " 2>/dev/null";
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    const auto records = parse_csv(slurp(dir / "out.csv"));
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].neurons, 9u);

    const std::string bad = std::string(SNN_BENCH_EXE) + " pdl --neurons 0 --out " + (dir / "x.csv").string() +
                            " 2>/dev/null";
    EXPECT_NE(std::system(bad.c_str()), 0);
    const std::string unwritable = std::string(SNN_BENCH_EXE) + " pdl --out /nonexistent-dir/x.csv 2>/dev/null";
    EXPECT_NE(std::system(unwritable.c_str()), 0);
    std::filesystem::remove_all(dir);
}
