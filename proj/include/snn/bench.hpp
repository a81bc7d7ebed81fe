#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "snn/tensor.hpp"

namespace snn::bench {

enum class Benchmark { pdl, stdp_pdl };
enum class OutputFormat { csv, json };

std::string_view to_string(Benchmark b);
Benchmark parse_benchmark(std::string_view name);  // "pdl", "stdp-pdl" or "stdp_pdl"

struct BenchConfig {
    Benchmark benchmark = Benchmark::pdl;
    std::size_t neurons = 100;
    std::size_t steps = 1000;
    double dt = 1.0;  // ms
    std::uint64_t seed = 0;
    std::size_t warmup_runs = 5;
    std::size_t timed_runs = 10;
    double rate_max = 250.0;  // Hz
    float eta = 1e-3f;
    float tau_trace = 20.0f;         // ms
    std::optional<float> q_spike{};  // pC; defaults to dt
    std::string output{};
    OutputFormat format = OutputFormat::csv;
};

// Throws std::invalid_argument describing the first bad field.
void validate(const BenchConfig& cfg);

// Overlays the fields present in `doc` onto `cfg`. Keys mirror the CLI flags:
// benchmark, neurons, steps, dt, seed, warmup, runs, rate_max, eta,
// tau_trace, q_spike, out, format.
void apply_json(BenchConfig& cfg, const nlohmann::json& doc);

struct BenchRecord {
    Benchmark benchmark = Benchmark::pdl;
    std::size_t neurons = 0;
    std::size_t run = 0;
    std::string phase;  // encode, forward or train
    double ms = 0.0;
    std::uint64_t spikes = 0;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct WeightStats {
    float min = 0.0f;
    float max = 0.0f;
    float mean = 0.0f;
};

struct PhaseSummary {
    std::string phase;
    std::size_t runs = 0;
    double mean_ms = 0.0;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    WeightStats initial_weights{};
    std::optional<WeightStats> final_weights{};  // STDP runs only
    Tensor initial_weight;
    std::optional<Tensor> final_weight{};  // last run's trained weights
};

// Poisson encode -> dense linear -> LIF for steps * dt ms, repeated for
// warmup_runs + timed_runs runs. Every run replays the same seed.
BenchResult run_pdl(const BenchConfig& cfg);
// As run_pdl, with pair STDP applied after every step and weights kept in [0, 1].
BenchResult run_stdp_pdl(const BenchConfig& cfg);
BenchResult run(const BenchConfig& cfg);

// Mean time per phase over the timed runs (warm-up runs excluded).
std::vector<PhaseSummary> summarize(const BenchResult& result, const BenchConfig& cfg);

inline constexpr std::string_view csv_header = "benchmark,neurons,run,phase,ms,spikes";

std::string to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> parse_csv(std::string_view text);
nlohmann::json to_json(const BenchResult& result, const BenchConfig& cfg);

// Writes csv or json to cfg.output; throws std::runtime_error if unwritable.
void write_output(const BenchResult& result, const BenchConfig& cfg);

}  // namespace snn::bench
