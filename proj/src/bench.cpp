#include "snn/bench.hpp"

#include "snn/connections.hpp"
#include "snn/encode.hpp"
#include "snn/neurons.hpp"
#include "snn/trainers.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace snn::bench {

std::string_view to_string(Benchmark b) { return b == Benchmark::pdl ? "pdl" : "stdp_pdl"; }

Benchmark parse_benchmark(std::string_view name)
{
    if (name == "pdl") return Benchmark::pdl;
    if (name == "stdp-pdl" || name == "stdp_pdl") return Benchmark::stdp_pdl;
    throw std::invalid_argument("unknown benchmark '" + std::string(name) + "'");
}

void validate(const BenchConfig& cfg)
{
    if (cfg.neurons == 0) throw std::invalid_argument("neurons must be at least 1");
    if (cfg.timed_runs == 0) throw std::invalid_argument("runs must be at least 1");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.rate_max >= 0.0)) throw std::invalid_argument("rate-max must be nonnegative");
    if (!(cfg.eta >= 0.0f)) throw std::invalid_argument("eta must be nonnegative");
    if (!(cfg.tau_trace > 0.0f)) throw std::invalid_argument("tau-trace must be positive");
    if (cfg.q_spike && !(*cfg.q_spike >= 0.0f)) throw std::invalid_argument("q-spike must be nonnegative");
}

void apply_json(BenchConfig& cfg, const nlohmann::json& doc)
{
    if (!doc.is_object()) throw std::invalid_argument("configuration document must be a JSON object");
    if (doc.contains("benchmark")) cfg.benchmark = parse_benchmark(doc.at("benchmark").get<std::string>());
    if (doc.contains("neurons")) cfg.neurons = doc.at("neurons").get<std::size_t>();
    if (doc.contains("steps")) cfg.steps = doc.at("steps").get<std::size_t>();
    if (doc.contains("dt")) cfg.dt = doc.at("dt").get<double>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("warmup")) cfg.warmup_runs = doc.at("warmup").get<std::size_t>();
    if (doc.contains("runs")) cfg.timed_runs = doc.at("runs").get<std::size_t>();
    if (doc.contains("rate_max")) cfg.rate_max = doc.at("rate_max").get<double>();
    if (doc.contains("eta")) cfg.eta = doc.at("eta").get<float>();
    if (doc.contains("tau_trace")) cfg.tau_trace = doc.at("tau_trace").get<float>();
    if (doc.contains("q_spike")) cfg.q_spike = doc.at("q_spike").get<float>();
    if (doc.contains("out")) cfg.output = doc.at("out").get<std::string>();
    if (doc.contains("format")) {
        const auto f = doc.at("format").get<std::string>();
        if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "json") cfg.format = OutputFormat::json;
        else throw std::invalid_argument("unknown output format '" + f + "'");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since, Clock::time_point until)
{
    return std::chrono::duration<double, std::milli>(until - since).count();
}

WeightStats stats(const Tensor& w)
{
    WeightStats s{std::numeric_limits<float>::max(), std::numeric_limits<float>::lowest(), 0.0f};
    double sum = 0.0;
    for (float x : w.values()) {
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
        sum += x;
    }
    s.mean = static_cast<float>(sum / static_cast<double>(w.size()));
    return s;
}

std::uint64_t count(const Tensor& t)
{
    const auto fired = std::count_if(t.values().begin(), t.values().end(), [](float x) { return x != 0.0f; });
    return static_cast<std::uint64_t>(fired);
}

// LIF group of the PDL pipeline.
NeuronParams pdl_neuron()
{
    NeuronParams p;
    p.membrane = {20.0f, -60.0f, 1.0f};
    p.theta_base = -50.0f;
    p.reset = ResetRule::constant(-65.0f);
    p.t_refrac = 3.0f;
    return p;
}

struct Setup {
    Tensor rates;
    Tensor weights;
};

Setup draw_setup(const BenchConfig& cfg)
{
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<float> rate(0.0f, static_cast<float>(cfg.rate_max));
    std::uniform_real_distribution<float> unit(0.0f, 1.0f);
    Setup s{Tensor({cfg.neurons}), Tensor({cfg.neurons, cfg.neurons})};
    for (float& r : s.rates.values()) r = rate(rng);
    for (float& w : s.weights.values()) w = unit(rng);
    return s;
}

BenchResult run_pipeline(const BenchConfig& cfg, bool train)
{
    validate(cfg);
    const Setup setup = draw_setup(cfg);
    const std::size_t n = cfg.neurons;
    const std::size_t runs = cfg.warmup_runs + cfg.timed_runs;

    BenchResult result;
    result.initial_weights = stats(setup.weights);
    result.initial_weight = setup.weights;

    for (std::size_t run = 0; run < runs; ++run) {
        LinearDense conn({n}, n, 1, cfg.dt, std::nullopt, SynapseBlueprint::delta(cfg.q_spike));
        conn.set_weight(setup.weights);
        NeuronGroup lif(NeuronModel::lif, {n}, 1, pdl_neuron(), cfg.dt);

        std::optional<StdpTrainer> trainer;
        if (train) {
            conn.add_updater(Reduction::mean);
            conn.weight_updater().set_full(FullBounding{HalfBounding::sharp(1.0f), HalfBounding::sharp(0.0f)});
            trainer.emplace(StdpConfig{cfg.eta, cfg.eta, cfg.tau_trace, cfg.tau_trace, false});
            trainer->register_cell("pdl", Cell(conn, lif));
        }

        const auto t0 = Clock::now();
        const Tensor train_spikes =
            poisson_encode({setup.rates, cfg.steps, cfg.dt, cfg.seed + 1, PoissonVariant::exponential_interval});
        const auto t1 = Clock::now();
        result.records.push_back({cfg.benchmark, n, run, "encode", elapsed_ms(t0, t1), count(train_spikes)});

        std::uint64_t out_spikes = 0;
        double forward_ms = 0.0;
        double train_ms = 0.0;
        Tensor input({1, n});
        for (std::size_t step = 0; step < cfg.steps; ++step) {
            const auto s0 = Clock::now();
            std::copy_n(train_spikes.data() + step * n, n, input.data());
            out_spikes += count(lif.step(conn.forward(input)));
            const auto s1 = Clock::now();
            forward_ms += elapsed_ms(s0, s1);
            if (trainer) {
                trainer->step();
                conn.update();
                train_ms += elapsed_ms(s1, Clock::now());
            }
        }
        result.records.push_back({cfg.benchmark, n, run, "forward", forward_ms, out_spikes});
        if (train) {
            result.records.push_back({cfg.benchmark, n, run, "train", train_ms, out_spikes});
            result.final_weights = stats(conn.weight());
            result.final_weight = conn.weight();
        }
    }
    return result;
}

}  // namespace

BenchResult run_pdl(const BenchConfig& cfg) { return run_pipeline(cfg, false); }

BenchResult run_stdp_pdl(const BenchConfig& cfg) { return run_pipeline(cfg, true); }

BenchResult run(const BenchConfig& cfg)
{
    return cfg.benchmark == Benchmark::pdl ? run_pdl(cfg) : run_stdp_pdl(cfg);
}

std::vector<PhaseSummary> summarize(const BenchResult& result, const BenchConfig& cfg)
{
    std::vector<PhaseSummary> out;
    for (const BenchRecord& r : result.records) {
        if (r.run < cfg.warmup_runs) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const PhaseSummary& s) { return s.phase == r.phase; });
        if (it == out.end()) it = out.insert(out.end(), PhaseSummary{r.phase, 0, 0.0});
        it->runs += 1;
        it->mean_ms += r.ms;
    }
    for (auto& s : out) s.mean_ms /= static_cast<double>(s.runs);
    return out;
}

std::string to_csv(const std::vector<BenchRecord>& records)
{
    std::ostringstream os;
    os << csv_header << '\n' << std::setprecision(17);
    for (const BenchRecord& r : records)
        os << to_string(r.benchmark) << ',' << r.neurons << ',' << r.run << ',' << r.phase << ',' << r.ms << ','
           << r.spikes << '\n';
    return os.str();
}

std::vector<BenchRecord> parse_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != csv_header) throw std::invalid_argument("missing benchmark CSV header");

    std::vector<BenchRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
        if (fields.size() != 6) throw std::invalid_argument("malformed benchmark CSV row: " + line);
        BenchRecord r;
        r.benchmark = parse_benchmark(fields[0]);
        r.neurons = std::stoull(fields[1]);
        r.run = std::stoull(fields[2]);
        r.phase = fields[3];
        r.ms = std::stod(fields[4]);
        r.spikes = std::stoull(fields[5]);
        out.push_back(std::move(r));
    }
    return out;
}

nlohmann::json to_json(const BenchResult& result, const BenchConfig& cfg)
{
    using nlohmann::json;
    json records = json::array();
    for (const BenchRecord& r : result.records) {
        records.push_back({{"benchmark", to_string(r.benchmark)},
                           {"neurons", r.neurons},
                           {"run", r.run},
                           {"phase", r.phase},
                           {"ms", r.ms},
                           {"spikes", r.spikes}});
    }
    json summary = json::array();
    for (const PhaseSummary& s : summarize(result, cfg))
        summary.push_back({{"phase", s.phase}, {"runs", s.runs}, {"mean_ms", s.mean_ms}});

    auto weights = [](const WeightStats& w) { return json{{"min", w.min}, {"max", w.max}, {"mean", w.mean}}; };
    json doc{{"benchmark", to_string(cfg.benchmark)},
             {"neurons", cfg.neurons},
             {"steps", cfg.steps},
             {"dt", cfg.dt},
             {"seed", cfg.seed},
             {"warmup", cfg.warmup_runs},
             {"runs", cfg.timed_runs},
             {"records", records},
             {"summary", summary},
             {"initial_weights", weights(result.initial_weights)}};
    if (result.final_weights) doc["final_weights"] = weights(*result.final_weights);
    return doc;
}

void write_output(const BenchResult& result, const BenchConfig& cfg)
{
    std::ofstream out(cfg.output, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write benchmark output to '" + cfg.output + "'");
    if (cfg.format == OutputFormat::csv) out << to_csv(result.records);
    else out << to_json(result, cfg).dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing benchmark output to '" + cfg.output + "'");
}

}  // namespace snn::bench
