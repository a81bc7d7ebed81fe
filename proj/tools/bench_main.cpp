#include "snn/bench.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

bool given(const CLI::App& sub, const std::string& name)
{
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

int execute(snn::bench::BenchConfig cfg, const std::string& config_path, const CLI::App& sub)
{
    using namespace snn::bench;
    BenchConfig merged = cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot read configuration '" + config_path + "'");
        merged = BenchConfig{};
        merged.benchmark = cfg.benchmark;
        apply_json(merged, nlohmann::json::parse(in));
        merged.benchmark = cfg.benchmark;
        // flags given on the command line win over the file
        if (given(sub, "--neurons")) merged.neurons = cfg.neurons;
        if (given(sub, "--steps")) merged.steps = cfg.steps;
        if (given(sub, "--dt")) merged.dt = cfg.dt;
        if (given(sub, "--seed")) merged.seed = cfg.seed;
        if (given(sub, "--warmup")) merged.warmup_runs = cfg.warmup_runs;
        if (given(sub, "--runs")) merged.timed_runs = cfg.timed_runs;
        if (given(sub, "--rate-max")) merged.rate_max = cfg.rate_max;
        if (given(sub, "--eta")) merged.eta = cfg.eta;
        if (given(sub, "--tau-trace")) merged.tau_trace = cfg.tau_trace;
        if (given(sub, "--q-spike")) merged.q_spike = cfg.q_spike;
        if (given(sub, "--out")) merged.output = cfg.output;
        if (given(sub, "--format")) merged.format = cfg.format;
    }
    if (merged.output.empty()) throw std::invalid_argument("--out is required");

    const BenchResult result = run(merged);
    write_output(result, merged);

    for (const PhaseSummary& s : summarize(result, merged))
        std::cerr << to_string(merged.benchmark) << " N=" << merged.neurons << " " << s.phase << ": " << s.mean_ms
                  << " ms mean over " << s.runs << " runs\n";
    if (result.final_weights)
        std::cerr << "weights min/mean/max: " << result.final_weights->min << " " << result.final_weights->mean << " "
                  << result.final_weights->max << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace snn::bench;
    CLI::App app{"Poisson-dense-LIF benchmark"};
    app.require_subcommand(1);

    BenchConfig cfg;
    std::string config_path;
    std::string format = "csv";
    float q_spike = 0.0f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--neurons", cfg.neurons, "neurons per layer");
        sub->add_option("--steps", cfg.steps, "simulation steps per run");
        sub->add_option("--dt", cfg.dt, "step length in ms");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--warmup", cfg.warmup_runs, "untimed warm-up runs");
        sub->add_option("--runs", cfg.timed_runs, "timed runs");
        sub->add_option("--rate-max", cfg.rate_max, "upper bound of input rates in Hz");
        sub->add_option("--q-spike", q_spike, "charge per spike in pC (default dt)");
        sub->add_option("--out", cfg.output, "output file");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    };

    CLI::App* pdl = app.add_subcommand("pdl", "Poisson encode, dense linear, LIF");
    add_common(pdl);
    CLI::App* stdp = app.add_subcommand("stdp-pdl", "pdl with STDP weight updates");
    add_common(stdp);
    stdp->add_option("--eta", cfg.eta, "STDP learning rate");
    stdp->add_option("--tau-trace", cfg.tau_trace, "STDP trace time constant in ms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        CLI::App* sub = pdl->parsed() ? pdl : stdp;
        cfg.benchmark = pdl->parsed() ? Benchmark::pdl : Benchmark::stdp_pdl;
        cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (given(*sub, "--q-spike")) cfg.q_spike = q_spike;
        return execute(cfg, config_path, *sub);
    } catch (const std::exception& e) {
        std::cerr << "snn-bench: " << e.what() << "\n";
        return 1;
    }
}
