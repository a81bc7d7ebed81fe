#include "snn/trainers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snn {

namespace {

std::string trace_signature(float tau) { return "trace:tau=" + std::to_string(tau); }

constexpr const char* event_signature = "event:nan";

MonitorPool::Factory trace_factory(std::function<Tensor()> source, const Shape& shape, double dt, float tau)
{
    return [source = std::move(source), shape, dt, tau] {
        return std::make_unique<Monitor>(source, std::make_unique<CumulativeTraceReducer>(shape, dt, tau));
    };
}

MonitorPool::Factory event_factory(std::function<Tensor()> source, const Shape& shape, double dt)
{
    return [source = std::move(source), shape, dt] {
        return std::make_unique<Monitor>(source, std::make_unique<EventReducer>(shape, dt));
    };
}

Tensor scaled(Tensor t, float factor)
{
    for (float& x : t.values()) x *= factor;
    return t;
}

}  // namespace

// ---------------------------------------------------------------- CellTrainer

void CellTrainer::register_cell(const std::string& name, Cell cell)
{
    if (!cell.connection || !cell.neuron) throw std::invalid_argument("cell needs a connection and a neuron");
    if (cells_.contains(name)) throw std::invalid_argument("cell '" + name + "' is already registered");
    for (const auto& [other, reg] : cells_) {
        if (reg.cell.connection == cell.connection)
            throw std::invalid_argument("connection is already registered as cell '" + other + "'");
    }
    if (cell.connection->batched_output_shape() != cell.neuron->state_shape())
        throw std::invalid_argument("connection output does not match neuron input");
    if (!cell.connection->has_updater()) throw std::invalid_argument("cell connection has no updater");
    validate(cell);

    const Shape& pshape = target(cell).param_shape();
    cells_.emplace(name, Registered{cell, {}, {Tensor(pshape), Tensor(pshape)}});
    try {
        attach(name, cell);
    } catch (...) {
        pool_.release(name);
        cells_.erase(name);
        throw;
    }
}

void CellTrainer::unregister_cell(const std::string& name)
{
    if (cells_.erase(name) == 0) throw std::invalid_argument("cell '" + name + "' is not registered");
    pool_.release(name);
}

void CellTrainer::step()
{
    pool_.fold_all();
    for (auto& [name, reg] : cells_) {
        reg.last = compute(name, reg.cell);
        target(reg.cell).accumulate(reg.last.pos, reg.last.neg);
    }
}

const StagedUpdate& CellTrainer::last_update(const std::string& name) const
{
    const auto it = cells_.find(name);
    if (it == cells_.end()) throw std::invalid_argument("cell '" + name + "' is not registered");
    return it->second.last;
}

// ---------------------------------------------------------------- StdpTrainer

StdpTrainer::StdpTrainer(StdpConfig cfg) : cfg_(cfg)
{
    if (!(cfg_.tau_pos > 0.0f) || !(cfg_.tau_neg > 0.0f))
        throw std::invalid_argument("STDP trace time constants must be positive");
    if (!(cfg_.eta_pos >= 0.0f) || !(cfg_.eta_neg >= 0.0f))
        throw std::invalid_argument("STDP learning rates are nonnegative magnitudes");
}

void StdpTrainer::validate(const Cell& cell) const
{
    if (cfg_.delay_aware && !cell.connection->delayed())
        throw std::invalid_argument("delay-aware STDP needs a connection with delays");
}

void StdpTrainer::attach(const std::string& name, const Cell& cell)
{
    Connection* conn = cell.connection;
    NeuronGroup* neuron = cell.neuron;
    auto& mons = entry(name).monitors;

    mons["post_trace"] = &pool_.acquire({neuron, "spike", trace_signature(cfg_.tau_neg)}, name,
                                        trace_factory([neuron] { return neuron->spikes(); }, neuron->state_shape(),
                                                      neuron->dt(), cfg_.tau_neg));
    if (cfg_.delay_aware) {
        mons["pre_trace"] = &pool_.acquire({conn, "synspike", trace_signature(cfg_.tau_pos)}, name,
                                           trace_factory([conn] { return conn->synspike(); },
                                                         conn->synspike().shape(), conn->dt(), cfg_.tau_pos));
    } else {
        const DeltaSynapse* syn = &conn->synapse();
        mons["pre_trace"] = &pool_.acquire({syn, "spike", trace_signature(cfg_.tau_pos)}, name,
                                           trace_factory([syn] { return syn->spike(); }, syn->slice_shape(),
                                                         conn->dt(), cfg_.tau_pos));
    }
}

StagedUpdate StdpTrainer::compute(const std::string& name, const Cell& cell)
{
    const Connection& conn = *cell.connection;
    const auto& mons = entry(name).monitors;
    const Tensor& x_post = mons.at("post_trace")->value();
    const Tensor& x_pre = mons.at("pre_trace")->value();
    const Tensor pre_spikes = cfg_.delay_aware ? conn.synspike() : conn.synapse().spike();
    const Tensor& post_spikes = cell.neuron->spikes();

    Tensor pos = mean_over_batch(
        receptive_product(conn.postsyn_receptive(post_spikes), conn.presyn_receptive(x_pre)));
    Tensor neg = mean_over_batch(
        receptive_product(conn.postsyn_receptive(x_post), conn.presyn_receptive(pre_spikes)));
    return {scaled(std::move(pos), cfg_.eta_pos), scaled(std::move(neg), cfg_.eta_neg)};
}

// ----------------------------------------------------------- DelayStdpTrainer

float delay_adjusted_update(float t_delta, const DelayStdpConfig& cfg)
{
    if (t_delta >= 0.0f) return cfg.b_neg * std::exp(-std::abs(t_delta) / cfg.tau_neg);
    return cfg.b_pos * std::exp(-std::abs(t_delta) / cfg.tau_pos);
}

DelayStdpTrainer::DelayStdpTrainer(DelayStdpConfig cfg) : cfg_(cfg)
{
    if (!(cfg_.tau_pos > 0.0f) || !(cfg_.tau_neg > 0.0f))
        throw std::invalid_argument("delay STDP time constants must be positive");
}

void DelayStdpTrainer::validate(const Cell& cell) const
{
    if (!cell.connection->delayed()) throw std::invalid_argument("delay learning needs a connection with delays");
}

void DelayStdpTrainer::attach(const std::string& name, const Cell& cell)
{
    NeuronGroup* neuron = cell.neuron;
    const DeltaSynapse* syn = &cell.connection->synapse();
    auto& mons = entry(name).monitors;
    mons["post_event"] =
        &pool_.acquire({neuron, "spike", event_signature}, name,
                       event_factory([neuron] { return neuron->spikes(); }, neuron->state_shape(), neuron->dt()));
    mons["pre_event"] = &pool_.acquire({syn, "spike", event_signature}, name,
                                       event_factory([syn] { return syn->spike(); }, syn->slice_shape(), syn->dt()));
}

Tensor DelayStdpTrainer::last_delta(const std::string& name) const
{
    const StagedUpdate& u = last_update(name);
    Tensor out = u.pos;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= u.neg[k];
    return out;
}

StagedUpdate DelayStdpTrainer::compute(const std::string& name, const Cell& cell)
{
    const Connection& conn = *cell.connection;
    const auto& mons = entry(name).monitors;
    const float nan = std::numeric_limits<float>::quiet_NaN();

    const Tensor post = conn.postsyn_receptive(mons.at("post_event")->value());
    const Tensor pre = conn.presyn_receptive(mons.at("pre_event")->value(), nan);
    const Tensor delay = parameter_view(conn.delay());

    const Shape full = broadcast_shape(broadcast_shape(post.shape(), pre.shape()), delay.shape());
    const Tensor e_post = post.expand(full);
    const Tensor e_pre = pre.expand(full);
    const Tensor d = delay.expand(full);

    const std::size_t receptive = full.back();
    Shape reduced(full.begin(), full.end() - 1);
    Tensor summed(reduced, 0.0f);
    for (std::size_t k = 0; k < e_post.size(); ++k) {
        const float since_post = e_post[k];
        const float since_pre = e_pre[k];
        // NaN (never spiked) and non-spike steps contribute nothing.
        if (std::isnan(since_post) || std::isnan(since_pre)) continue;
        if (since_post != 0.0f && since_pre != 0.0f) continue;
        const float t_delta = since_pre - since_post - d[k];
        summed[k / receptive] += delay_adjusted_update(t_delta, cfg_);
    }

    const Tensor delta = mean_over_batch(summed);
    StagedUpdate out{Tensor(delta.shape()), Tensor(delta.shape())};
    for (std::size_t k = 0; k < delta.size(); ++k) {
        out.pos[k] = std::max(delta[k], 0.0f);
        out.neg[k] = std::max(-delta[k], 0.0f);
    }
    return out;
}

}  // namespace snn
