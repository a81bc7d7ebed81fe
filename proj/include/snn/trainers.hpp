#pragma once

#include "snn/connections.hpp"
#include "snn/monitors.hpp"
#include "snn/neurons.hpp"

#include <map>
#include <string>

namespace snn {

// A trainable connection paired with the neuron group it drives.
struct Cell {
    Connection* connection = nullptr;
    NeuronGroup* neuron = nullptr;

    Cell() = default;
    Cell(Connection& c, NeuronGroup& n) : connection(&c), neuron(&n) {}
};

struct StagedUpdate {
    Tensor pos;
    Tensor neg;
};

// Trains registered cells independently. Monitors are requested through a
// pool, so cells that share a neuron share its postsynaptic monitors.
//
// Call step() once per simulation step, after the cells' components have
// been stepped: it folds every monitor once and stages one update per cell.
// Staged updates are applied by Connection::update().
class CellTrainer {
public:
    virtual ~CellTrainer() = default;

    void register_cell(const std::string& name, Cell cell);
    void unregister_cell(const std::string& name);
    bool registered(const std::string& name) const { return cells_.contains(name); }
    std::size_t cell_count() const noexcept { return cells_.size(); }

    void step();
    const StagedUpdate& last_update(const std::string& name) const;

    const MonitorPool& pool() const noexcept { return pool_; }

protected:
    virtual void validate(const Cell& cell) const = 0;
    virtual void attach(const std::string& name, const Cell& cell) = 0;
    virtual StagedUpdate compute(const std::string& name, const Cell& cell) = 0;
    virtual Accumulator& target(Cell& cell) = 0;

    struct Registered {
        Cell cell;
        std::map<std::string, Monitor*> monitors;
        StagedUpdate last;
    };
    Registered& entry(const std::string& name) { return cells_.at(name); }

    MonitorPool pool_;

private:
    std::map<std::string, Registered> cells_;
};

struct StdpConfig {
    float eta_pos = 1e-3f;  // potentiation rate magnitude
    float eta_neg = 1e-3f;  // depression rate magnitude
    float tau_pos = 20.0f;  // ms, presynaptic trace
    float tau_neg = 20.0f;  // ms, postsynaptic trace
    bool delay_aware = false;
};

// Pair-based STDP on weights with all-to-all trace interaction:
//   pos = eta_pos * sum_R post_spike * pre_trace
//   neg = eta_neg * sum_R post_trace * pre_spike
// averaged over the batch. Delay-aware training reads presynaptic spikes and
// traces through the learned delays.
class StdpTrainer final : public CellTrainer {
public:
    explicit StdpTrainer(StdpConfig cfg);
    const StdpConfig& config() const noexcept { return cfg_; }

protected:
    void validate(const Cell& cell) const override;
    void attach(const std::string& name, const Cell& cell) override;
    StagedUpdate compute(const std::string& name, const Cell& cell) override;
    Accumulator& target(Cell& cell) override { return cell.connection->weight_updater(); }

private:
    StdpConfig cfg_;
};

struct DelayStdpConfig {
    float b_pos = 0.5f;    // ms, anti-causal magnitude (B+)
    float b_neg = -0.5f;   // ms, causal magnitude (B-)
    float tau_pos = 20.0f; // ms
    float tau_neg = 20.0f; // ms
};

// Change in delay for one pair given t_delta = t_post - t_pre - D.
float delay_adjusted_update(float t_delta, const DelayStdpConfig& cfg);

// Delay-adjusted STDP for delays. Spike times come from time-since-event
// monitors on the neuron output and on the raw (undelayed) synapse input,
// both starting at NaN. Pairs contribute only on steps where either side
// spiked, and only once both sides have spiked at least once.
class DelayStdpTrainer final : public CellTrainer {
public:
    explicit DelayStdpTrainer(DelayStdpConfig cfg);
    const DelayStdpConfig& config() const noexcept { return cfg_; }

    // Signed per-parameter change staged by the last step of `name`.
    Tensor last_delta(const std::string& name) const;

protected:
    void validate(const Cell& cell) const override;
    void attach(const std::string& name, const Cell& cell) override;
    StagedUpdate compute(const std::string& name, const Cell& cell) override;
    Accumulator& target(Cell& cell) override { return cell.connection->delay_updater(); }

private:
    DelayStdpConfig cfg_;
};

}  // namespace snn
