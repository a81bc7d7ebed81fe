#pragma once

#include "snn/connections.hpp"
#include "snn/neurons.hpp"
#include "snn/trainers.hpp"

#include <memory>
#include <optional>

namespace snn {

// One connection feeding one neuron group, outputs wired straight through.
class SerialLayer {
public:
    SerialLayer(std::unique_ptr<Connection> connection, std::unique_ptr<NeuronGroup> neuron);

    Tensor forward(const Tensor& input, std::span<const Tensor> injected = {});

    Connection& connection() noexcept { return *connection_; }
    NeuronGroup& neuron() noexcept { return *neuron_; }
    Cell cell() noexcept { return {*connection_, *neuron_}; }

    void reset();

private:
    std::unique_ptr<Connection> connection_;
    std::unique_ptr<NeuronGroup> neuron_;
};

struct DiehlCookConfig {
    std::size_t inputs = 784;
    std::size_t neurons = 100;
    std::size_t batch = 1;
    double dt = 1.0;
    std::optional<double> delay_max{};  // feedforward delays
    NeuronParams excitatory = default_excitatory();
    NeuronParams inhibitory = default_inhibitory();
    // Scale on the inhibitory current entering the excitatory group.
    float inhibition_gain = 1.0f;

    static NeuronParams default_excitatory();
    static NeuronParams default_inhibitory();
};

// Excitatory ALIF group driven by a dense feedforward connection, inhibited
// through an inhibitory LIF group:
//
//   excitatory <- feedforward(input) - gain * apply_inhibition(inh spikes[t-1])
//   inhibitory <- trigger_inhibition(exc spikes[t-1])
//
// The recurrent paths read spikes buffered from the previous step (zero at
// start), so outputs at t depend only on inputs up to t.
class DiehlCookLayer {
public:
    explicit DiehlCookLayer(const DiehlCookConfig& cfg);

    // Returns the excitatory spikes.
    Tensor forward(const Tensor& input);

    LinearDense& feedforward() noexcept { return feedforward_; }
    LinearLateral& apply_inhibition() noexcept { return apply_inhibition_; }
    LinearDirect& trigger_inhibition() noexcept { return trigger_inhibition_; }
    NeuronGroup& excitatory() noexcept { return excitatory_; }
    NeuronGroup& inhibitory() noexcept { return inhibitory_; }

    Cell feedforward_cell() noexcept { return {feedforward_, excitatory_}; }
    Cell inhibition_cell() noexcept { return {apply_inhibition_, excitatory_}; }
    Cell trigger_cell() noexcept { return {trigger_inhibition_, inhibitory_}; }

    const Tensor& excitatory_buffer() const noexcept { return exc_buffer_; }
    const Tensor& inhibitory_buffer() const noexcept { return inh_buffer_; }
    const DiehlCookConfig& config() const noexcept { return cfg_; }

    void reset();

private:
    DiehlCookConfig cfg_;
    LinearDense feedforward_;
    LinearLateral apply_inhibition_;
    LinearDirect trigger_inhibition_;
    NeuronGroup excitatory_;
    NeuronGroup inhibitory_;
    Tensor exc_buffer_;
    Tensor inh_buffer_;
};

}  // namespace snn
