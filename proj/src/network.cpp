#include "snn/network.hpp"

#include <stdexcept>

namespace snn {

SerialLayer::SerialLayer(std::unique_ptr<Connection> connection, std::unique_ptr<NeuronGroup> neuron)
    : connection_(std::move(connection)), neuron_(std::move(neuron))
{
    if (!connection_ || !neuron_) throw std::invalid_argument("serial layer needs a connection and a neuron");
    if (connection_->batched_output_shape() != neuron_->state_shape()) {
        throw std::invalid_argument("connection output " + to_string(connection_->batched_output_shape()) +
                                    " does not match neuron input " + to_string(neuron_->state_shape()));
    }
}

Tensor SerialLayer::forward(const Tensor& input, std::span<const Tensor> injected)
{
    return neuron_->step(connection_->forward(input, injected));
}

void SerialLayer::reset()
{
    connection_->reset();
    neuron_->reset();
}

NeuronParams DiehlCookConfig::default_excitatory()
{
    NeuronParams p;
    p.membrane = {100.0f, -65.0f, 1.0f};
    p.theta_base = -52.0f;
    p.reset = ResetRule::constant(-65.0f);
    p.adaptation = {{1e7f, 0.05f}};
    p.t_refrac = 5.0f;
    return p;
}

NeuronParams DiehlCookConfig::default_inhibitory()
{
    NeuronParams p;
    p.membrane = {10.0f, -60.0f, 1.0f};
    p.theta_base = -40.0f;
    p.reset = ResetRule::constant(-45.0f);
    p.t_refrac = 2.0f;
    return p;
}

DiehlCookLayer::DiehlCookLayer(const DiehlCookConfig& cfg)
    : cfg_(cfg),
      feedforward_({cfg.inputs}, cfg.neurons, cfg.batch, cfg.dt, cfg.delay_max),
      apply_inhibition_(cfg.neurons, cfg.batch, cfg.dt),
      trigger_inhibition_(cfg.neurons, cfg.batch, cfg.dt),
      excitatory_(NeuronModel::alif, {cfg.neurons}, cfg.batch, cfg.excitatory, cfg.dt),
      inhibitory_(NeuronModel::lif, {cfg.neurons}, cfg.batch, cfg.inhibitory, cfg.dt),
      exc_buffer_({cfg.batch, cfg.neurons}, 0.0f),
      inh_buffer_({cfg.batch, cfg.neurons}, 0.0f)
{
}

Tensor DiehlCookLayer::forward(const Tensor& input)
{
    Tensor exc_in = feedforward_.forward(input);
    const Tensor inhibition = apply_inhibition_.forward(inh_buffer_);
    for (std::size_t k = 0; k < exc_in.size(); ++k) exc_in[k] -= cfg_.inhibition_gain * inhibition[k];
    const Tensor inh_in = trigger_inhibition_.forward(exc_buffer_);

    Tensor exc_spikes = excitatory_.step(exc_in);
    inh_buffer_ = inhibitory_.step(inh_in);
    exc_buffer_ = exc_spikes;
    return exc_spikes;
}

void DiehlCookLayer::reset()
{
    feedforward_.reset();
    apply_inhibition_.reset();
    trigger_inhibition_.reset();
    excitatory_.reset();
    inhibitory_.reset();
    exc_buffer_.fill(0.0f);
    inh_buffer_.fill(0.0f);
}

}  // namespace snn
