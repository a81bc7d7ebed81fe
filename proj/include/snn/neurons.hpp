#pragma once

#include "snn/functional.hpp"
#include "snn/tensor.hpp"

#include <vector>

namespace snn {

enum class NeuronModel { lif, alif, glif2 };

struct NeuronParams {
    LinearMembraneParams membrane{};
    float theta_base = -50.0f;  // mV
    ResetRule reset = ResetRule::constant(-65.0f);
    std::vector<AdaptiveThresholdParams> adaptation{};  // ALIF / GLIF2 only
    float t_refrac = 3.0f;  // ms
};

// A group of neurons sharing one model: currents in, spikes out.
//
// Refractory neurons are clamped: they ignore input, keep their post-spike
// voltage and cannot fire. A neuron fires only if its refractory counter was
// zero at the start of the step; the counter is decremented by dt on each
// clamped step, so a period that is not a multiple of dt rounds up.
class NeuronGroup {
public:
    NeuronGroup(NeuronModel model, Shape shape, std::size_t batch, NeuronParams params, double dt);

    // `current` has shape batch x shape. Returns 0/1 spikes of the same shape.
    Tensor step(const Tensor& current);

    // Back to rest: v = v_rest, no adaptation, no refractory time.
    void reset();

    NeuronModel model() const noexcept { return model_; }
    const Shape& shape() const noexcept { return shape_; }
    std::size_t batch() const noexcept { return batch_; }
    double dt() const noexcept { return dt_; }
    const NeuronParams& params() const noexcept { return params_; }
    const Shape& state_shape() const noexcept { return state_shape_; }

    const Tensor& voltages() const noexcept { return v_; }
    const Tensor& refractory() const noexcept { return refrac_; }
    const std::vector<Tensor>& theta_adapt() const noexcept { return theta_adapt_; }
    Tensor thresholds() const;
    const Tensor& spikes() const noexcept { return spikes_; }

    friend bool operator==(const NeuronGroup&, const NeuronGroup&);

private:
    NeuronModel model_;
    Shape shape_;
    std::size_t batch_;
    NeuronParams params_;
    double dt_;
    Shape state_shape_;

    Tensor v_;
    Tensor refrac_;
    std::vector<Tensor> theta_adapt_;
    Tensor spikes_;
};

}  // namespace snn
