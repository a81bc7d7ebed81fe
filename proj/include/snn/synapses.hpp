#pragma once

#include "snn/record.hpp"
#include "snn/tensor.hpp"

#include <optional>
#include <span>
#include <utility>

namespace snn {

// Delta synapse: every spike delivers charge q_spike within one step, so the
// current is (q_spike / dt) * spike. Only spikes are recorded; delayed
// currents are recomputed from delayed spikes. Injected current (allowed on
// the "plus" variant) is instantaneous and never recorded.
class DeltaSynapse {
public:
    DeltaSynapse(Shape input_shape, std::size_t batch, double dt, double t_max, float q_spike, bool allow_injection);

    // Pushes `spikes` (batch x input shape) and returns this step's current.
    Tensor step(const Tensor& spikes, std::span<const Tensor> injected = {});

    struct History {
        Tensor spikes;
        Tensor currents;
    };
    // Spikes recorded `delays` ms ago (slice-shape x D selector), read with
    // previous-sample interpolation, and their delta currents.
    History history(const Tensor& delays) const;

    const Tensor& spike() const noexcept { return spike_; }
    const Tensor& current() const noexcept { return current_; }
    const RecordTensor& spike_record() const noexcept { return record_; }

    const Shape& input_shape() const noexcept { return input_shape_; }
    const Shape& slice_shape() const noexcept { return record_.slice_shape(); }
    std::size_t batch() const noexcept { return batch_; }
    double dt() const noexcept { return dt_; }
    double t_max() const noexcept { return t_max_; }
    float q_spike() const noexcept { return q_spike_; }
    bool allow_injection() const noexcept { return allow_injection_; }

    void reset();

private:
    Shape input_shape_;
    std::size_t batch_;
    double dt_;
    double t_max_;
    float q_spike_;
    bool allow_injection_;
    RecordTensor record_;
    Tensor spike_;
    Tensor current_;
};

// Hyperparameters that do not depend on the owning connection. The connection
// finalizes it with its input shape, step length, maximum delay and batch.
class SynapseBlueprint {
public:
    // Without an explicit charge the synapse delivers q = dt, a unit current.
    SynapseBlueprint(std::optional<float> q_spike, bool allow_injection);

    static SynapseBlueprint delta(std::optional<float> q_spike = {}) { return {q_spike, false}; }
    static SynapseBlueprint delta_plus(std::optional<float> q_spike = {}) { return {q_spike, true}; }

    DeltaSynapse build(const Shape& input_shape, double dt, double t_max, std::size_t batch) const;

    std::optional<float> q_spike() const noexcept { return q_spike_; }
    bool allow_injection() const noexcept { return allow_injection_; }

private:
    std::optional<float> q_spike_;
    bool allow_injection_;
};

}  // namespace snn
