#include "snn/synapses.hpp"

#include <stdexcept>

namespace snn {

namespace {

Shape batched(std::size_t batch, const Shape& shape)
{
    Shape out{batch};
    out.insert(out.end(), shape.begin(), shape.end());
    return out;
}

}  // namespace

DeltaSynapse::DeltaSynapse(Shape input_shape, std::size_t batch, double dt, double t_max, float q_spike,
                           bool allow_injection)
    : input_shape_(std::move(input_shape)),
      batch_(batch),
      dt_(dt),
      t_max_(t_max),
      q_spike_(q_spike),
      allow_injection_(allow_injection),
      record_(RecordTensor::covering(batched(batch, input_shape_), dt, t_max))
{
    if (batch_ == 0) throw std::invalid_argument("synapse batch size must be positive");
    if (!(q_spike_ >= 0.0f)) throw std::invalid_argument("synapse charge must be nonnegative");
    reset();
}

void DeltaSynapse::reset()
{
    record_.reset();
    spike_ = Tensor(record_.slice_shape(), 0.0f);
    current_ = Tensor(record_.slice_shape(), 0.0f);
}

Tensor DeltaSynapse::step(const Tensor& spikes, std::span<const Tensor> injected)
{
    if (spikes.shape() != record_.slice_shape()) {
        throw std::invalid_argument("synapse input must have shape " + to_string(record_.slice_shape()) +
                                    ", got " + to_string(spikes.shape()));
    }
    if (!injected.empty() && !allow_injection_) throw std::invalid_argument("synapse does not accept injected current");
    for (const Tensor& inj : injected) {
        if (!inj.same_shape(spikes)) throw std::invalid_argument("injected current shape differs from spike shape");
    }

    record_.push(spikes);
    spike_ = spikes;

    const float amplitude = static_cast<float>(q_spike_ / dt_);
    Tensor current(spikes.shape());
    for (std::size_t k = 0; k < current.size(); ++k) current[k] = spikes[k] != 0.0f ? amplitude : 0.0f;
    for (const Tensor& inj : injected)
        for (std::size_t k = 0; k < current.size(); ++k) current[k] += inj[k];
    current_ = current;
    return current;
}

DeltaSynapse::History DeltaSynapse::history(const Tensor& delays) const
{
    Tensor spikes = record_.select(delays, Interp::previous());
    const float amplitude = static_cast<float>(q_spike_ / dt_);
    Tensor currents(spikes.shape());
    for (std::size_t k = 0; k < spikes.size(); ++k) currents[k] = spikes[k] != 0.0f ? amplitude : 0.0f;
    return {std::move(spikes), std::move(currents)};
}

SynapseBlueprint::SynapseBlueprint(std::optional<float> q_spike, bool allow_injection)
    : q_spike_(q_spike), allow_injection_(allow_injection)
{
    if (q_spike_ && !(*q_spike_ >= 0.0f)) throw std::invalid_argument("synapse charge must be nonnegative");
}

DeltaSynapse SynapseBlueprint::build(const Shape& input_shape, double dt, double t_max, std::size_t batch) const
{
    if (!(dt > 0.0)) throw std::invalid_argument("synapse step length must be positive");
    if (!(t_max >= 0.0)) throw std::invalid_argument("synapse maximum delay must be nonnegative");
    if (batch == 0) throw std::invalid_argument("synapse batch size must be positive");
    const float q = q_spike_.value_or(static_cast<float>(dt));
    return DeltaSynapse(input_shape, batch, dt, t_max, q, allow_injection_);
}

}  // namespace snn
