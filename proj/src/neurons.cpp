#include "snn/neurons.hpp"

#include <stdexcept>

namespace snn {

namespace {

void validate_model(NeuronModel model, const NeuronParams& p)
{
    validate(p.membrane);
    for (const auto& a : p.adaptation) validate(a);
    if (!(p.t_refrac >= 0.0f)) throw std::invalid_argument("refractory period must be nonnegative");
    switch (model) {
    case NeuronModel::lif:
        if (!p.adaptation.empty()) throw std::invalid_argument("LIF neurons have no adaptive threshold");
        if (p.reset.kind != ResetRule::Kind::constant) throw std::invalid_argument("LIF neurons use a constant reset");
        break;
    case NeuronModel::alif:
        if (p.reset.kind != ResetRule::Kind::constant) throw std::invalid_argument("ALIF neurons use a constant reset");
        break;
    case NeuronModel::glif2:
        if (p.reset.kind != ResetRule::Kind::linear) throw std::invalid_argument("GLIF2 neurons use a linear reset");
        break;
    }
}

}  // namespace

NeuronGroup::NeuronGroup(NeuronModel model, Shape shape, std::size_t batch, NeuronParams params, double dt)
    : model_(model), shape_(std::move(shape)), batch_(batch), params_(std::move(params)), dt_(dt)
{
    if (!(dt_ > 0.0)) throw std::invalid_argument("step length must be positive");
    if (batch_ == 0 || shape_.empty() || numel(shape_) == 0)
        throw std::invalid_argument("neuron group needs a nonempty shape and batch");
    validate_model(model_, params_);

    state_shape_.push_back(batch_);
    state_shape_.insert(state_shape_.end(), shape_.begin(), shape_.end());
    reset();
}

void NeuronGroup::reset()
{
    v_ = Tensor(state_shape_, params_.membrane.v_rest);
    refrac_ = Tensor(state_shape_, 0.0f);
    theta_adapt_.assign(params_.adaptation.size(), Tensor(state_shape_, 0.0f));
    spikes_ = Tensor(state_shape_, 0.0f);
}

Tensor NeuronGroup::thresholds() const { return apply_adaptive_thresholds(params_.theta_base, theta_adapt_); }

Tensor NeuronGroup::step(const Tensor& current)
{
    if (current.shape() != state_shape_) {
        throw std::invalid_argument("neuron input must have shape " + to_string(state_shape_) + ", got " +
                                    to_string(current.shape()));
    }

    const Tensor integrated = voltage_integration_linear(v_, current, params_.membrane, dt_);

    // Threshold is evaluated against decayed adaptation; increments land after.
    const Tensor silent(state_shape_, 0.0f);
    std::vector<Tensor> decayed;
    decayed.reserve(theta_adapt_.size());
    for (std::size_t c = 0; c < theta_adapt_.size(); ++c)
        decayed.push_back(adaptive_thresholds_linear_spike(theta_adapt_[c], silent, params_.adaptation[c], dt_));
    const Tensor theta = apply_adaptive_thresholds(params_.theta_base, decayed);

    ThresholdResult fired = voltage_thresholding(integrated, theta, params_.reset, params_.membrane.v_rest);

    const double settle = 1e-6 * dt_;
    for (std::size_t k = 0; k < v_.size(); ++k) {
        if (refrac_[k] > 0.0f) {
            fired.spikes[k] = 0.0f;
            fired.voltages[k] = v_[k];
            const double left = static_cast<double>(refrac_[k]) - dt_;
            refrac_[k] = left > settle ? static_cast<float>(left) : 0.0f;
        } else if (fired.spikes[k] != 0.0f) {
            refrac_[k] = params_.t_refrac;
        }
    }

    for (std::size_t c = 0; c < theta_adapt_.size(); ++c)
        theta_adapt_[c] = adaptive_thresholds_linear_spike(theta_adapt_[c], fired.spikes, params_.adaptation[c], dt_);

    v_ = std::move(fired.voltages);
    spikes_ = fired.spikes;
    return std::move(fired.spikes);
}

bool operator==(const NeuronGroup& a, const NeuronGroup& b)
{
    return a.model_ == b.model_ && a.shape_ == b.shape_ && a.batch_ == b.batch_ && a.dt_ == b.dt_ &&
           a.v_ == b.v_ && a.refrac_ == b.refrac_ && a.theta_adapt_ == b.theta_adapt_ && a.spikes_ == b.spikes_;
}

}  // namespace snn
