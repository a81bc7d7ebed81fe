#include "snn/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace snn {

void validate(const LinearMembraneParams& p)
{
    if (!(p.tau_m > 0.0f)) throw std::invalid_argument("membrane time constant must be positive");
    if (!(p.r_m > 0.0f)) throw std::invalid_argument("membrane resistance must be positive");
}

void validate(const AdaptiveThresholdParams& p)
{
    if (!(p.tau_theta > 0.0f)) throw std::invalid_argument("adaptation time constant must be positive");
}

Tensor voltage_integration_linear(const Tensor& v, const Tensor& i, const LinearMembraneParams& p, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("step length must be positive");
    if (!v.same_shape(i)) {
        throw std::invalid_argument("voltage " + to_string(v.shape()) + " and current " + to_string(i.shape()) +
                                    " differ in shape");
    }
    validate(p);
    const double decay = std::exp(-dt / static_cast<double>(p.tau_m));
    Tensor out(v.shape());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double target = static_cast<double>(p.v_rest) + static_cast<double>(p.r_m) * i[k];
        out[k] = static_cast<float>(target + (v[k] - target) * decay);
    }
    return out;
}

ThresholdResult voltage_thresholding(const Tensor& v, const Tensor& theta, const ResetRule& reset, float v_rest)
{
    const Tensor th = theta.size() == 1 ? Tensor(v.shape(), theta[0]) : theta.expand(v.shape());
    ThresholdResult res{Tensor(v.shape()), Tensor(v.shape())};
    for (std::size_t k = 0; k < v.size(); ++k) {
        const bool fire = v[k] >= th[k];
        res.spikes[k] = fire ? 1.0f : 0.0f;
        res.voltages[k] = fire ? reset.apply(v[k], v_rest) : v[k];
    }
    return res;
}

Tensor adaptive_thresholds_linear_spike(const Tensor& theta_adapt, const Tensor& spikes,
                                        const AdaptiveThresholdParams& p, double dt)
{
    if (!theta_adapt.same_shape(spikes)) throw std::invalid_argument("adaptation and spike shapes differ");
    validate(p);
    const auto decay = static_cast<float>(std::exp(-dt / static_cast<double>(p.tau_theta)));
    Tensor out(theta_adapt.shape());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = theta_adapt[k] * decay + (spikes[k] != 0.0f ? p.a_theta : 0.0f);
    return out;
}

Tensor apply_adaptive_thresholds(float theta_base, std::span<const Tensor> theta_adapt)
{
    if (theta_adapt.empty()) return Tensor({1}, theta_base);
    Shape shape = theta_adapt.front().shape();
    for (const Tensor& t : theta_adapt.subspan(1)) shape = broadcast_shape(shape, t.shape());

    Tensor sum(shape);
    for (const Tensor& t : theta_adapt) {
        const Tensor e = t.expand(shape);
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += e[k];
    }
    for (float& x : sum.values()) x += theta_base;
    return sum;
}

}  // namespace snn
