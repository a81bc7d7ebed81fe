#pragma once

#include "snn/tensor.hpp"

#include <span>

namespace snn {

struct LinearMembraneParams {
    float tau_m = 20.0f;   // ms
    float v_rest = -60.0f; // mV
    float r_m = 1.0f;      // MOhm
};

struct AdaptiveThresholdParams {
    float tau_theta = 50.0f; // ms
    float a_theta = 0.0f;    // mV added per spike
};

// Post-spike voltage: a constant, or v_rest + slope * (v - v_rest) + offset.
struct ResetRule {
    enum class Kind { constant, linear };

    Kind kind = Kind::constant;
    float v_reset = -65.0f; // constant rule
    float slope = 0.0f;     // linear rule, m_r
    float offset = 0.0f;    // linear rule, b_r (mV)

    static constexpr ResetRule constant(float v_reset) { return {Kind::constant, v_reset, 0.0f, 0.0f}; }
    static constexpr ResetRule linear(float slope, float offset) { return {Kind::linear, 0.0f, slope, offset}; }

    float apply(float v, float v_rest) const noexcept
    {
        return kind == Kind::constant ? v_reset : v_rest + slope * (v - v_rest) + offset;
    }
};

void validate(const LinearMembraneParams& p);
void validate(const AdaptiveThresholdParams& p);

// Exact step of tau_m dV/dt = v_rest - V + r_m I with I held over the step.
Tensor voltage_integration_linear(const Tensor& v, const Tensor& i, const LinearMembraneParams& p, double dt);

struct ThresholdResult {
    Tensor spikes;
    Tensor voltages;
};

// `theta` may be a single element or broadcast to v.
ThresholdResult voltage_thresholding(const Tensor& v, const Tensor& theta, const ResetRule& reset, float v_rest);

// theta' = theta * exp(-dt/tau_theta) + a_theta * spike
Tensor adaptive_thresholds_linear_spike(const Tensor& theta_adapt, const Tensor& spikes,
                                        const AdaptiveThresholdParams& p, double dt);

// theta_base plus the sum of every adaptation component.
Tensor apply_adaptive_thresholds(float theta_base, std::span<const Tensor> theta_adapt);

}  // namespace snn
