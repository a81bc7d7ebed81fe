#pragma once

#include "snn/tensor.hpp"

#include <cstdint>
#include <vector>

namespace snn {

enum class PoissonVariant {
    // Exponential inter-spike intervals: a homogeneous Poisson process.
    exponential_interval,
    // Poisson-distributed whole-step intervals (zero draws become one step).
    // Much more regular than a Poisson process; kept for comparison.
    poisson_interval,
};

struct PoissonEncoderConfig {
    Tensor rates;  // Hz, any shape
    std::size_t steps = 0;
    double dt = 1.0;  // ms
    std::uint64_t seed = 0;
    PoissonVariant variant = PoissonVariant::exponential_interval;
};

// Spike times (ms, in [0, steps * dt)) drawn for every source, in source order.
std::vector<std::vector<double>> poisson_spike_times(const PoissonEncoderConfig& cfg);

// steps x rate-shape train of 0/1 values: a spike at time t marks step
// floor(t / dt); several spikes in one step collapse into one.
Tensor poisson_encode(const PoissonEncoderConfig& cfg);

}  // namespace snn
