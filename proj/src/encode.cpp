#include "snn/encode.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace snn {

namespace {

void check(const PoissonEncoderConfig& cfg)
{
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("encoder step length must be positive");
    for (float r : cfg.rates.values()) {
        if (!std::isfinite(r) || r < 0.0f) throw std::invalid_argument("spike rates must be finite and nonnegative");
    }
}

}  // namespace

std::vector<std::vector<double>> poisson_spike_times(const PoissonEncoderConfig& cfg)
{
    check(cfg);
    const double horizon = static_cast<double>(cfg.steps) * cfg.dt;
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<double>> times(cfg.rates.size());

    for (std::size_t src = 0; src < cfg.rates.size(); ++src) {
        const double rate = cfg.rates[src];
        if (rate == 0.0 || cfg.steps == 0) continue;
        const double mean_ms = 1000.0 / rate;
        auto& out = times[src];
        out.reserve(static_cast<std::size_t>(horizon / mean_ms * 1.2) + 4);

        if (cfg.variant == PoissonVariant::exponential_interval) {
            std::exponential_distribution<double> interval(1.0 / mean_ms);
            for (double t = interval(rng); t < horizon; t += interval(rng)) out.push_back(t);
        } else {
            std::poisson_distribution<long long> interval(mean_ms / cfg.dt);
            long long step = 0;
            for (;;) {
                step += std::max<long long>(1, interval(rng));
                // A spike ends each cumulative interval, so an interval of n steps lands on step n - 1.
                const double t = static_cast<double>(step - 1) * cfg.dt;
                if (t >= horizon) break;
                out.push_back(t);
            }
        }
    }
    return times;
}

Tensor poisson_encode(const PoissonEncoderConfig& cfg)
{
    const auto times = poisson_spike_times(cfg);
    Shape shape{cfg.steps};
    shape.insert(shape.end(), cfg.rates.shape().begin(), cfg.rates.shape().end());
    Tensor train(shape, 0.0f);
    const std::size_t sources = cfg.rates.size();
    for (std::size_t src = 0; src < sources; ++src) {
        for (double t : times[src]) {
            const auto step = static_cast<std::size_t>(std::floor(t / cfg.dt));
            if (step < cfg.steps) train[step * sources + src] = 1.0f;
        }
    }
    return train;
}

}  // namespace snn
