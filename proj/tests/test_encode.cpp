#include "snn/encode.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace snn;

namespace {

PoissonEncoderConfig config(float rate, std::size_t steps, std::uint64_t seed)
{
    return {Tensor({1}, rate), steps, 1.0, seed, PoissonVariant::exponential_interval};
}

double total(const Tensor& t) { return std::accumulate(t.values().begin(), t.values().end(), 0.0); }

}  // namespace

TEST(PoissonEncode, ZeroRateIsSilent)
{
    auto cfg = config(0.0f, 500, 1);
    EXPECT_EQ(total(poisson_encode(cfg)), 0.0);
    cfg.variant = PoissonVariant::poisson_interval;
    EXPECT_EQ(total(poisson_encode(cfg)), 0.0);
}

TEST(PoissonEncode, ShapeFollowsRates)
{
    PoissonEncoderConfig cfg{Tensor({2, 3}, 10.0f), 7, 1.0, 0, PoissonVariant::exponential_interval};
    EXPECT_EQ(poisson_encode(cfg).shape(), (Shape{7, 2, 3}));
    cfg.steps = 0;
    EXPECT_EQ(poisson_encode(cfg).size(), 0u);
}

TEST(PoissonEncode, CountNearExpectation)
{
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) mean += total(poisson_encode(config(250.0f, 1000, seed)));
    mean /= 10.0;
    EXPECT_LE(std::abs(mean - 250.0), 3.0 * std::sqrt(250.0));
}

TEST(PoissonEncode, Deterministic)
{
    EXPECT_EQ(poisson_encode(config(100.0f, 300, 9)), poisson_encode(config(100.0f, 300, 9)));
    EXPECT_NE(poisson_encode(config(100.0f, 300, 9)), poisson_encode(config(100.0f, 300, 10)));
}

TEST(PoissonEncode, TrainMarksSpikeSteps)
{
    const auto cfg = config(80.0f, 400, 4);
    const auto times = poisson_spike_times(cfg);
    const Tensor train = poisson_encode(cfg);
    for (double t : times[0]) {
        EXPECT_GE(t, 0.0);
        EXPECT_LT(t, 400.0);
        EXPECT_EQ(train[static_cast<std::size_t>(t)], 1.0f);
    }
}

TEST(PoissonEncode, RejectsNegativeRates)
{
    EXPECT_THROW(poisson_encode(config(-1.0f, 10, 0)), std::invalid_argument);
    EXPECT_THROW(poisson_encode(config(NAN, 10, 0)), std::invalid_argument);
}
