#include "snn/functional.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace snn;

namespace {

Tensor one(float v) { return Tensor({1}, std::vector<float>{v}); }

}  // namespace

TEST(VoltageIntegration, RestIsFixedPoint)
{
    LinearMembraneParams p;
    EXPECT_EQ(voltage_integration_linear(one(-60), one(0), p, 1.0)[0], -60.0f);
}

TEST(VoltageIntegration, HalfGapStep)
{
    LinearMembraneParams p{20.0f, -60.0f, 1.0f};
    const float v = voltage_integration_linear(one(-60), one(10), p, 20.0 * std::log(2.0))[0];
    EXPECT_NEAR(v, -55.0f, 1e-5);
}

TEST(VoltageIntegration, SubSteppingChangesNothing)
{
    LinearMembraneParams p{20.0f, -60.0f, 1.0f};
    Tensor coarse = voltage_integration_linear(one(-63.0f), one(7.5f), p, 1.0);
    Tensor fine = one(-63.0f);
    for (int k = 0; k < 20; ++k) fine = voltage_integration_linear(fine, one(7.5f), p, 0.05);
    EXPECT_NEAR(coarse[0], fine[0], 1e-5);

    // in double precision the step-refinement agreement is 1e-6 mV or better
    double exact = -63.0;
    for (int k = 0; k < 20; ++k) exact = -52.5 + (exact + 52.5) * std::exp(-0.05 / 20.0);
    EXPECT_NEAR(exact, -52.5 + (-63.0 + 52.5) * std::exp(-1.0 / 20.0), 1e-6);
}

TEST(VoltageIntegration, ConvergesMonotonically)
{
    LinearMembraneParams p{20.0f, -60.0f, 2.0f};
    Tensor v = one(-70.0f);
    for (int k = 0; k < 200; ++k) {
        Tensor next = voltage_integration_linear(v, one(4.0f), p, 1.0);
        EXPECT_GE(next[0], v[0]);
        EXPECT_LE(next[0], -52.0f);
        v = next;
    }
}

TEST(VoltageIntegration, Rejects)
{
    LinearMembraneParams p;
    EXPECT_THROW(voltage_integration_linear(one(0), one(0), p, 0.0), std::invalid_argument);
    EXPECT_THROW(voltage_integration_linear(Tensor({2}), one(0), p, 1.0), std::invalid_argument);
    EXPECT_THROW(validate(LinearMembraneParams{0.0f, -60.0f, 1.0f}), std::invalid_argument);
    EXPECT_THROW(validate(LinearMembraneParams{20.0f, -60.0f, 0.0f}), std::invalid_argument);
}

TEST(Thresholding, ConstantReset)
{
    auto r = voltage_thresholding(one(-50), one(-50), ResetRule::constant(-65), -60);
    EXPECT_EQ(r.spikes[0], 1.0f);
    EXPECT_EQ(r.voltages[0], -65.0f);

    r = voltage_thresholding(one(-55), one(-50), ResetRule::constant(-65), -60);
    EXPECT_EQ(r.spikes[0], 0.0f);
    EXPECT_EQ(r.voltages[0], -55.0f);
}

TEST(Thresholding, LinearReset)
{
    auto r = voltage_thresholding(one(-48), one(-50), ResetRule::linear(0.5f, 0.0f), -60);
    EXPECT_EQ(r.spikes[0], 1.0f);
    EXPECT_EQ(r.voltages[0], -54.0f);
}

TEST(Thresholding, ScalarThetaBroadcasts)
{
    Tensor v({2, 2}, std::vector<float>{-51, -50, -49, -70});
    auto r = voltage_thresholding(v, one(-50), ResetRule::constant(-65), -60);
    EXPECT_EQ(r.spikes, Tensor({2, 2}, std::vector<float>{0, 1, 1, 0}));
}

TEST(AdaptiveThreshold, DecayAndIncrement)
{
    AdaptiveThresholdParams p{50.0f, 0.5f};
    EXPECT_EQ(adaptive_thresholds_linear_spike(one(0), one(0), p, 1.0)[0], 0.0f);
    EXPECT_NEAR(adaptive_thresholds_linear_spike(one(2), one(0), p, 50.0)[0], 2.0 / std::exp(1.0), 1e-6);
    EXPECT_EQ(adaptive_thresholds_linear_spike(one(0), one(1), p, 1.0)[0], 0.5f);
    EXPECT_THROW(validate(AdaptiveThresholdParams{0.0f, 1.0f}), std::invalid_argument);
}

TEST(AdaptiveThreshold, SumsComponents)
{
    EXPECT_EQ(apply_adaptive_thresholds(-50, {})[0], -50.0f);
    const std::vector<Tensor> single{one(1.5f)};
    EXPECT_EQ(apply_adaptive_thresholds(-50, single)[0], -48.5f);

    const std::vector<Tensor> parts{Tensor({3}, std::vector<float>{1.0f, 0.0f, 2.0f}),
                                    Tensor({3}, std::vector<float>{0.5f, 0.25f, 0.0f})};
    const Tensor theta = apply_adaptive_thresholds(-50, parts);
    for (std::size_t i = 0; i < 3; ++i) {
        float expect = -50.0f;
        for (const Tensor& t : parts) expect += t[i];
        EXPECT_EQ(theta[i], expect);
    }
    EXPECT_EQ(theta[0], -48.5f);
}
