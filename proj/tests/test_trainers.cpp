#include "oracles.hpp"
#include "snn/trainers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace snn;

namespace {

NeuronParams quiet()
{
    NeuronParams p;
    p.t_refrac = 0.0f;
    return p;
}

// Neurons whose spikes are forced: a current far above threshold fires, zero never does.
Tensor drive_for(const Tensor& wanted)
{
    Tensor i = wanted;
    for (float& x : i.values()) x = x != 0.0f ? 1e4f : 0.0f;
    return i;
}

}  // namespace

TEST(StdpTrainer, SilenceStagesZero)
{
    LinearDense c({3}, 2, 1, 1.0);
    c.add_updater();
    NeuronGroup n(NeuronModel::lif, {2}, 1, quiet(), 1.0);
    StdpTrainer t({});
    t.register_cell("c", Cell(c, n));
    for (int k = 0; k < 5; ++k) {
        n.step(c.forward(Tensor({1, 3})));
        t.step();
        EXPECT_EQ(t.last_update("c").pos, Tensor({2, 3}));
        EXPECT_EQ(t.last_update("c").neg, Tensor({2, 3}));
    }
}

TEST(StdpTrainer, CausalPairPotentiates)
{
    const float eta = 0.01f, tau = 20.0f;
    for (int lag = 1; lag <= 6; ++lag) {
        LinearDense c({1}, 1, 1, 1.0);
        c.add_updater();
        NeuronGroup n(NeuronModel::lif, {1}, 1, quiet(), 1.0);
        StdpTrainer t({eta, eta, tau, tau, false});
        t.register_cell("c", Cell(c, n));
        for (int k = 0; k <= lag; ++k) {
            c.forward(Tensor({1, 1}, k == 0 ? 1.0f : 0.0f));
            n.step(drive_for(Tensor({1, 1}, k == lag ? 1.0f : 0.0f)));
            t.step();
        }
        EXPECT_NEAR(t.last_update("c").pos[0], eta * std::exp(-lag / tau), 1e-7);
        EXPECT_EQ(t.last_update("c").neg[0], 0.0f);
    }
}

TEST(StdpTrainer, WorksOnConvolution)
{
    std::mt19937_64 rng(1);
    Conv2D c({1, 5, 5}, 2, Conv2DGeometry{{3, 3}, {1, 1}, {0, 0}, {1, 1}}, 2, 1.0);
    c.add_updater();
    NeuronGroup n(NeuronModel::lif, {2, 3, 3}, 2, quiet(), 1.0);
    StdpTrainer t({});
    t.register_cell("conv", Cell(c, n));
    for (int k = 0; k < 10; ++k) {
        c.forward(oracle::random_spikes({2, 1, 5, 5}, rng, 0.5));
        n.step(drive_for(oracle::random_spikes({2, 2, 3, 3}, rng, 0.5)));
        t.step();
        EXPECT_EQ(t.last_update("conv").pos.shape(), c.weight().shape());
    }
}

TEST(StdpTrainer, DelayAwareNeedsDelays)
{
    LinearDense c({2}, 2, 1, 1.0);
    c.add_updater();
    NeuronGroup n(NeuronModel::lif, {2}, 1, quiet(), 1.0);
    StdpTrainer t({1e-3f, 1e-3f, 20.0f, 20.0f, true});
    EXPECT_THROW(t.register_cell("c", Cell(c, n)), std::invalid_argument);
    EXPECT_EQ(t.pool().size(), 0u);
}

TEST(CellTrainer, RegistrationRules)
{
    LinearDense c({2}, 2, 1, 1.0);
    NeuronGroup n(NeuronModel::lif, {2}, 1, quiet(), 1.0);
    NeuronGroup wrong(NeuronModel::lif, {3}, 1, quiet(), 1.0);
    StdpTrainer t({});
    EXPECT_THROW(t.register_cell("c", Cell(c, n)), std::invalid_argument);  // no updater
    c.add_updater();
    EXPECT_THROW(t.register_cell("c", Cell(c, wrong)), std::invalid_argument);
    const Tensor before = c.weight();
    t.register_cell("c", Cell(c, n));
    EXPECT_EQ(c.weight(), before);
    EXPECT_THROW(t.register_cell("c", Cell(c, n)), std::invalid_argument);
    EXPECT_THROW(t.register_cell("again", Cell(c, n)), std::invalid_argument);
    t.unregister_cell("c");
    EXPECT_FALSE(t.registered("c"));
    EXPECT_THROW(t.unregister_cell("c"), std::invalid_argument);
    EXPECT_THROW(t.last_update("c"), std::invalid_argument);
}

TEST(CellTrainer, SharedNeuronSharesPostsynapticMonitor)
{
    LinearDense a({2}, 3, 1, 1.0, 2.0);
    LinearDense b({4}, 3, 1, 1.0, 2.0);
    a.add_updater();
    b.add_updater();
    NeuronGroup n(NeuronModel::lif, {3}, 1, quiet(), 1.0);

    DelayStdpTrainer t({});
    t.register_cell("a", Cell(a, n));
    const auto after_a = t.pool().keys();
    t.register_cell("b", Cell(b, n));
    std::size_t post = 0;
    for (const MonitorKey& k : t.pool().keys()) post += k.target == &n;
    EXPECT_EQ(post, 1u);
    EXPECT_EQ(t.pool().size(), 3u);

    t.unregister_cell("b");
    EXPECT_EQ(t.pool().keys(), after_a);
    t.unregister_cell("a");
    EXPECT_EQ(t.pool().size(), 0u);
}

TEST(DelayStdp, RuleEvaluation)
{
    DelayStdpConfig cfg{1.0f, -1.0f, 20.0f, 20.0f};
    EXPECT_NEAR(delay_adjusted_update(5.0f - 2.0f, cfg), -std::exp(-0.15), 1e-6);
    EXPECT_NEAR(delay_adjusted_update(1.0f - 4.0f, cfg), std::exp(-0.15), 1e-6);
    EXPECT_EQ(delay_adjusted_update(0.0f, cfg), cfg.b_neg);
    EXPECT_NEAR(-std::exp(-0.15), -0.86071, 1e-5);
}

TEST(DelayStdp, FreshMonitorsAreNan)
{
    LinearDense c({2}, 2, 1, 1.0, 3.0);
    c.add_updater();
    NeuronGroup n(NeuronModel::lif, {2}, 1, quiet(), 1.0);
    DelayStdpTrainer t({});
    t.register_cell("c", Cell(c, n));
    ASSERT_EQ(t.pool().size(), 2u);
    for (const MonitorKey& k : t.pool().keys())
        for (float v : t.pool().find(k)->value().values()) EXPECT_TRUE(std::isnan(v));
}

TEST(DelayStdp, ZeroUntilBothSidesSpiked)
{
    LinearDense c({1}, 1, 1, 1.0, 5.0);
    c.add_updater();
    NeuronGroup n(NeuronModel::lif, {1}, 1, quiet(), 1.0);
    DelayStdpTrainer t({});
    t.register_cell("c", Cell(c, n));
    for (int k = 0; k < 5; ++k) {
        c.forward(Tensor({1, 1}, 1.0f));
        n.step(Tensor({1, 1}));
        t.step();
        EXPECT_EQ(t.last_delta("c")[0], 0.0f);
    }
    c.forward(Tensor({1, 1}));
    n.step(Tensor({1, 1}, 1e4f));
    t.step();
    // post 1 ms after the last pre spike, D = 0: t_delta = 1 >= 0
    EXPECT_NEAR(t.last_delta("c")[0], -0.5 * std::exp(-1.0 / 20.0), 1e-6);
}

TEST(DelayStdp, NeedsDelays)
{
    LinearDense c({1}, 1, 1, 1.0);
    c.add_updater();
    NeuronGroup n(NeuronModel::lif, {1}, 1, quiet(), 1.0);
    DelayStdpTrainer t({});
    EXPECT_THROW(t.register_cell("c", Cell(c, n)), std::invalid_argument);
}
