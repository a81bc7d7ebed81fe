#include "snn/tensor.hpp"

#include <gtest/gtest.h>

#include <random>

using snn::Shape;
using snn::Tensor;

TEST(Tensor, BroadcastShapeAlignsTrailing)
{
    EXPECT_EQ(snn::broadcast_shape({2, 1, 4}, {3, 1}), (Shape{2, 3, 4}));
    EXPECT_EQ(snn::broadcast_shape({5}, {1}), (Shape{5}));
    EXPECT_THROW(snn::broadcast_shape({2, 3}, {4, 3}), std::invalid_argument);
}

TEST(Tensor, ConstructionChecksCount)
{
    EXPECT_THROW(Tensor({2, 2}, std::vector<float>{1, 2, 3}), std::invalid_argument);
    Tensor t({2, 3}, 1.5f);
    EXPECT_EQ(t.size(), 6u);
    EXPECT_EQ(t.at({1, 2}), 1.5f);
    EXPECT_THROW(t.at({2, 0}), std::out_of_range);
}

TEST(Tensor, ExpandRepeatsAlongSingletons)
{
    Tensor t({2, 1}, std::vector<float>{1, 2});
    Tensor e = t.expand({2, 3});
    EXPECT_EQ(e, Tensor({2, 3}, std::vector<float>{1, 1, 1, 2, 2, 2}));
    EXPECT_THROW(t.expand({3, 3}), std::invalid_argument);
}

TEST(Tensor, MoveAxisLastMatchesIndexing)
{
    Tensor t({2, 3, 4});
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<float>(k);
    Tensor m = snn::move_axis_last(t, 0);
    ASSERT_EQ(m.shape(), (Shape{3, 4, 2}));
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(m.at({b, c, a}), t.at({a, b, c}));
}

TEST(Tensor, MeanOverBatch)
{
    Tensor t({2, 2}, std::vector<float>{1, 2, 3, 6});
    EXPECT_EQ(snn::mean_over_batch(t), Tensor({2}, std::vector<float>{2, 4}));
}

TEST(Tensor, ContractLastAgainstLoops)
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> u(-1, 1);
    Tensor a({2, 3, 1, 5});
    Tensor b({2, 1, 4, 5});
    for (float& x : a.values()) x = u(rng);
    for (float& x : b.values()) x = u(rng);
    Tensor c = snn::contract_last(a, b);
    ASSERT_EQ(c.shape(), (Shape{2, 3, 4}));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 4; ++k) {
                double sum = 0;
                for (std::size_t r = 0; r < 5; ++r) sum += double(a.at({i, j, 0, r})) * b.at({i, 0, k, r});
                EXPECT_NEAR(c.at({i, j, k}), sum, 1e-5);
            }
}
