#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace snn {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

// Broadcast shape of two shapes aligned on their trailing dimensions.
// Throws std::invalid_argument when a pair of extents is neither equal nor 1.
Shape broadcast_shape(const Shape& a, const Shape& b);

// Dense row-major tensor of 32-bit reals. Boolean tensors are stored as 0/1.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, float fill = 0.0f);
    Tensor(Shape shape, std::vector<float> values);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }

    std::span<float> values() noexcept { return data_; }
    std::span<const float> values() const noexcept { return data_; }
    float* data() noexcept { return data_.data(); }
    const float* data() const noexcept { return data_.data(); }

    float& operator[](std::size_t i) noexcept { return data_[i]; }
    float operator[](std::size_t i) const noexcept { return data_[i]; }

    float& at(std::initializer_list<std::size_t> index);
    float at(std::initializer_list<std::size_t> index) const;

    void fill(float value);

    // Same elements under a new shape with identical element count.
    Tensor reshaped(Shape shape) const&;
    Tensor reshaped(Shape shape) &&;

    // Materializes the broadcast of this tensor to `shape`.
    Tensor expand(const Shape& shape) const;

    bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }

    friend bool operator==(const Tensor& a, const Tensor& b) = default;

private:
    std::size_t flat_index(std::initializer_list<std::size_t> index) const;

    Shape shape_;
    std::vector<float> data_;
};

// Sum over the leading (batch) axis divided by its extent.
Tensor mean_over_batch(Tensor t);

// Moves axis `from` to the last position, preserving the order of the others.
Tensor move_axis_last(const Tensor& t, std::size_t from);

// Generic "b ... r, b ... r -> b ..." contraction: broadcast product of two
// tensors of equal rank, summed over the trailing axis.
Tensor contract_last(const Tensor& a, const Tensor& b);

}  // namespace snn
