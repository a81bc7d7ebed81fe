#pragma once

#include "snn/tensor.hpp"

#include <cstddef>

namespace snn {

// Strategy for reading between (or writing onto) two bracketing samples.
struct Interp {
    enum class Kind { previous, nearest, linear, expdecay, expratedecay };

    Kind kind = Kind::previous;
    float tau = 0.0f;  // ms, exponential kinds only

    static constexpr Interp previous() { return {Kind::previous, 0.0f}; }
    static constexpr Interp nearest() { return {Kind::nearest, 0.0f}; }
    static constexpr Interp linear() { return {Kind::linear, 0.0f}; }
    static Interp expdecay(float tau);
    static Interp expratedecay(float tau);
};

// Value at a point `since_newer` ms older than the newer sample. `older` is
// the sample one step (dt) further in the past.
float interpolate(Interp interp, float newer, float older, double since_newer, double dt);

// Rolling window of W observation slices, newest at age 0.
//
// Slot layout follows a ring: `pointer` is the next slot to overwrite, the
// newest observation sits at pointer - 1. Slots that were never written read
// as zero.
class RecordTensor {
public:
    // W = floor(T/dt) + 1 when inclusive, floor(T/dt) otherwise (at least 1).
    static RecordTensor create(Shape slice_shape, double dt, double duration, bool inclusive = true);

    // W = ceil(1 + T/dt); every delay in [0, T] has both bracketing samples.
    static RecordTensor covering(Shape slice_shape, double dt, double duration);

    double dt() const noexcept { return dt_; }
    double duration() const noexcept { return duration_; }
    std::size_t window() const noexcept { return window_; }
    std::size_t pointer() const noexcept { return pointer_; }
    std::size_t observed() const noexcept { return observed_; }
    const Shape& slice_shape() const noexcept { return slice_shape_; }
    std::size_t slice_size() const noexcept { return slice_size_; }

    void push(const Tensor& obs);

    // Stored slice `age` steps before the newest (age 0 is the newest).
    Tensor at_age(std::size_t age) const;
    Tensor latest() const { return at_age(0); }

    // `delays` has shape slice-shape x D, where each leading extent may also be
    // 1 (broadcast). Returns slice-shape x D.
    Tensor select(const Tensor& delays, Interp interp) const;

    // Writes `value` at `time` ms before present using the extrapolation rule.
    void insert(double time, const Tensor& value, Interp extrap);

    // Zero-fills the window and forgets all observations.
    void reset();

private:
    RecordTensor(Shape slice_shape, double dt, double duration, std::size_t window);

    struct Bracket {
        std::size_t newer;   // age k0 = floor(d/dt)
        std::size_t older;   // age k1 = ceil(d/dt), clamped to the window
        double since_newer;  // d - k0*dt
        bool on_grid;
    };
    Bracket bracket(double delay) const;
    std::size_t slot(std::size_t age) const noexcept { return (pointer_ + 2 * window_ - 1 - age) % window_; }

    Shape slice_shape_;
    std::size_t slice_size_ = 0;
    double dt_ = 1.0;
    double duration_ = 0.0;
    std::size_t window_ = 1;
    std::size_t pointer_ = 0;
    std::size_t observed_ = 0;
    std::vector<float> storage_;
};

}  // namespace snn
