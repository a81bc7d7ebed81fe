#include "snn/record.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snn {

namespace {

// Step counts land on integers up to float round-off of the stored delays.
constexpr double grid_tolerance = 1e-5;

bool near_integer(double x, double& rounded)
{
    rounded = std::round(x);
    return std::abs(x - rounded) <= grid_tolerance * std::max(1.0, std::abs(x));
}

double snapped_floor(double x)
{
    double r = 0.0;
    return near_integer(x, r) ? r : std::floor(x);
}

double snapped_ceil(double x)
{
    double r = 0.0;
    return near_integer(x, r) ? r : std::ceil(x);
}

void check_sizing(const Shape& slice_shape, double dt, double duration)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("record step length must be positive");
    if (!(duration >= 0.0) || !std::isfinite(duration))
        throw std::invalid_argument("record duration must be nonnegative");
    if (slice_shape.empty() || numel(slice_shape) == 0)
        throw std::invalid_argument("record slice shape must be nonempty");
}

}  // namespace

Interp Interp::expdecay(float tau)
{
    if (!(tau > 0.0f)) throw std::invalid_argument("expdecay time constant must be positive");
    return {Kind::expdecay, tau};
}

Interp Interp::expratedecay(float tau)
{
    if (!(tau > 0.0f)) throw std::invalid_argument("expratedecay time constant must be positive");
    return {Kind::expratedecay, tau};
}

float interpolate(Interp interp, float newer, float older, double since_newer, double dt)
{
    const double since_older = dt - since_newer;
    switch (interp.kind) {
    case Interp::Kind::previous:
        return older;
    case Interp::Kind::nearest:
        return since_newer < 0.5 * dt ? newer : older;
    case Interp::Kind::linear: {
        const double w = since_newer / dt;
        return static_cast<float>((1.0 - w) * newer + w * older);
    }
    case Interp::Kind::expdecay:
        return static_cast<float>(older * std::exp(-since_older / interp.tau));
    case Interp::Kind::expratedecay:
        return static_cast<float>(older * std::exp(-since_older / interp.tau) / interp.tau);
    }
    return older;
}

RecordTensor::RecordTensor(Shape slice_shape, double dt, double duration, std::size_t window)
    : slice_shape_(std::move(slice_shape)),
      slice_size_(numel(slice_shape_)),
      dt_(dt),
      duration_(duration),
      window_(window),
      storage_(window * slice_size_, 0.0f)
{
}

RecordTensor RecordTensor::create(Shape slice_shape, double dt, double duration, bool inclusive)
{
    check_sizing(slice_shape, dt, duration);
    const auto steps = static_cast<std::size_t>(snapped_floor(duration / dt));
    const std::size_t window = std::max<std::size_t>(1, inclusive ? steps + 1 : steps);
    return RecordTensor(std::move(slice_shape), dt, duration, window);
}

RecordTensor RecordTensor::covering(Shape slice_shape, double dt, double duration)
{
    check_sizing(slice_shape, dt, duration);
    const auto window = static_cast<std::size_t>(snapped_ceil(1.0 + duration / dt));
    return RecordTensor(std::move(slice_shape), dt, duration, window);
}

void RecordTensor::push(const Tensor& obs)
{
    if (obs.shape() != slice_shape_) {
        throw std::invalid_argument("record push expects shape " + to_string(slice_shape_) + ", got " +
                                    to_string(obs.shape()));
    }
    std::copy(obs.values().begin(), obs.values().end(), storage_.begin() + pointer_ * slice_size_);
    pointer_ = (pointer_ + 1) % window_;
    observed_ = std::min(observed_ + 1, window_);
}

Tensor RecordTensor::at_age(std::size_t age) const
{
    if (age >= window_) throw std::out_of_range("record age beyond window");
    const auto first = storage_.begin() + static_cast<std::ptrdiff_t>(slot(age) * slice_size_);
    return Tensor(slice_shape_, std::vector<float>(first, first + static_cast<std::ptrdiff_t>(slice_size_)));
}

RecordTensor::Bracket RecordTensor::bracket(double delay) const
{
    if (!(delay >= -grid_tolerance * dt_) || delay > duration_ + grid_tolerance * dt_) {
        throw std::out_of_range("record time " + std::to_string(delay) + " outside [0, " +
                                std::to_string(duration_) + "]");
    }
    const double steps = std::max(0.0, delay / dt_);
    double rounded = 0.0;
    const std::size_t last = window_ - 1;
    if (near_integer(steps, rounded)) {
        const auto k = std::min(static_cast<std::size_t>(rounded), last);
        return {k, k, 0.0, true};
    }
    const auto k0 = static_cast<std::size_t>(std::floor(steps));
    if (k0 >= last) return {last, last, 0.0, true};
    return {k0, k0 + 1, delay - static_cast<double>(k0) * dt_, false};
}

Tensor RecordTensor::select(const Tensor& delays, Interp interp) const
{
    if (observed_ == 0) throw std::logic_error("record select before any observation");
    if (delays.rank() != slice_shape_.size() + 1) {
        throw std::invalid_argument("record selector must have shape slice-shape x D, got " +
                                    to_string(delays.shape()));
    }
    Shape out_shape = slice_shape_;
    out_shape.push_back(delays.shape().back());
    const Tensor expanded = delays.expand(out_shape);

    Tensor out(out_shape);
    const std::size_t depth = out_shape.back();
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const std::size_t elem = flat / depth;
        const Bracket br = bracket(expanded[flat]);
        const float newer = storage_[slot(br.newer) * slice_size_ + elem];
        if (br.on_grid) {
            out[flat] = newer;
            continue;
        }
        const float older = storage_[slot(br.older) * slice_size_ + elem];
        out[flat] = interpolate(interp, newer, older, br.since_newer, dt_);
    }
    return out;
}

void RecordTensor::insert(double time, const Tensor& value, Interp extrap)
{
    if (value.shape() != slice_shape_) {
        throw std::invalid_argument("record insert expects shape " + to_string(slice_shape_) + ", got " +
                                    to_string(value.shape()));
    }
    const Bracket br = bracket(time);
    float* newer = storage_.data() + slot(br.newer) * slice_size_;
    float* older = storage_.data() + slot(br.older) * slice_size_;
    if (br.on_grid) {
        std::copy(value.values().begin(), value.values().end(), newer);
        return;
    }

    const double since_older = dt_ - br.since_newer;
    for (std::size_t i = 0; i < slice_size_; ++i) {
        const float v = value[i];
        switch (extrap.kind) {
        case Interp::Kind::previous:
            older[i] = v;
            break;
        case Interp::Kind::nearest:
            (br.since_newer < 0.5 * dt_ ? newer : older)[i] = v;
            break;
        case Interp::Kind::linear:
            newer[i] = v;
            older[i] = v;
            break;
        case Interp::Kind::expdecay:
            older[i] = static_cast<float>(v * std::exp(since_older / extrap.tau));
            break;
        case Interp::Kind::expratedecay:
            older[i] = static_cast<float>(v * extrap.tau * std::exp(since_older / extrap.tau));
            break;
        }
    }
}

void RecordTensor::reset()
{
    std::fill(storage_.begin(), storage_.end(), 0.0f);
    pointer_ = 0;
    observed_ = 0;
}

}  // namespace snn
