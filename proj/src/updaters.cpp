#include "snn/updaters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snn {

HalfBounding HalfBounding::power_law(float limit, float power)
{
    if (!(power >= 0.0f)) throw std::invalid_argument("power-law exponent must be nonnegative");
    return {Kind::power_law, limit, power};
}

namespace {

// No headroom means no movement, for every exponent (0^0 included).
float power_scale(float room, float power) noexcept
{
    if (!(room > 0.0f)) return 0.0f;
    return power == 0.0f ? 1.0f : std::pow(room, power);
}

}  // namespace

float HalfBounding::upper_scale(float w) const noexcept
{
    if (kind == Kind::sharp) return w >= limit ? 0.0f : 1.0f;
    return power_scale(limit - w, power);
}

float HalfBounding::lower_scale(float w) const noexcept
{
    if (kind == Kind::sharp) return w <= limit ? 0.0f : 1.0f;
    return power_scale(w - limit, power);
}

Accumulator::Accumulator(Shape param_shape, Reduction reduction)
    : shape_(std::move(param_shape)), reduction_(reduction)
{
}

void Accumulator::accumulate(Tensor update, UpdateSign sign)
{
    if (update.shape() != shape_) {
        throw std::invalid_argument("update shape " + to_string(update.shape()) + " differs from parameter shape " +
                                    to_string(shape_));
    }
    bool valid = true;
    for (float x : update.values()) valid &= x >= 0.0f;
    if (!valid) throw std::invalid_argument("staged updates must be nonnegative");
    (sign == UpdateSign::pos ? pos_ : neg_).push_back(std::move(update));
}

void Accumulator::accumulate(Tensor pos, Tensor neg)
{
    accumulate(std::move(pos), UpdateSign::pos);
    accumulate(std::move(neg), UpdateSign::neg);
}

std::optional<Tensor> Accumulator::reduce(std::vector<Tensor>& staged) const
{
    if (staged.empty()) return std::nullopt;
    Tensor out = std::move(staged.front());
    for (std::size_t u = 1; u < staged.size(); ++u)
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += staged[u][k];
    if (reduction_ == Reduction::mean && staged.size() > 1) {
        const float scale = 1.0f / static_cast<float>(staged.size());
        for (float& x : out.values()) x *= scale;
    }
    return out;
}

Tensor Accumulator::apply(const Tensor& param)
{
    if (full_ && (upper_ || lower_)) throw std::logic_error("full and half bounding are mutually exclusive");
    if (param.shape() != shape_) throw std::invalid_argument("parameter shape differs from accumulator shape");

    const std::optional<HalfBounding> upper = full_ ? std::optional(full_->upper) : upper_;
    const std::optional<HalfBounding> lower = full_ ? std::optional(full_->lower) : lower_;

    const auto dpos = reduce(pos_);
    const auto dneg = reduce(neg_);
    clear();

    const std::size_t n = param.size();
    const float* w = param.data();
    // Scale each reduction in place, dispatching on the bound once per tensor.
    auto scale = [&](Tensor& d, const std::optional<HalfBounding>& bound, bool is_upper) {
        if (!bound) return;
        float* x = d.data();
        const float limit = bound->limit;
        if (bound->kind == HalfBounding::Kind::sharp) {
            if (is_upper)
                for (std::size_t k = 0; k < n; ++k) x[k] = w[k] >= limit ? 0.0f : x[k];
            else
                for (std::size_t k = 0; k < n; ++k) x[k] = w[k] <= limit ? 0.0f : x[k];
        } else {
            for (std::size_t k = 0; k < n; ++k) x[k] *= is_upper ? bound->upper_scale(w[k]) : bound->lower_scale(w[k]);
        }
    };
    Tensor dp = dpos ? std::move(*dpos) : Tensor(shape_);
    Tensor dn = dneg ? std::move(*dneg) : Tensor(shape_);
    if (dpos) scale(dp, upper, true);
    if (dneg) scale(dn, lower, false);

    const float hi = upper && upper->kind == HalfBounding::Kind::sharp ? upper->limit
                                                                      : std::numeric_limits<float>::infinity();
    const float lo = lower && lower->kind == HalfBounding::Kind::sharp ? lower->limit
                                                                      : -std::numeric_limits<float>::infinity();
    Tensor out(shape_);
    float* o = out.data();
    const float* a = dp.data();
    const float* b = dn.data();
    for (std::size_t k = 0; k < n; ++k) {
        const float delta = a[k] - b[k];
        float next = w[k] + delta;
        next = delta > 0.0f ? std::min(next, hi) : next;
        next = delta < 0.0f ? std::max(next, lo) : next;
        o[k] = next;
    }
    return out;
}

void Accumulator::clear()
{
    pos_.clear();
    neg_.clear();
}

}  // namespace snn
