#include "snn/connections.hpp"

#include <algorithm>
#include <stdexcept>

namespace snn {

namespace {

Shape batched(std::size_t batch, const Shape& shape)
{
    Shape out{batch};
    out.insert(out.end(), shape.begin(), shape.end());
    return out;
}

// Accepts batch x shape or anything with the same batch and element count.
Tensor as_batched(const Tensor& t, std::size_t batch, const Shape& shape, const char* what)
{
    if (t.rank() == 0 || t.dim(0) != batch || t.size() != batch * numel(shape)) {
        throw std::invalid_argument(std::string(what) + " must have shape " + to_string(batched(batch, shape)) +
                                    ", got " + to_string(t.shape()));
    }
    return t.reshaped(batched(batch, shape));
}

}  // namespace

Connection::Connection(Shape input_shape, Shape output_shape, Shape synapse_shape, Shape weight_shape,
                       std::size_t batch, double dt, std::optional<double> delay_max,
                       const SynapseBlueprint& synapse)
    : input_shape_(std::move(input_shape)),
      output_shape_(std::move(output_shape)),
      batch_(batch),
      dt_(dt),
      t_max_(delay_max.value_or(0.0)),
      weight_(std::move(weight_shape), 0.0f),
      synapse_(synapse.build(synapse_shape, dt, delay_max.value_or(0.0), batch))
{
    if (delay_max) delay_ = Tensor(weight_.shape(), 0.0f);
}

Shape Connection::batched_output_shape() const { return batched(batch_, output_shape_); }

Tensor Connection::forward(const Tensor& spikes, std::span<const Tensor> injected)
{
    const Shape& slice = synapse_.slice_shape();
    const Shape inner(slice.begin() + 1, slice.end());
    const Tensor flat = as_batched(spikes, batch_, inner, "connection input");

    std::vector<Tensor> inj;
    inj.reserve(injected.size());
    for (const Tensor& t : injected) inj.push_back(as_batched(t, batch_, inner, "injected current"));

    const Tensor current = synapse_.step(flat, inj);
    if (!delay_) return map(current);

    Tensor delayed = synapse_.history(selector()).currents;
    // Injected current bypasses the record and arrives undelayed.
    const std::size_t depth = delayed.shape().back();
    for (const Tensor& t : inj)
        for (std::size_t k = 0; k < t.size(); ++k)
            for (std::size_t d = 0; d < depth; ++d) delayed[k * depth + d] += t[k];
    return map_delayed(delayed);
}

Tensor Connection::synspike() const { return synapse_.history(selector()).spikes; }

Tensor Connection::syncurrent() const { return synapse_.history(selector()).currents; }

void Connection::set_weight(Tensor weight)
{
    if (weight.shape() != weight_.shape()) {
        throw std::invalid_argument("weight must have shape " + to_string(weight_.shape()) + ", got " +
                                    to_string(weight.shape()));
    }
    constrain(weight);
    weight_ = std::move(weight);
}

const Tensor& Connection::delay() const
{
    if (!delay_) throw std::logic_error("connection has no learned delays");
    return *delay_;
}

void Connection::set_delay(Tensor delay)
{
    if (!delay_) throw std::logic_error("connection has no learned delays");
    if (delay.shape() != delay_->shape()) {
        throw std::invalid_argument("delay must have shape " + to_string(delay_->shape()) + ", got " +
                                    to_string(delay.shape()));
    }
    const auto hi = static_cast<float>(t_max_);
    for (float& d : delay.values()) d = std::clamp(d, 0.0f, hi);
    delay_ = std::move(delay);
}

void Connection::add_updater(Reduction reduction)
{
    weight_acc_ = std::make_unique<Accumulator>(weight_.shape(), reduction);
    if (delay_) {
        delay_acc_ = std::make_unique<Accumulator>(delay_->shape(), reduction);
        delay_acc_->set_full(FullBounding{HalfBounding::sharp(static_cast<float>(t_max_)), HalfBounding::sharp(0.0f)});
    }
}

Accumulator& Connection::weight_updater()
{
    if (!weight_acc_) throw std::logic_error("connection has no updater");
    return *weight_acc_;
}

Accumulator& Connection::delay_updater()
{
    if (!delay_acc_) throw std::logic_error("connection has no delay updater");
    return *delay_acc_;
}

void Connection::update()
{
    if (weight_acc_ && weight_acc_->pending()) set_weight(weight_acc_->apply(weight_));
    if (delay_acc_ && delay_acc_->pending()) set_delay(delay_acc_->apply(*delay_));
}

void Connection::reset() { synapse_.reset(); }

// ---------------------------------------------------------------- LinearDense

LinearDense::LinearDense(Shape input_shape, std::size_t out_features, std::size_t batch, double dt,
                         std::optional<double> delay_max, const SynapseBlueprint& synapse)
    : Connection(input_shape, {out_features}, {numel(input_shape)}, {out_features, numel(input_shape)}, batch, dt,
                 delay_max, synapse),
      in_(numel(input_shape)),
      out_(out_features)
{
    if (in_ == 0 || out_ == 0) throw std::invalid_argument("linear connection needs nonzero features");
}

Tensor LinearDense::selector() const
{
    Tensor sel({1, in_, out_}, 0.0f);
    if (delay_) {
        for (std::size_t o = 0; o < out_; ++o)
            for (std::size_t i = 0; i < in_; ++i) sel[i * out_ + o] = (*delay_)[o * in_ + i];
    }
    return sel;
}

Tensor LinearDense::map(const Tensor& current) const
{
    Tensor out({batch_, out_}, 0.0f);
    std::vector<std::size_t> active;
    active.reserve(in_);
    for (std::size_t b = 0; b < batch_; ++b) {
        const float* c = current.data() + b * in_;
        active.clear();
        for (std::size_t i = 0; i < in_; ++i)
            if (c[i] != 0.0f) active.push_back(i);
        if (active.empty()) continue;
        for (std::size_t o = 0; o < out_; ++o) {
            const float* w = weight_.data() + o * in_;
            float acc = 0.0f;
            for (std::size_t i : active) acc += w[i] * c[i];
            out[b * out_ + o] = acc;
        }
    }
    return out;
}

Tensor LinearDense::map_delayed(const Tensor& syncurrent) const
{
    Tensor out({batch_, out_}, 0.0f);
    for (std::size_t b = 0; b < batch_; ++b) {
        const float* c = syncurrent.data() + b * in_ * out_;
        for (std::size_t o = 0; o < out_; ++o) {
            const float* w = weight_.data() + o * in_;
            float acc = 0.0f;
            for (std::size_t i = 0; i < in_; ++i) acc += w[i] * c[i * out_ + o];
            out[b * out_ + o] = acc;
        }
    }
    return out;
}

Tensor LinearDense::postsyn_receptive(const Tensor& output) const
{
    return as_batched(output, batch_, {out_}, "postsynaptic values").reshaped({batch_, out_, 1, 1});
}

Tensor LinearDense::presyn_receptive(const Tensor& input, float) const
{
    if (input.rank() == 3 && input.shape() == Shape{batch_, in_, out_}) {
        return move_axis_last(input, 1).reshaped({batch_, out_, in_, 1});
    }
    return as_batched(input, batch_, {in_}, "presynaptic values").reshaped({batch_, 1, in_, 1});
}

LinearDirect::LinearDirect(std::size_t features, std::size_t batch, double dt, std::optional<double> delay_max,
                           const SynapseBlueprint& synapse)
    : LinearDense({features}, features, batch, dt, delay_max, synapse)
{
}

void LinearDirect::constrain(Tensor& weight) const
{
    for (std::size_t o = 0; o < out_; ++o)
        for (std::size_t i = 0; i < in_; ++i)
            if (o != i) weight[o * in_ + i] = 0.0f;
}

LinearLateral::LinearLateral(std::size_t features, std::size_t batch, double dt, std::optional<double> delay_max,
                             const SynapseBlueprint& synapse)
    : LinearDense({features}, features, batch, dt, delay_max, synapse)
{
}

void LinearLateral::constrain(Tensor& weight) const
{
    for (std::size_t n = 0; n < out_; ++n) weight[n * in_ + n] = 0.0f;
}

// --------------------------------------------------------------------- Conv2D

std::size_t conv_output_size(std::size_t extent, std::size_t padding, std::size_t dilation, std::size_t kernel,
                             std::size_t stride)
{
    if (extent == 0 || dilation == 0 || kernel == 0 || stride == 0)
        throw std::invalid_argument("convolution extent, dilation, kernel and stride must be positive");
    const std::size_t span = dilation * (kernel - 1) + 1;
    const std::size_t padded = extent + 2 * padding;
    if (padded < span) {
        throw std::invalid_argument("convolution kernel span " + std::to_string(span) + " exceeds padded extent " +
                                    std::to_string(padded));
    }
    return (padded - span) / stride + 1;
}

Conv2D::Conv2D(Shape input_shape, std::size_t filters, Conv2DGeometry geometry, std::size_t batch, double dt,
               std::optional<double> delay_max, const SynapseBlueprint& synapse)
    : Connection(input_shape,
                 {filters,
                  conv_output_size(input_shape.at(1), geometry.padding[0], geometry.dilation[0], geometry.kernel[0],
                                   geometry.stride[0]),
                  conv_output_size(input_shape.at(2), geometry.padding[1], geometry.dilation[1], geometry.kernel[1],
                                   geometry.stride[1])},
                 input_shape, {filters, input_shape.at(0), geometry.kernel[0], geometry.kernel[1]}, batch, dt,
                 delay_max, synapse),
      filters_(filters),
      channels_(input_shape.at(0)),
      in_h_(input_shape.at(1)),
      in_w_(input_shape.at(2)),
      geo_(geometry),
      out_h_(output_shape_[1]),
      out_w_(output_shape_[2])
{
    if (input_shape.size() != 3) throw std::invalid_argument("convolution input must be C x H x W");
    if (filters_ == 0 || channels_ == 0) throw std::invalid_argument("convolution needs filters and channels");

    const std::size_t kh = geo_.kernel[0];
    const std::size_t kw = geo_.kernel[1];
    const std::size_t blocks = out_h_ * out_w_;
    source_.assign(channels_ * kh * kw * blocks, -1);
    for (std::size_t c = 0; c < channels_; ++c)
        for (std::size_t i = 0; i < kh; ++i)
            for (std::size_t j = 0; j < kw; ++j)
                for (std::size_t y = 0; y < out_h_; ++y)
                    for (std::size_t x = 0; x < out_w_; ++x) {
                        const auto h = static_cast<std::ptrdiff_t>(y * geo_.stride[0] + i * geo_.dilation[0]) -
                                       static_cast<std::ptrdiff_t>(geo_.padding[0]);
                        const auto w = static_cast<std::ptrdiff_t>(x * geo_.stride[1] + j * geo_.dilation[1]) -
                                       static_cast<std::ptrdiff_t>(geo_.padding[1]);
                        const std::size_t row = (c * kh + i) * kw + j;
                        if (h >= 0 && w >= 0 && h < static_cast<std::ptrdiff_t>(in_h_) &&
                            w < static_cast<std::ptrdiff_t>(in_w_)) {
                            source_[row * blocks + y * out_w_ + x] =
                                (static_cast<std::ptrdiff_t>(c * in_h_) + h) * static_cast<std::ptrdiff_t>(in_w_) + w;
                        }
                    }
}

Tensor Conv2D::selector() const
{
    const std::size_t kk = geo_.kernel[0] * geo_.kernel[1];
    Tensor sel({1, channels_, 1, 1, filters_ * kk}, 0.0f);
    if (delay_) {
        for (std::size_t f = 0; f < filters_; ++f)
            for (std::size_t c = 0; c < channels_; ++c)
                for (std::size_t k = 0; k < kk; ++k)
                    sel[c * filters_ * kk + f * kk + k] = (*delay_)[(f * channels_ + c) * kk + k];
    }
    return sel;
}

Tensor Conv2D::unfold(const Tensor& input, float fill) const
{
    const Tensor x = as_batched(input, batch_, input_shape_, "convolution input");
    const std::size_t rows = channels_ * geo_.kernel[0] * geo_.kernel[1];
    const std::size_t blocks = out_h_ * out_w_;
    const std::size_t image = channels_ * in_h_ * in_w_;
    Tensor out({batch_, rows, blocks});
    for (std::size_t b = 0; b < batch_; ++b) {
        const float* src = x.data() + b * image;
        float* dst = out.data() + b * rows * blocks;
        for (std::size_t k = 0; k < rows * blocks; ++k) dst[k] = source_[k] < 0 ? fill : src[source_[k]];
    }
    return out;
}

Tensor Conv2D::unfold_delayed(const Tensor& selected, float fill) const
{
    const std::size_t kk = geo_.kernel[0] * geo_.kernel[1];
    const std::size_t depth = filters_ * kk;
    const std::size_t rows = channels_ * kk;
    const std::size_t blocks = out_h_ * out_w_;
    const std::size_t image = channels_ * in_h_ * in_w_;
    Tensor out({batch_, filters_, rows, blocks});
    for (std::size_t b = 0; b < batch_; ++b)
        for (std::size_t f = 0; f < filters_; ++f)
            for (std::size_t r = 0; r < rows; ++r) {
                const std::size_t k = r % kk;
                float* dst = out.data() + ((b * filters_ + f) * rows + r) * blocks;
                for (std::size_t l = 0; l < blocks; ++l) {
                    const std::ptrdiff_t s = source_[r * blocks + l];
                    dst[l] = s < 0 ? fill : selected[(b * image + static_cast<std::size_t>(s)) * depth + f * kk + k];
                }
            }
    return out;
}

Tensor Conv2D::map(const Tensor& current) const
{
    const Tensor u = unfold(current);
    const std::size_t rows = channels_ * geo_.kernel[0] * geo_.kernel[1];
    const std::size_t blocks = out_h_ * out_w_;
    Tensor out(batched_output_shape(), 0.0f);
    for (std::size_t b = 0; b < batch_; ++b)
        for (std::size_t f = 0; f < filters_; ++f) {
            float* dst = out.data() + (b * filters_ + f) * blocks;
            for (std::size_t r = 0; r < rows; ++r) {
                const float w = weight_[f * rows + r];
                const float* src = u.data() + (b * rows + r) * blocks;
                for (std::size_t l = 0; l < blocks; ++l) dst[l] += w * src[l];
            }
        }
    return out;
}

Tensor Conv2D::map_delayed(const Tensor& syncurrent) const
{
    const Tensor u = unfold_delayed(syncurrent, 0.0f);
    const std::size_t rows = channels_ * geo_.kernel[0] * geo_.kernel[1];
    const std::size_t blocks = out_h_ * out_w_;
    Tensor out(batched_output_shape(), 0.0f);
    for (std::size_t b = 0; b < batch_; ++b)
        for (std::size_t f = 0; f < filters_; ++f) {
            float* dst = out.data() + (b * filters_ + f) * blocks;
            for (std::size_t r = 0; r < rows; ++r) {
                const float w = weight_[f * rows + r];
                const float* src = u.data() + ((b * filters_ + f) * rows + r) * blocks;
                for (std::size_t l = 0; l < blocks; ++l) dst[l] += w * src[l];
            }
        }
    return out;
}

Tensor Conv2D::postsyn_receptive(const Tensor& output) const
{
    return as_batched(output, batch_, output_shape_, "postsynaptic values")
        .reshaped({batch_, filters_, 1, 1, 1, out_h_ * out_w_});
}

Tensor Conv2D::presyn_receptive(const Tensor& input, float fill) const
{
    const std::size_t kh = geo_.kernel[0];
    const std::size_t kw = geo_.kernel[1];
    const std::size_t blocks = out_h_ * out_w_;
    const Shape delayed_shape{batch_, channels_, in_h_, in_w_, filters_ * kh * kw};
    if (input.shape() == delayed_shape) {
        return unfold_delayed(input, fill).reshaped({batch_, filters_, channels_, kh, kw, blocks});
    }
    return unfold(input, fill).reshaped({batch_, 1, channels_, kh, kw, blocks});
}

// ------------------------------------------------------------------ receptive

Tensor parameter_view(const Tensor& param)
{
    Shape shape{1};
    shape.insert(shape.end(), param.shape().begin(), param.shape().end());
    shape.push_back(1);
    return param.reshaped(std::move(shape));
}

Tensor receptive_product(const Tensor& post_view, const Tensor& pre_view)
{
    return contract_last(post_view, pre_view);
}

}  // namespace snn
