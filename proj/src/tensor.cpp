#include "snn/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace snn {

std::size_t numel(const Shape& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string to_string(const Shape& shape)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ')';
    return os.str();
}

Shape broadcast_shape(const Shape& a, const Shape& b)
{
    const std::size_t n = std::max(a.size(), b.size());
    Shape out(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ea = i < n - a.size() ? 1 : a[i - (n - a.size())];
        const std::size_t eb = i < n - b.size() ? 1 : b[i - (n - b.size())];
        if (ea != eb && ea != 1 && eb != 1) {
            throw std::invalid_argument("shapes " + to_string(a) + " and " + to_string(b) +
                                        " are not broadcast-compatible");
        }
        out[i] = ea == 1 ? eb : ea;
    }
    return out;
}

namespace {

// Row-major strides of `shape` aligned to `target`, zeroed on broadcast axes.
std::vector<std::size_t> broadcast_strides(const Shape& shape, const Shape& target)
{
    std::vector<std::size_t> strides(target.size(), 0);
    const std::size_t offset = target.size() - shape.size();
    std::size_t stride = 1;
    for (std::size_t i = shape.size(); i-- > 0;) {
        strides[offset + i] = shape[i] == 1 ? 0 : stride;
        stride *= shape[i];
    }
    return strides;
}

}  // namespace

Tensor::Tensor(Shape shape, float fill) : shape_(std::move(shape)), data_(numel(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<float> values) : shape_(std::move(shape)), data_(std::move(values))
{
    if (data_.size() != numel(shape_)) {
        throw std::invalid_argument("tensor of shape " + to_string(shape_) + " needs " +
                                    std::to_string(numel(shape_)) + " values, got " +
                                    std::to_string(data_.size()));
    }
}

std::size_t Tensor::flat_index(std::initializer_list<std::size_t> index) const
{
    if (index.size() != shape_.size()) {
        throw std::out_of_range("index rank does not match tensor rank");
    }
    std::size_t flat = 0;
    std::size_t axis = 0;
    for (std::size_t i : index) {
        if (i >= shape_[axis]) throw std::out_of_range("tensor index out of range");
        flat = flat * shape_[axis] + i;
        ++axis;
    }
    return flat;
}

float& Tensor::at(std::initializer_list<std::size_t> index) { return data_[flat_index(index)]; }

float Tensor::at(std::initializer_list<std::size_t> index) const { return data_[flat_index(index)]; }

void Tensor::fill(float value) { std::fill(data_.begin(), data_.end(), value); }

Tensor Tensor::reshaped(Shape shape) const&
{
    Tensor copy = *this;
    return std::move(copy).reshaped(std::move(shape));
}

Tensor Tensor::reshaped(Shape shape) &&
{
    if (numel(shape) != data_.size()) {
        throw std::invalid_argument("cannot reshape " + to_string(shape_) + " to " + to_string(shape));
    }
    shape_ = std::move(shape);
    return std::move(*this);
}

Tensor Tensor::expand(const Shape& shape) const
{
    if (broadcast_shape(shape_, shape) != shape) {
        throw std::invalid_argument("cannot expand " + to_string(shape_) + " to " + to_string(shape));
    }
    if (shape == shape_) return *this;

    Tensor out(shape);
    const auto strides = broadcast_strides(shape_, shape);
    std::vector<std::size_t> idx(shape.size(), 0);
    std::size_t src = 0;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        out.data_[flat] = data_[src];
        for (std::size_t axis = shape.size(); axis-- > 0;) {
            src += strides[axis];
            if (++idx[axis] < shape[axis]) break;
            src -= strides[axis] * shape[axis];
            idx[axis] = 0;
        }
    }
    return out;
}

Tensor mean_over_batch(Tensor t)
{
    if (t.rank() == 0 || t.dim(0) == 0) throw std::invalid_argument("mean_over_batch needs a batch axis");
    const std::size_t batch = t.dim(0);
    Shape inner(t.shape().begin() + 1, t.shape().end());
    if (batch == 1) return std::move(t).reshaped(std::move(inner));
    Tensor out(inner);
    const std::size_t n = out.size();
    for (std::size_t b = 0; b < batch; ++b) {
        const float* row = t.data() + b * n;
        for (std::size_t i = 0; i < n; ++i) out[i] += row[i];
    }
    if (batch > 1) {
        const float scale = 1.0f / static_cast<float>(batch);
        for (float& v : out.values()) v *= scale;
    }
    return out;
}

Tensor move_axis_last(const Tensor& t, std::size_t from)
{
    const Shape& in = t.shape();
    if (from >= in.size()) throw std::out_of_range("move_axis_last: axis out of range");
    if (from + 1 == in.size()) return t;

    const std::size_t outer = numel(Shape(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(from)));
    const std::size_t moved = in[from];
    const std::size_t inner = numel(Shape(in.begin() + static_cast<std::ptrdiff_t>(from) + 1, in.end()));

    Shape out_shape;
    out_shape.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        if (i != from) out_shape.push_back(in[i]);
    out_shape.push_back(moved);

    Tensor out(out_shape);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t m = 0; m < moved; ++m)
            for (std::size_t i = 0; i < inner; ++i)
                out[(o * inner + i) * moved + m] = t[(o * moved + m) * inner + i];
    return out;
}

Tensor contract_last(const Tensor& a, const Tensor& b)
{
    if (a.rank() != b.rank() || a.rank() < 2) {
        throw std::invalid_argument("contract_last needs operands of equal rank >= 2, got " +
                                    to_string(a.shape()) + " and " + to_string(b.shape()));
    }
    const Shape full = broadcast_shape(a.shape(), b.shape());
    const auto sa = broadcast_strides(a.shape(), full);
    const auto sb = broadcast_strides(b.shape(), full);

    const std::size_t rank = full.size();
    const std::size_t receptive = full[rank - 1];
    const std::size_t ra = sa[rank - 1];
    const std::size_t rb = sb[rank - 1];

    Shape out_shape(full.begin(), full.end() - 1);
    Tensor out(out_shape);
    if (out.size() == 0) return out;

    // Innermost output axis is looped explicitly; the rest use an odometer.
    const std::size_t inner_axis = rank - 2;
    const std::size_t inner = full[inner_axis];
    const std::size_t ia = sa[inner_axis];
    const std::size_t ib = sb[inner_axis];

    std::vector<std::size_t> idx(inner_axis, 0);
    std::size_t base_a = 0;
    std::size_t base_b = 0;
    float* dst = out.data();
    const float* pa = a.data();
    const float* pb = b.data();
    const std::size_t blocks = out.size() / inner;

    for (std::size_t blk = 0; blk < blocks; ++blk) {
        if (receptive == 1) {
            const float* xa = pa + base_a;
            const float* xb = pb + base_b;
            for (std::size_t j = 0; j < inner; ++j) dst[j] = xa[j * ia] * xb[j * ib];
        } else {
            for (std::size_t j = 0; j < inner; ++j) {
                const float* xa = pa + base_a + j * ia;
                const float* xb = pb + base_b + j * ib;
                float acc = 0.0f;
                for (std::size_t r = 0; r < receptive; ++r) acc += xa[r * ra] * xb[r * rb];
                dst[j] = acc;
            }
        }
        dst += inner;
        for (std::size_t axis = inner_axis; axis-- > 0;) {
            base_a += sa[axis];
            base_b += sb[axis];
            if (++idx[axis] < full[axis]) break;
            base_a -= sa[axis] * full[axis];
            base_b -= sb[axis] * full[axis];
            idx[axis] = 0;
        }
    }
    return out;
}

}  // namespace snn
