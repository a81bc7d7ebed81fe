#pragma once

#include "snn/synapses.hpp"
#include "snn/tensor.hpp"
#include "snn/updaters.hpp"

#include <array>
#include <memory>
#include <optional>
#include <span>

namespace snn {

// Trainable mapping from presynaptic spikes to postsynaptic currents.
//
// Each connection owns its synapse, built from a blueprint with the
// connection's input shape, step length, maximum delay and batch size. When
// delays are enabled every weight element has its own delay in [0, t_max];
// the selector reshapes those delays for selection from the synapse record.
//
// Training rules see a connection only through the receptive views: a
// parameter of shape P1 x ... x Pn pairs with outputs through a trailing
// receptive axis R, so post and pre views are B x P1 x ... x Pn x R (with
// singleton axes where a side broadcasts).
class Connection {
public:
    virtual ~Connection() = default;
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;

    // `spikes` has shape batch x input shape. Steps the synapse exactly once.
    Tensor forward(const Tensor& spikes, std::span<const Tensor> injected = {});

    // Learned delays reshaped for selection; zeros when delays are disabled.
    virtual Tensor selector() const = 0;

    virtual Tensor postsyn_receptive(const Tensor& output) const = 0;
    // Accepts either undelayed (synapse-shaped) or delayed (selector-shaped)
    // presynaptic values. `fill` stands in for values outside the input
    // (convolution padding).
    virtual Tensor presyn_receptive(const Tensor& input, float fill = 0.0f) const = 0;

    // Synapse spikes/currents shifted by the learned delays.
    Tensor synspike() const;
    Tensor syncurrent() const;

    const Shape& input_shape() const noexcept { return input_shape_; }
    const Shape& output_shape() const noexcept { return output_shape_; }
    Shape batched_output_shape() const;
    std::size_t batch() const noexcept { return batch_; }
    double dt() const noexcept { return dt_; }
    double t_max() const noexcept { return t_max_; }

    const Tensor& weight() const noexcept { return weight_; }
    void set_weight(Tensor weight);

    bool delayed() const noexcept { return delay_.has_value(); }
    const Tensor& delay() const;
    // Clamped onto [0, t_max].
    void set_delay(Tensor delay);

    DeltaSynapse& synapse() noexcept { return synapse_; }
    const DeltaSynapse& synapse() const noexcept { return synapse_; }

    // Attaches accumulators for the weight and (when delayed) the delay. The
    // delay accumulator is sharply bounded to [0, t_max].
    void add_updater(Reduction reduction = Reduction::mean);
    bool has_updater() const noexcept { return weight_acc_ != nullptr; }
    Accumulator& weight_updater();
    Accumulator& delay_updater();

    // Applies every staged update.
    void update();

    // Clears the synapse history.
    void reset();

protected:
    Connection(Shape input_shape, Shape output_shape, Shape synapse_shape, Shape weight_shape, std::size_t batch,
               double dt, std::optional<double> delay_max, const SynapseBlueprint& synapse);

    // Undelayed synaptic current (synapse-shaped) to batch x output.
    virtual Tensor map(const Tensor& current) const = 0;
    // Delayed synaptic current (selection-shaped) to batch x output.
    virtual Tensor map_delayed(const Tensor& syncurrent) const = 0;
    // Forces structurally absent weights to zero.
    virtual void constrain(Tensor& weight) const { (void)weight; }

    Shape input_shape_;
    Shape output_shape_;
    std::size_t batch_;
    double dt_;
    double t_max_;
    Tensor weight_;
    std::optional<Tensor> delay_;
    DeltaSynapse synapse_;
    std::unique_ptr<Accumulator> weight_acc_;
    std::unique_ptr<Accumulator> delay_acc_;
};

// All-to-all linear map: weight and delay are N_out x N_in. Inputs of any
// shape are flattened to N_in.
class LinearDense : public Connection {
public:
    LinearDense(Shape input_shape, std::size_t out_features, std::size_t batch, double dt,
                std::optional<double> delay_max = std::nullopt,
                const SynapseBlueprint& synapse = SynapseBlueprint::delta());

    std::size_t in_features() const noexcept { return in_; }
    std::size_t out_features() const noexcept { return out_; }

    // 1 x N_in x N_out.
    Tensor selector() const override;
    // B x N_out  ->  B x N_out x 1 x 1.
    Tensor postsyn_receptive(const Tensor& output) const override;
    // B x N_in -> B x 1 x N_in x 1;  B x N_in x N_out -> B x N_out x N_in x 1.
    Tensor presyn_receptive(const Tensor& input, float fill = 0.0f) const override;

protected:
    Tensor map(const Tensor& current) const override;
    Tensor map_delayed(const Tensor& syncurrent) const override;

    std::size_t in_;
    std::size_t out_;
};

// One-to-one map: only the diagonal of the N x N weight is active.
class LinearDirect : public LinearDense {
public:
    LinearDirect(std::size_t features, std::size_t batch, double dt, std::optional<double> delay_max = std::nullopt,
                 const SynapseBlueprint& synapse = SynapseBlueprint::delta());

protected:
    void constrain(Tensor& weight) const override;
};

// All-to-all except self: the diagonal of the N x N weight is held at zero.
class LinearLateral : public LinearDense {
public:
    LinearLateral(std::size_t features, std::size_t batch, double dt, std::optional<double> delay_max = std::nullopt,
                  const SynapseBlueprint& synapse = SynapseBlueprint::delta());

protected:
    void constrain(Tensor& weight) const override;
};

// floor((d + 2p - l(k - 1) - 1) / s) + 1; throws if the result would be < 1.
std::size_t conv_output_size(std::size_t extent, std::size_t padding, std::size_t dilation, std::size_t kernel,
                             std::size_t stride);

struct Conv2DGeometry {
    std::array<std::size_t, 2> kernel{1, 1};
    std::array<std::size_t, 2> stride{1, 1};
    std::array<std::size_t, 2> padding{0, 0};
    std::array<std::size_t, 2> dilation{1, 1};
};

// 2-D convolution over C x H x W inputs with an F x C x kH x kW kernel.
// Padding contributes `fill` values (no spikes, hence zero current).
class Conv2D : public Connection {
public:
    Conv2D(Shape input_shape, std::size_t filters, Conv2DGeometry geometry, std::size_t batch, double dt,
           std::optional<double> delay_max = std::nullopt, const SynapseBlueprint& synapse = SynapseBlueprint::delta());

    std::size_t filters() const noexcept { return filters_; }
    std::size_t channels() const noexcept { return channels_; }
    std::size_t blocks() const noexcept { return out_h_ * out_w_; }
    const Conv2DGeometry& geometry() const noexcept { return geo_; }

    // 1 x C x 1 x 1 x (F*kH*kW): every input site selects one delay per
    // (filter, kernel offset) it could feed.
    Tensor selector() const override;
    // B x F x LH x LW  ->  B x F x 1 x 1 x 1 x L.
    Tensor postsyn_receptive(const Tensor& output) const override;
    // B x C x H x W -> B x 1 x C x kH x kW x L;
    // B x C x H x W x (F*kH*kW) -> B x F x C x kH x kW x L.
    Tensor presyn_receptive(const Tensor& input, float fill = 0.0f) const override;

    // B x C x H x W  ->  B x (C*kH*kW) x L.
    Tensor unfold(const Tensor& input, float fill = 0.0f) const;

protected:
    Tensor map(const Tensor& current) const override;
    Tensor map_delayed(const Tensor& syncurrent) const override;

private:
    Tensor unfold_delayed(const Tensor& selected, float fill) const;

    std::size_t filters_;
    std::size_t channels_;
    std::size_t in_h_;
    std::size_t in_w_;
    Conv2DGeometry geo_;
    std::size_t out_h_;
    std::size_t out_w_;
    // For every (c, kh, kw, l): flat C x H x W source index, or -1 in padding.
    std::vector<std::ptrdiff_t> source_;
};

// 1 x P1 x ... x Pn x 1 view of a parameter-shaped tensor.
Tensor parameter_view(const Tensor& param);

// "b ... r, b ... r -> b ...": broadcast product summed over the receptive axis.
Tensor receptive_product(const Tensor& post_view, const Tensor& pre_view);

}  // namespace snn
