#pragma once

#include "snn/tensor.hpp"

#include <optional>
#include <vector>

namespace snn {

// One side of a parameter-dependence rule. An upper rule scales potentiation
// by the headroom to `limit`, a lower rule scales depression by the distance
// above `limit`.
struct HalfBounding {
    enum class Kind { power_law, sharp };

    Kind kind = Kind::sharp;
    float limit = 0.0f;
    float power = 0.0f;  // mu, power_law only

    static HalfBounding power_law(float limit, float power);
    static HalfBounding sharp(float limit) { return {Kind::sharp, limit, 0.0f}; }

    // Multiplier for an upper-bound rule at parameter value w.
    float upper_scale(float w) const noexcept;
    // Multiplier for a lower-bound rule at parameter value w.
    float lower_scale(float w) const noexcept;
};

struct FullBounding {
    HalfBounding upper;
    HalfBounding lower;
};

enum class Reduction { mean, sum };
enum class UpdateSign { pos, neg };

// Staged potentiative/depressive updates for one parameter tensor.
//
// Both lists hold nonnegative tensors shaped like the parameter. Applying
// reduces each list, scales the reductions with the bounding rules and adds
// S(pos) - S(neg). A sharp bound also clips the result onto its limit, so a
// single large step cannot leave the permitted range.
class Accumulator {
public:
    explicit Accumulator(Shape param_shape, Reduction reduction = Reduction::mean);

    void accumulate(Tensor update, UpdateSign sign);
    void accumulate(Tensor pos, Tensor neg);

    void set_upper(std::optional<HalfBounding> bound) { upper_ = bound; }
    void set_lower(std::optional<HalfBounding> bound) { lower_ = bound; }
    void set_full(std::optional<FullBounding> bound) { full_ = bound; }
    void set_reduction(Reduction r) { reduction_ = r; }

    Reduction reduction() const noexcept { return reduction_; }
    const std::optional<HalfBounding>& upper() const noexcept { return upper_; }
    const std::optional<HalfBounding>& lower() const noexcept { return lower_; }
    const std::optional<FullBounding>& full() const noexcept { return full_; }
    const Shape& param_shape() const noexcept { return shape_; }

    std::size_t pos_count() const noexcept { return pos_.size(); }
    std::size_t neg_count() const noexcept { return neg_.size(); }
    bool pending() const noexcept { return !pos_.empty() || !neg_.empty(); }

    // Returns the updated parameter and clears the staged lists.
    Tensor apply(const Tensor& param);

    void clear();

private:
    std::optional<Tensor> reduce(std::vector<Tensor>& staged) const;

    Shape shape_;
    Reduction reduction_;
    std::optional<HalfBounding> upper_;
    std::optional<HalfBounding> lower_;
    std::optional<FullBounding> full_;
    std::vector<Tensor> pos_;
    std::vector<Tensor> neg_;
};

}  // namespace snn
