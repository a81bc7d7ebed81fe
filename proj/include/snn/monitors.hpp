#pragma once

#include "snn/record.hpp"
#include "snn/tensor.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace snn {

// Online fold of an observation stream. Reducers keep their folded state in a
// RecordTensor so past values stay addressable.
class Reducer {
public:
    virtual ~Reducer() = default;
    virtual void fold(const Tensor& obs) = 0;
    virtual const Tensor& value() const = 0;
    virtual void reset() = 0;
    virtual const RecordTensor& history() const = 0;
};

// x' = x * exp(-dt/tau) + amplitude * [obs == target]
class CumulativeTraceReducer final : public Reducer {
public:
    CumulativeTraceReducer(Shape shape, double dt, float tau, float amplitude = 1.0f, float target = 1.0f,
                           double duration = 0.0);

    void fold(const Tensor& obs) override;
    const Tensor& value() const override { return value_; }
    void reset() override;
    const RecordTensor& history() const override { return record_; }

    float tau() const noexcept { return tau_; }

private:
    double dt_;
    float tau_;
    float amplitude_;
    float target_;
    float decay_;
    RecordTensor record_;
    Tensor value_;
};

// Milliseconds since the last event (nonzero observation).
class EventReducer final : public Reducer {
public:
    enum class Initial { nan, inf, zero };

    EventReducer(Shape shape, double dt, Initial initial = Initial::nan, double duration = 0.0);

    void fold(const Tensor& obs) override;
    const Tensor& value() const override { return value_; }
    void reset() override;
    const RecordTensor& history() const override { return record_; }

private:
    double dt_;
    Initial initial_;
    RecordTensor record_;
    Tensor value_;
};

// Pure functional forms of the two folds.
Tensor trace_step(const Tensor& trace, const Tensor& obs, double dt, float tau, float amplitude = 1.0f,
                  float target = 1.0f);
Tensor event_step(const Tensor& elapsed, const Tensor& obs, double dt);

// Observes a source (a component attribute or another monitor) and folds it.
class Monitor {
public:
    Monitor(std::function<Tensor()> source, std::unique_ptr<Reducer> reducer);

    void fold() { reducer_->fold(source_()); }
    const Tensor& value() const { return reducer_->value(); }
    Reducer& reducer() noexcept { return *reducer_; }
    const Reducer& reducer() const noexcept { return *reducer_; }

private:
    std::function<Tensor()> source_;
    std::unique_ptr<Reducer> reducer_;
};

struct MonitorKey {
    const void* target = nullptr;
    std::string attribute;
    std::string reducer;

    auto operator<=>(const MonitorKey&) const = default;
};

// Shares one monitor per key between owners; a monitor lives while at least
// one owner holds it.
class MonitorPool {
public:
    using Factory = std::function<std::unique_ptr<Monitor>()>;

    Monitor& acquire(const MonitorKey& key, const std::string& owner, const Factory& make);
    // Drops every hold of `owner`, destroying monitors nobody else holds.
    void release(const std::string& owner);

    // Folds every live monitor once, in creation order.
    void fold_all();

    std::size_t size() const noexcept { return entries_.size(); }
    bool contains(const MonitorKey& key) const { return entries_.contains(key); }
    std::set<MonitorKey> keys() const;
    const Monitor* find(const MonitorKey& key) const;

private:
    struct Entry {
        std::unique_ptr<Monitor> monitor;
        std::set<std::string> owners;
    };
    std::map<MonitorKey, Entry> entries_;
    std::vector<MonitorKey> order_;
};

}  // namespace snn
