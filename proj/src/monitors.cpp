#include "snn/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snn {

Tensor trace_step(const Tensor& trace, const Tensor& obs, double dt, float tau, float amplitude, float target)
{
    if (!trace.same_shape(obs)) throw std::invalid_argument("trace and observation shapes differ");
    if (!(tau > 0.0f)) throw std::invalid_argument("trace time constant must be positive");
    const auto decay = static_cast<float>(std::exp(-dt / static_cast<double>(tau)));
    Tensor out(trace.shape());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = trace[k] * decay + (obs[k] == target ? amplitude : 0.0f);
    return out;
}

Tensor event_step(const Tensor& elapsed, const Tensor& obs, double dt)
{
    if (!elapsed.same_shape(obs)) throw std::invalid_argument("elapsed-time and observation shapes differ");
    const auto step = static_cast<float>(dt);
    Tensor out(elapsed.shape());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = obs[k] != 0.0f ? 0.0f : elapsed[k] + step;
    return out;
}

CumulativeTraceReducer::CumulativeTraceReducer(Shape shape, double dt, float tau, float amplitude, float target,
                                               double duration)
    : dt_(dt),
      tau_(tau),
      amplitude_(amplitude),
      target_(target),
      decay_(0.0f),
      record_(RecordTensor::create(shape, dt, duration, true)),
      value_(shape, 0.0f)
{
    if (!(tau > 0.0f)) throw std::invalid_argument("trace time constant must be positive");
}

void CumulativeTraceReducer::fold(const Tensor& obs)
{
    value_ = trace_step(value_, obs, dt_, tau_, amplitude_, target_);
    record_.push(value_);
}

void CumulativeTraceReducer::reset()
{
    record_.reset();
    value_.fill(0.0f);
}

EventReducer::EventReducer(Shape shape, double dt, Initial initial, double duration)
    : dt_(dt), initial_(initial), record_(RecordTensor::create(shape, dt, duration, true)), value_(shape)
{
    reset();
}

void EventReducer::fold(const Tensor& obs)
{
    value_ = event_step(value_, obs, dt_);
    record_.push(value_);
}

void EventReducer::reset()
{
    record_.reset();
    switch (initial_) {
    case Initial::nan:
        value_.fill(std::numeric_limits<float>::quiet_NaN());
        break;
    case Initial::inf:
        value_.fill(std::numeric_limits<float>::infinity());
        break;
    case Initial::zero:
        value_.fill(0.0f);
        break;
    }
}

Monitor::Monitor(std::function<Tensor()> source, std::unique_ptr<Reducer> reducer)
    : source_(std::move(source)), reducer_(std::move(reducer))
{
    if (!source_ || !reducer_) throw std::invalid_argument("monitor needs a source and a reducer");
}

Monitor& MonitorPool::acquire(const MonitorKey& key, const std::string& owner, const Factory& make)
{
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        it = entries_.emplace(key, Entry{make(), {}}).first;
        order_.push_back(key);
    }
    it->second.owners.insert(owner);
    return *it->second.monitor;
}

void MonitorPool::release(const std::string& owner)
{
    for (auto it = entries_.begin(); it != entries_.end();) {
        it->second.owners.erase(owner);
        if (it->second.owners.empty()) {
            std::erase(order_, it->first);
            it = entries_.erase(it);
        } else {
            ++it;
        }
    }
}

void MonitorPool::fold_all()
{
    for (const MonitorKey& key : order_) entries_.at(key).monitor->fold();
}

std::set<MonitorKey> MonitorPool::keys() const
{
    std::set<MonitorKey> out;
    for (const auto& [key, entry] : entries_) out.insert(key);
    return out;
}

const Monitor* MonitorPool::find(const MonitorKey& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second.monitor.get();
}

}  // namespace snn
