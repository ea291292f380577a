#include "dcprot/comms/bus.hpp"

#include "dcprot/common.hpp"

#include <algorithm>
#include <cmath>

namespace dcprot::comms {

void BusConfig::validate() const {
    if (base_latency_s < 0) throw SemanticError("base latency must be >= 0");
    if (jitter_s < 0) throw SemanticError("jitter must be >= 0");
    if (loss_probability < 0 || loss_probability >= 1)
        throw SemanticError("loss probability must be in [0, 1)");
    if (security_overhead_s < 0 || security_overhead_s > 1.8e-3)
        throw SemanticError("security overhead outside the modeled range [0, 1.8 ms]");
}

void RetransmitSchedule::validate() const {
    double prev = 0.0;
    for (double t : burst_intervals_s) {
        if (t <= 0 || t < prev) throw SemanticError("burst intervals must be positive and nondecreasing");
        prev = t;
    }
    if (heartbeat_interval_s <= 0) throw SemanticError("heartbeat interval must be > 0");
}

SimulatedBus::SimulatedBus(BusConfig config, RetransmitSchedule schedule)
    : config_(config), schedule_(std::move(schedule)), rng_(config.rng_seed) {
    config_.validate();
    schedule_.validate();
}

void SimulatedBus::register_participant(const std::string& id) {
    if (!is_registered(id)) participants_.push_back(id);
}

bool SimulatedBus::is_registered(const std::string& id) const {
    return std::find(participants_.begin(), participants_.end(), id) != participants_.end();
}

double SimulatedBus::draw_unit() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::vector<Delivery> SimulatedBus::publish(const std::string& publisher, const GooseFrame& frame,
                                            double now) {
    if (!is_registered(publisher))
        throw SemanticError("publisher '" + publisher + "' is not registered on the bus");

    // Copies to send: the frame itself plus, for state changes, the burst.
    std::vector<std::pair<double, GooseFrame>> copies;
    copies.emplace_back(0.0, frame);
    if (frame.sq_num == 0) {
        GooseFrame retx = frame;
        for (size_t i = 0; i < schedule_.burst_intervals_s.size(); ++i) {
            retx.sq_num = static_cast<uint32_t>(i + 1);
            copies.emplace_back(schedule_.burst_intervals_s[i], retx);
        }
    }

    std::vector<Delivery> out;
    for (const auto& [offset, copy] : copies) {
        for (const auto& sub : participants_) {
            if (sub == publisher) continue;
            if (config_.loss_probability > 0 && draw_unit() < config_.loss_probability) continue;
            double jitter = 0.0;
            if (config_.jitter_s > 0) jitter = (2.0 * draw_unit() - 1.0) * config_.jitter_s;
            double t = now + offset + config_.base_latency_s + config_.security_overhead_s + jitter;
            t = std::max(t, now + 1e-9); // delivery strictly after publication
            out.push_back({sub, t, copy});
        }
    }
    return out;
}

double SimulatedBus::max_latency_s() const {
    return config_.base_latency_s + config_.security_overhead_s + config_.jitter_s;
}

GoosePublisher::GoosePublisher(uint16_t app_id, uint32_t publisher_id, size_t bus_burst_length)
    : app_id_(app_id), publisher_id_(publisher_id), burst_length_(bus_burst_length) {}

GooseFrame GoosePublisher::state_change(std::vector<DatasetEntry> dataset, double now) {
    GooseFrame f;
    f.app_id = app_id_;
    f.publisher_id = publisher_id_;
    f.st_num = ++st_num_;
    f.sq_num = 0;
    f.timestamp_ns = static_cast<uint64_t>(std::llround(now * 1e9));
    f.dataset = dataset;
    last_dataset_ = std::move(dataset);
    sq_next_ = static_cast<uint32_t>(burst_length_) + 1; // the bus emits 1..burst_length
    return f;
}

GooseFrame GoosePublisher::heartbeat(double now) {
    if (st_num_ == 0) return state_change({}, now);
    GooseFrame f;
    f.app_id = app_id_;
    f.publisher_id = publisher_id_;
    f.st_num = st_num_;
    f.sq_num = sq_next_++;
    f.timestamp_ns = static_cast<uint64_t>(std::llround(now * 1e9));
    f.dataset = last_dataset_;
    return f;
}

} // namespace dcprot::comms
