#pragma once

#include "dcprot/comms/frame.hpp"

#include <random>
#include <string>
#include <vector>

namespace dcprot::comms {

struct BusConfig {
    double base_latency_s = 66e-6;     ///< one-way transfer delay
    double jitter_s = 0.0;             ///< uniform half-width added per delivery
    double loss_probability = 0.0;     ///< per delivery attempt
    double security_overhead_s = 0.0;  ///< crypto processing cost, up to 1.8 ms
    uint64_t rng_seed = 0;

    void validate() const;
};

/// Burst pattern after a state change plus the steady heartbeat period.
struct RetransmitSchedule {
    std::vector<double> burst_intervals_s{1e-3, 2e-3, 4e-3, 8e-3};
    double heartbeat_interval_s = 1.0;

    void validate() const;
};

struct Delivery {
    std::string subscriber;
    double time_s = 0.0;
    GooseFrame frame;
};

/// Multicast bus simulation. publish() fans a frame out to every registered
/// participant except the publisher, applying latency, jitter and loss per
/// delivery; a state-change frame (sq_num == 0) also schedules its
/// retransmission burst with incrementing sq_num. Deliveries are returned to
/// the caller (the event loop) rather than dispatched.
class SimulatedBus {
public:
    explicit SimulatedBus(BusConfig config, RetransmitSchedule schedule = {});

    void register_participant(const std::string& id);
    bool is_registered(const std::string& id) const;

    std::vector<Delivery> publish(const std::string& publisher, const GooseFrame& frame,
                                  double now);

    /// Worst-case one-way delay (base + security + jitter half-width).
    double max_latency_s() const;

    const BusConfig& config() const { return config_; }
    const RetransmitSchedule& schedule() const { return schedule_; }

private:
    double draw_unit();

    BusConfig config_;
    RetransmitSchedule schedule_;
    std::vector<std::string> participants_; // registration order
    std::mt19937_64 rng_;
};

/// Per-publisher st/sq bookkeeping. The bus emits burst retransmissions for
/// state changes itself, so the publisher advances its sq counter past the
/// burst; heartbeats continue the sequence with the same st_num.
class GoosePublisher {
public:
    GoosePublisher(uint16_t app_id, uint32_t publisher_id, size_t bus_burst_length);

    GooseFrame state_change(std::vector<DatasetEntry> dataset, double now);
    GooseFrame heartbeat(double now);
    bool has_published() const { return st_num_ > 0; }

private:
    uint16_t app_id_;
    uint32_t publisher_id_;
    size_t burst_length_;
    uint32_t st_num_ = 0;
    uint32_t sq_next_ = 0;
    std::vector<DatasetEntry> last_dataset_;
};

} // namespace dcprot::comms
