#pragma once

#include "dcprot/relay/relay.hpp"
#include "dcprot/settings/idmt.hpp"

#include <optional>
#include <string>

namespace dcprot::relay {

struct BaselineRelayConfig {
    std::string id;
    uint32_t numeric_id = 0;
    settings::IdmtConfig idmt;
    settings::RelayTimeSettings times;
    RelayBehavior behavior; // shares the adaptive pickup/drop front end
    bool inert = false;
};

/// Standard inverse-time relay without communication. While picked up it
/// accumulates operate-time progress as the integral of dt / t_op(I(t)) over
/// the evolving current and trips when the accumulator reaches 1 (for a
/// constant current this reduces to tripping after t_op exactly). Dropping
/// resets the accumulator.
class BaselineRelay {
public:
    explicit BaselineRelay(BaselineRelayConfig cfg);

    RelayOutput on_sample(double directional_amps, double now, double dt);

    bool picked_up() const { return detector_.picked_up(); }
    bool tripped() const { return tripped_; }
    double last_pickup_time_s() const { return detector_.pickup_time_s(); }
    std::optional<double> trip_time_s() const { return trip_time_; }
    double progress() const { return accumulated_; }
    const std::string& id() const { return cfg_.id; }

private:
    BaselineRelayConfig cfg_;
    PickupDetector detector_;
    double accumulated_ = 0.0;
    bool tripped_ = false;
    std::optional<double> trip_time_;
};

} // namespace dcprot::relay
