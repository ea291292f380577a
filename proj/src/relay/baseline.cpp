#include "dcprot/relay/baseline.hpp"

namespace dcprot::relay {

BaselineRelay::BaselineRelay(BaselineRelayConfig cfg) : cfg_(std::move(cfg)) {}

RelayOutput BaselineRelay::on_sample(double directional_amps, double now, double dt) {
    RelayOutput out;
    if (cfg_.inert || tripped_) return out;

    auto event = detector_.step(directional_amps, cfg_.idmt.pickup_amps, cfg_.behavior.drop_ratio,
                                cfg_.behavior.persistence_samples, now);
    if (event == PickupDetector::Event::pickup) out.status_changed = true;
    if (event == PickupDetector::Event::drop) {
        accumulated_ = 0.0; // relay reset
        out.status_changed = true;
        return out;
    }

    if (detector_.picked_up()) {
        if (auto t_op = settings::idmt_time(cfg_.idmt, directional_amps)) {
            accumulated_ += dt / *t_op;
            if (accumulated_ >= 1.0) {
                tripped_ = true;
                trip_time_ = now;
                out.trip_command_s = now;
                out.status_changed = true;
            }
        }
    }
    return out;
}

} // namespace dcprot::relay
