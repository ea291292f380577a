#include "dcprot/relay/relay.hpp"

#include "dcprot/common.hpp"

#include <algorithm>

namespace dcprot::relay {

const char* to_string(RelayState s) {
    switch (s) {
    case RelayState::idle: return "idle";
    case RelayState::picked_up: return "picked_up";
    case RelayState::delay_pending: return "delay_pending";
    case RelayState::tripped: return "tripped";
    }
    return "?";
}

PickupDetector::Event PickupDetector::step(double amps, double threshold_amps, double drop_ratio,
                                           int persistence, double now) {
    if (picked_) {
        if (amps < drop_ratio * threshold_amps) {
            picked_ = false;
            consecutive_ = 0;
            return Event::drop;
        }
        return Event::none;
    }
    if (amps > threshold_amps) {
        if (++consecutive_ >= persistence) {
            picked_ = true;
            pickup_time_ = now;
            return Event::pickup;
        }
    } else {
        consecutive_ = 0;
    }
    return Event::none;
}

void PickupDetector::reset() {
    consecutive_ = 0;
    picked_ = false;
}

AdaptiveRelay::AdaptiveRelay(AdaptiveRelayConfig cfg) : cfg_(std::move(cfg)) {
    active_group_ = cfg_.groups.default_group;
}

double AdaptiveRelay::active_pickup_amps() const {
    return std::max(cfg_.groups.group(active_group_).pickup_amps, cfg_.pickup_floor_amps);
}

double AdaptiveRelay::last_pickup_time_s() const { return detector_.pickup_time_s(); }

std::vector<comms::DatasetEntry> AdaptiveRelay::status_dataset(bool breaker_closed) const {
    using comms::EntryKind;
    bool picked = state_ == RelayState::picked_up || state_ == RelayState::delay_pending;
    return {
        {uint8_t(EntryKind::relay_pickup), cfg_.numeric_id, picked},
        {uint8_t(EntryKind::relay_tripped), cfg_.numeric_id, state_ == RelayState::tripped},
        {uint8_t(EntryKind::breaker_closed), cfg_.numeric_id, breaker_closed},
    };
}

bool AdaptiveRelay::any_picked(const std::set<std::string>& ids) const {
    for (const auto& id : ids) {
        auto it = view_.find(id);
        if (it != view_.end() && it->second.picked_up) return true;
    }
    return false;
}

Decision AdaptiveRelay::decide(double now) const {
    if (cfg_.neighbors.opposite_adjacent) {
        auto it = view_.find(*cfg_.neighbors.opposite_adjacent);
        if (it != view_.end() && it->second.picked_up) return {DecisionKind::instant_trip, 0.0};
    }
    if (any_picked(cfg_.neighbors.downstream_same_direction) &&
        any_picked(cfg_.neighbors.downstream_opposite_direction))
        return {DecisionKind::delayed_trip, settings::delta_t_min(cfg_.times)};
    if (now - detector_.pickup_time_s() >= cfg_.behavior.failure_window_s)
        return {DecisionKind::instant_trip, 0.0};
    return {DecisionKind::wait, 0.0};
}

RelayOutput AdaptiveRelay::evaluate(double now) {
    RelayOutput out;
    if (state_ == RelayState::picked_up) {
        Decision d = decide(now);
        switch (d.kind) {
        case DecisionKind::instant_trip:
            state_ = RelayState::tripped;
            trip_time_ = now;
            out.trip_command_s = now;
            out.status_changed = true;
            break;
        case DecisionKind::delayed_trip:
            state_ = RelayState::delay_pending;
            // The coordination margin is anchored at the pickup instant.
            pending_deadline_s_ = detector_.pickup_time_s() + d.delay_s;
            out.recheck_at_s = pending_deadline_s_;
            break;
        case DecisionKind::wait: break;
        }
    } else if (state_ == RelayState::delay_pending) {
        // Rule 1 still dominates: a late opposite-adjacent pickup means the
        // fault is on this relay's own line.
        if (cfg_.neighbors.opposite_adjacent) {
            auto it = view_.find(*cfg_.neighbors.opposite_adjacent);
            if (it != view_.end() && it->second.picked_up) {
                state_ = RelayState::tripped;
                trip_time_ = now;
                out.trip_command_s = now;
                out.status_changed = true;
                return out;
            }
        }
        bool downstream_active = any_picked(cfg_.neighbors.downstream_same_direction) ||
                                 any_picked(cfg_.neighbors.downstream_opposite_direction);
        if (!downstream_active) {
            // Downstream relays cleared the fault; stand down.
            state_ = RelayState::idle;
            detector_.reset();
            out.status_changed = true;
        } else if (now >= pending_deadline_s_) {
            // Backup action: downstream pickups persisted past the margin.
            state_ = RelayState::tripped;
            trip_time_ = now;
            out.trip_command_s = now;
            out.status_changed = true;
        }
    }
    return out;
}

RelayOutput AdaptiveRelay::on_sample(double directional_amps, double now) {
    measured_ = directional_amps;
    RelayOutput out;
    if (cfg_.inert || state_ == RelayState::tripped) return out;

    auto event = detector_.step(directional_amps, active_pickup_amps(), cfg_.behavior.drop_ratio,
                                cfg_.behavior.persistence_samples, now);
    switch (event) {
    case PickupDetector::Event::pickup:
        state_ = RelayState::picked_up;
        out.status_changed = true;
        out.recheck_at_s = now + cfg_.behavior.failure_window_s;
        break;
    case PickupDetector::Event::drop:
        state_ = RelayState::idle;
        out.status_changed = true;
        return out;
    case PickupDetector::Event::none: break;
    }

    if (state_ == RelayState::picked_up) {
        RelayOutput eval = evaluate(now);
        out.status_changed |= eval.status_changed;
        out.trip_command_s = eval.trip_command_s;
        if (eval.recheck_at_s) out.recheck_at_s = eval.recheck_at_s;
    }
    return out;
}

void AdaptiveRelay::apply_station_frame(const comms::GooseFrame& frame) {
    using comms::EntryKind;
    for (const auto& e : frame.dataset) {
        const std::string* element = cfg_.topology ? cfg_.topology->element_for_numeric(e.entry_id)
                                                   : nullptr;
        if (!element) continue;
        if (e.kind == uint8_t(EntryKind::line_in_service)) {
            if (e.value)
                observed_.line_outages.erase(*element);
            else
                observed_.line_outages.insert(*element);
        } else if (e.kind == uint8_t(EntryKind::source_in_service)) {
            if (e.value)
                observed_.source_outages.erase(*element);
            else
                observed_.source_outages.insert(*element);
        }
    }
    if (state_ == RelayState::idle)
        active_group_ = settings::select_active_group(cfg_.groups, observed_);
}

RelayOutput AdaptiveRelay::on_goose(const std::string& publisher, const comms::GooseFrame& frame,
                                    double now) {
    RelayOutput out;
    if (frame.publisher_id == kStationPublisherId) {
        apply_station_frame(frame);
        return out;
    }
    if (!cfg_.neighbors.knows(publisher)) {
        ++ignored_frames_;
        return out;
    }

    NeighborStatus& st = view_[publisher];
    if (st.known && frame.st_num < st.st_num) return out; // replayed state, ignore
    bool refresh_only = st.known && frame.st_num == st.st_num;
    st.known = true;
    st.st_num = frame.st_num;
    st.last_update_s = now;
    if (!refresh_only) {
        using comms::EntryKind;
        for (const auto& e : frame.dataset) {
            if (e.kind == uint8_t(EntryKind::relay_pickup)) st.picked_up = e.value;
            else if (e.kind == uint8_t(EntryKind::relay_tripped)) st.tripped = e.value;
            else if (e.kind == uint8_t(EntryKind::breaker_closed)) st.breaker_closed = e.value;
        }
    }

    if (!cfg_.inert && (state_ == RelayState::picked_up || state_ == RelayState::delay_pending))
        return evaluate(now);
    return out;
}

RelayOutput AdaptiveRelay::on_timer(double now) {
    if (cfg_.inert) return {};
    if (state_ == RelayState::picked_up || state_ == RelayState::delay_pending)
        return evaluate(now);
    return {};
}

} // namespace dcprot::relay
