#pragma once

#include "dcprot/comms/frame.hpp"
#include "dcprot/relay/neighbor.hpp"
#include "dcprot/settings/groups.hpp"
#include "dcprot/settings/idmt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dcprot::relay {

inline constexpr uint32_t kStationPublisherId = 1;

enum class RelayState { idle, picked_up, delay_pending, tripped };

const char* to_string(RelayState s);

enum class DecisionKind { instant_trip, delayed_trip, wait };

struct Decision {
    DecisionKind kind = DecisionKind::wait;
    double delay_s = 0.0; // populated for delayed_trip

    bool operator==(const Decision&) const = default;
};

/// Shared pickup/drop front end: pickup after `persistence` consecutive
/// samples above the threshold, drop as soon as one sample falls below
/// drop_ratio * threshold.
class PickupDetector {
public:
    enum class Event { none, pickup, drop };

    Event step(double amps, double threshold_amps, double drop_ratio, int persistence,
               double now);
    bool picked_up() const { return picked_; }
    double pickup_time_s() const { return pickup_time_; }
    void reset();

private:
    int consecutive_ = 0;
    bool picked_ = false;
    double pickup_time_ = 0.0;
};

struct RelayBehavior {
    int persistence_samples = 3;
    double drop_ratio = 0.95;
    /// Wait after pickup before declaring neighbor protection failure
    /// (rule 3); derived from comm timing: 2 x worst latency + one
    /// retransmission interval.
    double failure_window_s = 1.132e-3;
};

struct AdaptiveRelayConfig {
    std::string id;
    uint32_t numeric_id = 0;
    uint16_t app_id = 1;
    settings::SettingGroupSet groups;
    /// Lower bound applied on top of the group pickup (the "twice nominal
    /// line load" rule).
    double pickup_floor_amps = 0.0;
    settings::RelayTimeSettings times;
    NeighborMap neighbors;
    RelayBehavior behavior;
    /// Forced inert relays never pick up and never trip (used to model
    /// protection failure scenarios).
    bool inert = false;
    const grid::GridTopology* topology = nullptr; // for numeric id resolution
};

/// What a relay asks its host (the event loop) to do after an input.
struct RelayOutput {
    bool status_changed = false;           ///< publish a state-change status frame
    std::optional<double> trip_command_s;  ///< trip issued at this time
    std::optional<double> recheck_at_s;    ///< schedule a decision check
};

/// Directional adaptive OC relay. Single-owner: the simulation loop feeds
/// samples, frames and timer callbacks strictly in time order.
class AdaptiveRelay {
public:
    explicit AdaptiveRelay(AdaptiveRelayConfig cfg);

    RelayOutput on_sample(double directional_amps, double now);
    RelayOutput on_goose(const std::string& publisher, const comms::GooseFrame& frame, double now);
    RelayOutput on_timer(double now);

    /// Pure rule evaluation for a picked-up relay:
    ///   1. opposite adjacent picked up            -> instant trip
    ///   2. downstream same- and opposite-direction
    ///      relays picked up                       -> trip after delta_t_min
    ///   3. otherwise, once the failure window has
    ///      elapsed since pickup                   -> instant trip
    Decision decide(double now) const;

    RelayState state() const { return state_; }
    int active_group() const { return active_group_; }
    double active_pickup_amps() const;
    const NeighborView& neighbor_view() const { return view_; }
    const grid::Contingency& observed_contingency() const { return observed_; }
    uint64_t ignored_frames() const { return ignored_frames_; }
    double last_pickup_time_s() const;
    std::optional<double> trip_time_s() const { return trip_time_; }
    double measured_amps() const { return measured_; }
    const std::string& id() const { return cfg_.id; }
    const AdaptiveRelayConfig& config() const { return cfg_; }

    std::vector<comms::DatasetEntry> status_dataset(bool breaker_closed) const;

private:
    RelayOutput evaluate(double now);
    void apply_station_frame(const comms::GooseFrame& frame);
    bool any_picked(const std::set<std::string>& ids) const;

    AdaptiveRelayConfig cfg_;
    RelayState state_ = RelayState::idle;
    int active_group_ = 0;
    PickupDetector detector_;
    NeighborView view_;
    grid::Contingency observed_;
    double measured_ = 0.0;
    std::optional<double> trip_time_;
    double pending_deadline_s_ = 0.0;
    uint64_t ignored_frames_ = 0;
};

} // namespace dcprot::relay
