#pragma once

#include "dcprot/grid/fault_solver.hpp"
#include "dcprot/relay/neighbor.hpp"
#include "dcprot/settings/groups.hpp"
#include "dcprot/settings/idmt.hpp"

#include <map>
#include <optional>
#include <string>

namespace dcprot::sim {

struct ProtectionOptions {
    settings::SynthesisOptions synthesis;
    /// Pickups are floored at this multiple of the relay's worst-case line
    /// load current, implementing the rule that the pickup must exceed twice
    /// the nominal line load.
    double pickup_load_factor = 2.1;
    /// Through currents below this are indistinguishable from noise and
    /// recorded as N/D.
    double table_floor_amps = 1.0;
    /// Include pole-ground minima when deriving thresholds.
    bool include_pole_ground = true;
    settings::RelayTimeSettings times;
    double baseline_time_multiplier = 0.025;
    std::string baseline_curve = "standard_inverse_iec";
};

/// Everything the simulator needs to arm one relay.
struct RelayProtection {
    settings::SettingGroupSet groups;
    double pickup_floor_amps = 0.0;
    double baseline_pickup_amps = 0.0;
    relay::NeighborMap neighbors;
    grid::MinFaultTable table; ///< relay through-current minima the groups came from
    bool enabled = true;       ///< false when the relay can never see fault current
};

/// Derived settings for every relay of a topology. Immutable once built and
/// shared across concurrent scenario runs.
///
/// Thresholds come from the relay's own (through) current for worst-case
/// faults at the far end of its line, minimized per contingency over both
/// fault kinds. The contingency grid pairs every line outage with every
/// single source outage, so operating conditions that only lose a source
/// select the most sensitive fallback group, exactly like the shipped
/// reference table behaves.
class ProtectionSystem {
public:
    static ProtectionSystem derive(const grid::NetworkSolver& solver,
                                   const ProtectionOptions& options = {});

    /// Replace one relay's groups with settings synthesized from a fixture
    /// table (the reference-data path).
    void apply_fixture_groups(const std::string& relay_id, const grid::MinFaultTable& fixture,
                              std::optional<double> width_override_amps);

    const RelayProtection& at(const std::string& relay_id) const;
    const std::map<std::string, RelayProtection>& relays() const { return relays_; }
    const ProtectionOptions& options() const { return options_; }

    /// The contingency grid the tables were derived over.
    static std::vector<grid::Contingency> contingency_grid(const grid::GridTopology& topo);

private:
    std::map<std::string, RelayProtection> relays_;
    ProtectionOptions options_;
};

} // namespace dcprot::sim
