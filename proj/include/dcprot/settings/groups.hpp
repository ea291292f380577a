#pragma once

#include "dcprot/grid/fault_solver.hpp"
#include "dcprot/grid/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dcprot::settings {

/// One clustered pickup band. Members of the group are the table entries in
/// [lower_bound, upper_bound); the topmost group also includes its upper
/// bound (the table maximum).
struct SettingGroup {
    int group_id = 0;
    double lower_bound_amps = 0.0;
    double upper_bound_amps = 0.0;
    double pickup_amps = 0.0;
    std::vector<grid::Contingency> activation_conditions;
};

struct SettingGroupSet {
    std::string relay;
    std::vector<SettingGroup> groups; // group_id 1 holds the highest currents
    int default_group = 0;            // the group with the lowest pickup
    std::vector<std::string> diagnostics;

    const SettingGroup& group(int id) const;
};

struct SynthesisOptions {
    /// Maximum relative spread of minimum fault currents within one group.
    double ratio = 0.10;
    /// Fixed bin width in amperes; when set, the ratio rule is bypassed.
    std::optional<double> width_override_amps;
    /// Nominal load current of the protected line; enables the pickup >
    /// 2 x load validation diagnostic.
    std::optional<double> line_load_amps;
};

/// Clusters a minimum-fault-current table into uniform bins descending from
/// the table maximum and derives one pickup per bin (half the bin's lower
/// bound). Throws SemanticError("no reachable faults") when the table has no
/// finite entry.
SettingGroupSet synthesize_setting_groups(const grid::MinFaultTable& table,
                                          const SynthesisOptions& options = {});

/// The group whose activation conditions contain the observed contingency,
/// falling back to the default (most sensitive) group for conditions absent
/// from the table.
int select_active_group(const SettingGroupSet& set, const grid::Contingency& status);

std::string serialize_setting_groups(const SettingGroupSet& set);
SettingGroupSet parse_setting_groups(const std::string& text, const std::string& origin);

} // namespace dcprot::settings

namespace dcprot::grid {

/// Reads a minimum-fault-current fixture document ([meta] with relay and
/// columns, [rows] with one line outage per record).
MinFaultTable parse_min_fault_table(const std::string& text, const std::string& origin);
MinFaultTable load_min_fault_table_file(const std::string& path);
std::string serialize_min_fault_table(const MinFaultTable& table);

} // namespace dcprot::grid
