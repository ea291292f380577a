#pragma once

#include "dcprot/grid/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace dcprot::relay {

/// The relays whose operation information this relay consumes.
/// For a relay at bus A protecting line A-B:
///   - opposite_adjacent: the relay on the same line at B, facing A;
///   - downstream_same_direction: relays at B on the other lines, facing away
///     from B;
///   - downstream_opposite_direction: relays at the far ends of those lines,
///     facing B;
///   - upstream_of_opposite: the relays backing up the opposite adjacent;
///     structurally the same set as downstream_opposite_direction in this
///     grid model. It is tracked in the neighbor view but not consumed by
///     any decision rule.
struct NeighborMap {
    std::optional<std::string> opposite_adjacent;
    std::set<std::string> downstream_same_direction;
    std::set<std::string> downstream_opposite_direction;
    std::set<std::string> upstream_of_opposite;

    bool knows(const std::string& relay_id) const {
        return (opposite_adjacent && *opposite_adjacent == relay_id) ||
               downstream_same_direction.count(relay_id) ||
               downstream_opposite_direction.count(relay_id) ||
               upstream_of_opposite.count(relay_id);
    }
};

NeighborMap derive_neighbor_map(const grid::GridTopology& topo, const std::string& relay_id);

/// Last received status of one neighbor.
struct NeighborStatus {
    bool picked_up = false;
    bool tripped = false;
    bool breaker_closed = true;
    uint32_t st_num = 0;
    double last_update_s = -1e300;
    bool known = false;

    bool stale(double now, double window_s) const { return now - last_update_s > window_s; }
};

using NeighborView = std::map<std::string, NeighborStatus>;

} // namespace dcprot::relay
