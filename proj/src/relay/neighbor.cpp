#include "dcprot/relay/neighbor.hpp"

namespace dcprot::relay {

using grid::GridTopology;
using grid::LineEnd;

NeighborMap derive_neighbor_map(const GridTopology& topo, const std::string& relay_id) {
    const auto& self = topo.relay(relay_id);
    const auto& line = topo.line(self.line);
    const std::string& far_bus = topo.relay_far_bus(self);

    NeighborMap map;
    LineEnd other_end = self.end == LineEnd::from ? LineEnd::to : LineEnd::from;
    map.opposite_adjacent = topo.relay_at(self.line, other_end);

    for (const auto& l : topo.lines) {
        if (l.id == line.id) continue;
        LineEnd near_end;
        if (l.from_bus == far_bus)
            near_end = LineEnd::from;
        else if (l.to_bus == far_bus)
            near_end = LineEnd::to;
        else
            continue;
        LineEnd remote_end = near_end == LineEnd::from ? LineEnd::to : LineEnd::from;
        if (auto same = topo.relay_at(l.id, near_end); same && *same != relay_id)
            map.downstream_same_direction.insert(*same);
        if (auto opp = topo.relay_at(l.id, remote_end); opp && *opp != relay_id) {
            map.downstream_opposite_direction.insert(*opp);
            map.upstream_of_opposite.insert(*opp);
        }
    }
    return map;
}

} // namespace dcprot::relay
