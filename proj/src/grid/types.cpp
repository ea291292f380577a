#include "dcprot/grid/types.hpp"

#include "dcprot/common.hpp"

#include <algorithm>

namespace dcprot::grid {

std::string Contingency::label() const {
    if (empty()) return "none";
    std::string s;
    for (const auto& l : line_outages) {
        if (!s.empty()) s += '+';
        s += l;
    }
    for (const auto& src : source_outages) {
        if (!s.empty()) s += '+';
        s += src;
    }
    return s;
}

namespace {

template <typename T>
void index_unique(const std::vector<T>& items, std::map<std::string, size_t>& index,
                  const char* kind) {
    index.clear();
    for (size_t i = 0; i < items.size(); ++i) {
        if (!index.emplace(items[i].id, i).second)
            throw SemanticError(strformat("duplicate %s id '%s'", kind, items[i].id.c_str()));
    }
}

} // namespace

void GridTopology::finalize() {
    index_unique(buses, bus_index_, "bus");
    index_unique(lines, line_index_, "line");
    index_unique(sources, source_index_, "source");
    index_unique(relays, relay_index_, "relay");

    for (const auto& b : buses) {
        if (b.nominal_voltage <= 0)
            throw SemanticError(strformat("bus '%s': nominal_voltage must be > 0", b.id.c_str()));
    }
    for (const auto& l : lines) {
        if (!bus_index_.count(l.from_bus))
            throw SemanticError(strformat("line '%s': unknown bus '%s'", l.id.c_str(), l.from_bus.c_str()));
        if (!bus_index_.count(l.to_bus))
            throw SemanticError(strformat("line '%s': unknown bus '%s'", l.id.c_str(), l.to_bus.c_str()));
        if (l.from_bus == l.to_bus)
            throw SemanticError(strformat("line '%s': from and to bus are the same", l.id.c_str()));
        if (l.length_km <= 0)
            throw SemanticError(strformat("line '%s': length must be > 0", l.id.c_str()));
        if (l.r_per_km <= 0)
            throw SemanticError(strformat("line '%s': r_per_km must be > 0", l.id.c_str()));
        if (l.l_per_km < 0)
            throw SemanticError(strformat("line '%s': l_per_km must be >= 0", l.id.c_str()));
    }
    for (const auto& s : sources) {
        if (!bus_index_.count(s.bus))
            throw SemanticError(strformat("source '%s': unknown bus '%s'", s.id.c_str(), s.bus.c_str()));
        if (s.rating_va <= 0)
            throw SemanticError(strformat("source '%s': rating must be > 0", s.id.c_str()));
        if (s.effective_resistance(bus(s.bus).nominal_voltage) <= 0)
            throw SemanticError(strformat("source '%s': internal resistance must be > 0", s.id.c_str()));
    }
    for (const auto& d : loads) {
        if (!bus_index_.count(d.bus))
            throw SemanticError(strformat("load '%s': unknown bus '%s'", d.id.c_str(), d.bus.c_str()));
        if (d.power_w < 0)
            throw SemanticError(strformat("load '%s': power must be >= 0", d.id.c_str()));
    }
    std::set<std::pair<std::string, LineEnd>> occupied;
    for (const auto& r : relays) {
        if (!line_index_.count(r.line))
            throw SemanticError(strformat("relay '%s': unknown line '%s'", r.id.c_str(), r.line.c_str()));
        if (!occupied.emplace(r.line, r.end).second)
            throw SemanticError(strformat("relay '%s': line end already has a relay", r.id.c_str()));
    }

    // Numeric ids: relays from 1000, lines from 2000, sources from 3000.
    numeric_ids_.clear();
    numeric_to_element_.clear();
    auto assign = [&](const std::string& id, uint32_t numeric) {
        numeric_ids_[id] = numeric;
        numeric_to_element_[numeric] = id;
    };
    for (size_t i = 0; i < relays.size(); ++i) assign(relays[i].id, 1000 + static_cast<uint32_t>(i));
    for (size_t i = 0; i < lines.size(); ++i) assign(lines[i].id, 2000 + static_cast<uint32_t>(i));
    for (size_t i = 0; i < sources.size(); ++i) assign(sources[i].id, 3000 + static_cast<uint32_t>(i));
}

const Bus& GridTopology::bus(const std::string& id) const {
    auto it = bus_index_.find(id);
    if (it == bus_index_.end()) throw SemanticError("unknown bus '" + id + "'");
    return buses[it->second];
}

const Line& GridTopology::line(const std::string& id) const {
    auto it = line_index_.find(id);
    if (it == line_index_.end()) throw SemanticError("unknown line '" + id + "'");
    return lines[it->second];
}

const Source& GridTopology::source(const std::string& id) const {
    auto it = source_index_.find(id);
    if (it == source_index_.end()) throw SemanticError("unknown source '" + id + "'");
    return sources[it->second];
}

const RelayPlacement& GridTopology::relay(const std::string& id) const {
    auto it = relay_index_.find(id);
    if (it == relay_index_.end()) throw SemanticError("unknown relay '" + id + "'");
    return relays[it->second];
}

std::vector<BreakerPlacement> GridTopology::breakers() const {
    std::vector<BreakerPlacement> out;
    out.reserve(relays.size());
    for (const auto& r : relays) out.push_back({r.id, r.line, r.end});
    return out;
}

const std::string& GridTopology::relay_bus(const RelayPlacement& r) const {
    const Line& l = line(r.line);
    return r.end == LineEnd::from ? l.from_bus : l.to_bus;
}

const std::string& GridTopology::relay_far_bus(const RelayPlacement& r) const {
    const Line& l = line(r.line);
    return r.end == LineEnd::from ? l.to_bus : l.from_bus;
}

std::optional<std::string> GridTopology::relay_at(const std::string& line_id, LineEnd end) const {
    for (const auto& r : relays) {
        if (r.line == line_id && r.end == end) return r.id;
    }
    return std::nullopt;
}

uint32_t GridTopology::numeric_id(const std::string& element_id) const {
    auto it = numeric_ids_.find(element_id);
    if (it == numeric_ids_.end()) throw SemanticError("no numeric id for '" + element_id + "'");
    return it->second;
}

const std::string* GridTopology::element_for_numeric(uint32_t numeric) const {
    auto it = numeric_to_element_.find(numeric);
    return it == numeric_to_element_.end() ? nullptr : &it->second;
}

} // namespace dcprot::grid
