#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dcprot::grid {

/// A DC node. `nominal_voltage` is the pole-to-pole voltage of the zone the
/// bus belongs to (1500 V for a +/-750 V bipolar system, 380 V for a
/// unipolar 380 V zone).
struct Bus {
    std::string id;
    double nominal_voltage = 0.0; // V
};

/// A DC line or cable between two buses.
struct Line {
    std::string id;
    std::string from_bus;
    std::string to_bus;
    double length_km = 0.0;
    double r_per_km = 0.0; // ohm/km
    double l_per_km = 0.0; // H/km
    bool in_service = true;

    double resistance_ohm() const { return length_km * r_per_km; }
    double inductance_h() const { return length_km * l_per_km; }
};

enum class SourceKind { slack, pv, synchronous };

/// A power source, modeled in fault studies as an ideal voltage behind
/// `internal_resistance`. When the resistance is not given explicitly it is
/// derived as V^2/rating scaled by `resistance_factor`.
struct Source {
    std::string id;
    std::string bus;
    double rating_va = 0.0;
    SourceKind kind = SourceKind::pv;
    std::optional<double> internal_resistance_ohm; // explicit override
    double resistance_factor = 1.0;
    bool in_service = true;

    double effective_resistance(double nominal_voltage) const {
        if (internal_resistance_ohm) return *internal_resistance_ohm;
        return nominal_voltage * nominal_voltage / rating_va * resistance_factor;
    }
};

struct Load {
    std::string id;
    std::string bus;
    double power_w = 0.0;
};

enum class FaultKind { pole_pole, pole_ground };

/// A short circuit at a fractional position along a line, measured from the
/// line's from_bus.
struct FaultSpec {
    std::string line;
    double position = 0.5; // [0,1]
    FaultKind kind = FaultKind::pole_pole;
    double fault_resistance_ohm = 0.0;
};

/// A pre-fault outage condition.
struct Contingency {
    std::set<std::string> line_outages;
    std::set<std::string> source_outages;

    bool operator==(const Contingency&) const = default;
    auto operator<=>(const Contingency&) const = default;

    bool empty() const { return line_outages.empty() && source_outages.empty(); }
    std::string label() const;
};

enum class LineEnd { from, to };

/// A directional OC relay location: which end of which line it sits at.
/// The relay protects current flowing from its end into the line, toward
/// the opposite end.
struct RelayPlacement {
    std::string id;
    std::string line;
    LineEnd end = LineEnd::from;
};

/// A breaker commanded by one relay, at the same line end.
struct BreakerPlacement {
    std::string relay;
    std::string line;
    LineEnd end = LineEnd::from;
};

class GridTopology {
public:
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<Source> sources;
    std::vector<Load> loads;
    std::vector<RelayPlacement> relays;

    /// Validates invariants and builds the lookup indices. Throws
    /// SemanticError on dangling references or out-of-range values.
    void finalize();

    const Bus& bus(const std::string& id) const;
    const Line& line(const std::string& id) const;
    const Source& source(const std::string& id) const;
    const RelayPlacement& relay(const std::string& id) const;
    bool has_bus(const std::string& id) const { return bus_index_.count(id) > 0; }
    bool has_line(const std::string& id) const { return line_index_.count(id) > 0; }
    bool has_source(const std::string& id) const { return source_index_.count(id) > 0; }
    bool has_relay(const std::string& id) const { return relay_index_.count(id) > 0; }

    /// Breakers are implicit: one per relay placement, at the relay's end.
    std::vector<BreakerPlacement> breakers() const;

    /// Bus the relay sits at / the far bus of its protected line.
    const std::string& relay_bus(const RelayPlacement& r) const;
    const std::string& relay_far_bus(const RelayPlacement& r) const;

    /// Relays placed at a given end of a given line (at most one per end in
    /// well-formed topologies).
    std::optional<std::string> relay_at(const std::string& line_id, LineEnd end) const;

    /// Stable small integer ids for wire datasets; assigned in declaration
    /// order during finalize().
    uint32_t numeric_id(const std::string& element_id) const;
    const std::string* element_for_numeric(uint32_t numeric) const;

private:
    std::map<std::string, size_t> bus_index_;
    std::map<std::string, size_t> line_index_;
    std::map<std::string, size_t> source_index_;
    std::map<std::string, size_t> relay_index_;
    std::map<std::string, uint32_t> numeric_ids_;
    std::map<uint32_t, std::string> numeric_to_element_;
};

} // namespace dcprot::grid
