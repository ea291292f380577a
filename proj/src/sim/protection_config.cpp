#include "dcprot/sim/protection_config.hpp"

#include "dcprot/common.hpp"

#include <algorithm>
#include <cmath>

namespace dcprot::sim {

using grid::Contingency;
using grid::FaultKind;
using grid::FaultSpec;
using grid::LineEnd;

std::vector<Contingency> ProtectionSystem::contingency_grid(const grid::GridTopology& topo) {
    std::vector<Contingency> grid;
    for (const auto& line : topo.lines) {
        Contingency base;
        base.line_outages.insert(line.id);
        grid.push_back(base);
        for (const auto& src : topo.sources) {
            Contingency c = base;
            c.source_outages.insert(src.id);
            grid.push_back(c);
        }
    }
    return grid;
}

ProtectionSystem ProtectionSystem::derive(const grid::NetworkSolver& solver,
                                          const ProtectionOptions& options) {
    const auto& topo = solver.topology();
    ProtectionSystem system;
    system.options_ = options;

    auto contingencies = contingency_grid(topo);

    // Worst-case line loading over the same contingency grid plus the intact
    // grid; pickup floors derive from it.
    std::map<std::string, double> worst_load;
    {
        std::vector<Contingency> load_conts = contingencies;
        load_conts.push_back({});
        for (const auto& c : load_conts) {
            grid::RelayCurrents flows = solver.solve_load_flow(c);
            for (const auto& [id, amps] : flows) {
                double mag = std::fabs(amps);
                auto [it, inserted] = worst_load.emplace(id, mag);
                if (!inserted && mag > it->second) it->second = mag;
            }
        }
    }

    std::vector<FaultKind> kinds{FaultKind::pole_pole};
    if (options.include_pole_ground) kinds.push_back(FaultKind::pole_ground);

    for (const auto& placement : topo.relays) {
        RelayProtection prot;
        prot.neighbors = relay::derive_neighbor_map(topo, placement.id);

        // Worst-case fault point: the far end of the protected line.
        double far_pos = placement.end == LineEnd::from ? 1.0 : 0.0;

        grid::MinFaultTable table;
        table.relay = placement.id;
        for (const auto& cont : contingencies) {
            std::optional<double> cell;
            if (!cont.line_outages.count(placement.line)) {
                for (FaultKind kind : kinds) {
                    FaultSpec f{placement.line, far_pos, kind, 0.0};
                    auto sol = solver.solve_fault(f, cont);
                    if (!sol) continue;
                    double through = std::max(0.0, sol->relay_amps.at(placement.id));
                    if (through < options.table_floor_amps) continue;
                    if (!cell || through < *cell) cell = through;
                }
            }
            table.entries.emplace_back(cont, cell);
        }
        prot.table = table;

        double load_floor = options.pickup_load_factor * worst_load[placement.id];
        prot.pickup_floor_amps = load_floor;

        try {
            settings::SynthesisOptions synth = options.synthesis;
            synth.line_load_amps = worst_load[placement.id];
            prot.groups = settings::synthesize_setting_groups(table, synth);
            double global_min = 0.0;
            bool any = false;
            for (const auto& [c, v] : table.entries) {
                (void)c;
                if (v && (!any || *v < global_min)) {
                    global_min = *v;
                    any = true;
                }
            }
            prot.baseline_pickup_amps = std::max(0.5 * global_min, load_floor);
            prot.enabled = true;
        } catch (const SemanticError&) {
            // No reachable fault can ever push current through this relay;
            // it stays disarmed.
            prot.enabled = false;
            prot.groups.relay = placement.id;
        }
        system.relays_.emplace(placement.id, std::move(prot));
    }
    return system;
}

void ProtectionSystem::apply_fixture_groups(const std::string& relay_id,
                                            const grid::MinFaultTable& fixture,
                                            std::optional<double> width_override_amps) {
    auto it = relays_.find(relay_id);
    if (it == relays_.end()) throw SemanticError("unknown relay '" + relay_id + "'");
    settings::SynthesisOptions synth = options_.synthesis;
    synth.width_override_amps = width_override_amps;
    it->second.groups = settings::synthesize_setting_groups(fixture, synth);
    it->second.table = fixture;
    double global_min = 0.0;
    bool any = false;
    for (const auto& [c, v] : fixture.entries) {
        (void)c;
        if (v && (!any || *v < global_min)) {
            global_min = *v;
            any = true;
        }
    }
    if (any) it->second.baseline_pickup_amps = std::max(0.5 * global_min, it->second.pickup_floor_amps);
    it->second.enabled = any;
}

const RelayProtection& ProtectionSystem::at(const std::string& relay_id) const {
    auto it = relays_.find(relay_id);
    if (it == relays_.end()) throw SemanticError("unknown relay '" + relay_id + "'");
    return it->second;
}

} // namespace dcprot::sim
