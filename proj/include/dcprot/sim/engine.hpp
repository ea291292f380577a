#pragma once

#include "dcprot/comms/bus.hpp"
#include "dcprot/grid/fault_solver.hpp"
#include "dcprot/sim/protection_config.hpp"
#include "dcprot/sim/scenario.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dcprot::sim {

enum class WaveformSource { builtin_solver, fixture_table };

struct SimConfig {
    comms::BusConfig bus;
    comms::RetransmitSchedule retransmit;
    settings::RelayTimeSettings times;
    grid::SolverConfig solver;
    WaveformSource waveform_source = WaveformSource::builtin_solver;
    /// Required in fixture mode: fault magnitudes are rescaled so the fault
    /// point current matches the fixture entry for the scenario contingency
    /// (when one exists).
    const grid::MinFaultTable* fixture = nullptr;
    uint64_t rng_seed = 0;
    bool run_baseline = true;
    bool trace_waveforms = false;
    bool capture_frames = false;

    /// Wait after pickup before rule 3 declares neighbor protection failure:
    /// twice the worst one-way latency plus one retransmission interval.
    double failure_window_s(const comms::SimulatedBus& bus_sim) const;
};

/// Piecewise first-order model of every relay's directional current.
/// Topology changes open a new epoch: fault epochs rise exponentially from
/// the pre-event values with the network time constant, switching epochs
/// settle instantly (the breaker forces commutation).
class CurrentModel {
public:
    CurrentModel(const grid::NetworkSolver& solver, Contingencies_tag = {}); // see below

    struct Epoch {
        double start_s = 0.0;
        double tau_s = 0.0;
        std::map<std::string, double> start_amps;
        std::map<std::string, double> target_amps;
    };
};

struct RelayTiming {
    std::optional<double> pickup_s;       // from fault inception
    std::optional<double> trip_command_s; // from fault inception
    std::optional<double> fault_clear_s;  // trip + breaker clearing chain
};

struct SchemeReport {
    std::map<std::string, RelayTiming> relays;
    std::vector<std::string> event_log;

    const RelayTiming& timing(const std::string& relay) const;
    /// Relays that issued a trip command, in id order.
    std::vector<std::string> tripped_relays() const;
};

struct TimingReport {
    Scenario scenario;
    SchemeReport adaptive;
    SchemeReport baseline; // empty when the baseline run is disabled
    bool baseline_run = false;
    std::string waveform_trace; // time,relay,amps rows when tracing is on
    std::vector<std::string> frame_capture; // "time hex" rows when capturing
};

/// Runs the scenario under the adaptive scheme and, unless disabled, the
/// standard-inverse baseline under identical physics and seeds.
TimingReport run_scenario(const grid::GridTopology& topo, const ProtectionSystem& protection,
                          const Scenario& scenario, const SimConfig& config);

std::string render_report(const TimingReport& report, bool include_events);

} // namespace dcprot::sim
