#pragma once

#include "dcprot/grid/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dcprot::grid {

struct SolverConfig {
    double s_base_va = 1e6;
    /// Appended to the fault resistance of pole-ground faults (TN-S grounding
    /// is effectively solid, so the default is 0; raise it to study
    /// high-impedance ground faults).
    double grounding_resistance_ohm = 0.0;
};

/// Line ends severed by open breakers. A non-faulted line conducts only when
/// both ends are closed; the segments of a faulted line are gated per end.
struct LineEndState {
    std::set<std::pair<std::string, LineEnd>> open_ends;

    bool is_open(const std::string& line, LineEnd end) const {
        return open_ends.count({line, end}) > 0;
    }
};

/// Steady-state solution of a faulted network.
struct FaultSolution {
    double i_fault_amps = 0.0; ///< current into the fault point
    double v_th_volts = 0.0;   ///< Thevenin voltage at the fault point
    double r_th_ohm = 0.0;     ///< Thevenin resistance of the network (fault resistance excluded)
    double l_th_h = 0.0;       ///< effective inductance seen from the fault point
    double tau_s = 0.0;        ///< l_th / r_th
    /// Signed current per relay in its protected direction (positive = from
    /// the relay's bus into its line). Relays outside the faulted component
    /// read zero.
    std::map<std::string, double> relay_amps;
};

/// Operating (load) currents per relay, same sign convention.
using RelayCurrents = std::map<std::string, double>;

/// First-order rise i(t) = i_ss * (1 - exp(-t/tau)).
struct Waveform {
    double i_ss_amps = 0.0;
    double tau_s = 0.0;

    double at(double t) const;
};

/// Minimum-fault-current table for one relay: contingency -> amperes, or
/// absent when no fault current can flow (the N/D case).
struct MinFaultTable {
    std::string relay;
    std::vector<std::pair<Contingency, std::optional<double>>> entries;

    std::optional<double> lookup(const Contingency& c) const;
    bool has(const Contingency& c) const;
};

/// Resistive per-unit nodal solver over a topology. All methods are pure:
/// the solver holds only immutable topology data and may be shared across
/// threads.
///
/// Model notes. Every solve works in per-unit on s_base with each bus's
/// zone base voltage; a line is per-unitized on its from_bus zone (lines
/// joining different voltage zones carry an implicit ideal converter at the
/// to end). Fault studies model sources as an ideal voltage behind their
/// internal resistance; the driving voltage is the pole-to-pole nominal for
/// pole-pole faults and half of it for pole-ground faults. Load flow pins
/// source buses at nominal voltage and models loads as constant resistances.
class NetworkSolver {
public:
    explicit NetworkSolver(const GridTopology& topo, SolverConfig cfg = {});

    /// Full fault solution, or nullopt when the fault point has no electrical
    /// path to any in-service source.
    std::optional<FaultSolution> solve_fault(const FaultSpec& fault, const Contingency& cont,
                                             const LineEndState& ends = {}) const;

    /// Operating currents with sources pinning their buses and loads drawing
    /// through constant resistances. Components without a source are dead.
    RelayCurrents solve_load_flow(const Contingency& cont, const LineEndState& ends = {}) const;

    bool fault_point_reachable(const FaultSpec& fault, const Contingency& cont,
                               const LineEndState& ends = {}) const;

    const GridTopology& topology() const { return *topo_; }
    const SolverConfig& config() const { return cfg_; }

private:
    const GridTopology* topo_;
    SolverConfig cfg_;
};

/// Steady-state fault current magnitude at the fault point; nullopt = no
/// fault current (isolated fault, reported as N/D downstream).
std::optional<double> thevenin_fault_current(const NetworkSolver& solver, const FaultSpec& fault,
                                             const Contingency& cont = {});

/// RL rise waveform of the fault-point current.
std::optional<Waveform> fault_waveform(const NetworkSolver& solver, const FaultSpec& fault,
                                       const Contingency& cont = {});

/// One (line, worst-case position) entry of a relay's protection zone.
struct ZonePoint {
    std::string line;
    double position = 1.0;
};

/// Minimum fault-point current over the zone for each contingency, N/D where
/// every zone point is isolated (or its line is outaged).
MinFaultTable min_fault_current_table(const NetworkSolver& solver, const std::string& relay,
                                      const std::vector<Contingency>& contingencies,
                                      const std::vector<ZonePoint>& zone,
                                      FaultKind kind = FaultKind::pole_pole,
                                      double fault_resistance_ohm = 0.0);

} // namespace dcprot::grid
