#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dcprot::settings {

/// Parameters of an inverse definite minimum time curve:
/// t = T * (k / ((I/Is)^alpha - 1) + l).
struct IdmtCurve {
    std::string name;
    double k = 0.0;
    double alpha = 0.0;
    double l = 0.0;
};

/// The eleven standard curves.
const std::vector<IdmtCurve>& idmt_curves();
const IdmtCurve& idmt_curve(const std::string& name);
extern const IdmtCurve kStandardInverse;

struct IdmtConfig {
    IdmtCurve curve;
    double time_multiplier = 1.0; // T in [0.025, 1.5]
    double pickup_amps = 0.0;     // Is

    void validate() const;
};

/// Operate time in seconds for a constant measured current; empty when the
/// current does not exceed pickup (the relay is not picked up).
std::optional<double> idmt_time(const IdmtConfig& config, double current_amps);

/// Breaker and relay stage delays of the coordination chain.
struct RelayTimeSettings {
    double t_tr_s = 0.004;     // trip relay
    double t_cb_op_s = 0.015;  // breaker mechanism
    double t_arc_s = 0.005;    // arc extinction
    double t_reset_s = 0.005;  // relay reset

    /// Time from trip command to current interruption.
    double clearing_time_s() const { return t_tr_s + t_cb_op_s + t_arc_s; }
};

/// Minimum coordination margin: the sum of the four stage delays.
double delta_t_min(const RelayTimeSettings& settings);

} // namespace dcprot::settings
