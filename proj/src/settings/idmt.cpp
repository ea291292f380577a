#include "dcprot/settings/idmt.hpp"

#include "dcprot/common.hpp"

#include <cmath>

namespace dcprot::settings {

const IdmtCurve kStandardInverse{"standard_inverse_iec", 0.14, 0.02, 0.0};

const std::vector<IdmtCurve>& idmt_curves() {
    static const std::vector<IdmtCurve> curves{
        {"short_time_inverse_areva", 0.05, 0.04, 0.0},
        kStandardInverse,
        {"very_inverse_iec", 1.5, 1.0, 0.0},
        {"extremely_inverse_iec", 80.0, 2.0, 0.0},
        {"long_time_inverse_areva", 120.0, 1.0, 0.0},
        {"short_time_inverse_co2", 0.023, 0.02, 0.016},
        {"moderately_inverse_ansi", 0.051, 0.02, 0.011},
        {"long_time_inverse_co2", 9.95, 2.0, 0.18},
        {"very_inverse_ansi", 19.61, 2.0, 0.49},
        {"extremely_inverse_ansi", 28.2, 2.0, 0.12},
        {"rectifier_protection", 45900.0, 5.6, 0.0},
    };
    return curves;
}

const IdmtCurve& idmt_curve(const std::string& name) {
    for (const auto& c : idmt_curves())
        if (c.name == name) return c;
    throw SemanticError("unknown IDMT curve '" + name + "'");
}

void IdmtConfig::validate() const {
    if (curve.k <= 0 || curve.alpha <= 0 || curve.l < 0)
        throw SemanticError("IDMT curve parameters out of range");
    if (time_multiplier < 0.025 || time_multiplier > 1.5)
        throw SemanticError(strformat("time multiplier %.4f outside [0.025, 1.5]", time_multiplier));
    if (pickup_amps <= 0) throw SemanticError("pickup must be > 0");
}

std::optional<double> idmt_time(const IdmtConfig& config, double current_amps) {
    if (current_amps <= config.pickup_amps) return std::nullopt;
    double ratio = current_amps / config.pickup_amps;
    return config.time_multiplier *
           (config.curve.k / (std::pow(ratio, config.curve.alpha) - 1.0) + config.curve.l);
}

double delta_t_min(const RelayTimeSettings& s) {
    return s.t_tr_s + s.t_cb_op_s + s.t_arc_s + s.t_reset_s;
}

} // namespace dcprot::settings
