#include "lvstor/battery.hpp"

#include <cmath>
#include <sstream>

namespace lvstor {

void BatterySpec::validate() const {
    std::ostringstream err;
    if (!(b_rated >= 0) || !(b_min >= 0) || b_min > b_max || b_max > b_rated) {
        err << name << ": need 0 <= b_min <= b_max <= b_rated, got b_min=" << b_min
            << " b_max=" << b_max << " b_rated=" << b_rated;
        throw ConfigError(err.str());
    }
    if (!(delta_min < 0.0) || !(delta_max > 0.0)) {
        err << name << ": ramp limits must satisfy delta_min < 0 < delta_max";
        throw ConfigError(err.str());
    }
    if (!(eta_ch > 0.0 && eta_ch <= 1.0) || !(eta_dis > 0.0 && eta_dis <= 1.0)) {
        err << name << ": efficiencies must lie in (0, 1]";
        throw ConfigError(err.str());
    }
    if (s_b_max < 0.0) {
        err << name << ": converter rating must be nonnegative";
        throw ConfigError(err.str());
    }
}

double full_charge_time(const BatterySpec& spec) {
    return (spec.b_max - spec.b_min) / spec.delta_max;
}

double full_discharge_time(const BatterySpec& spec) {
    return (spec.b_max - spec.b_min) / std::abs(spec.delta_min);
}

double grid_power_of_delta(double x_kwh, double h_hours, const BatterySpec& spec) {
    const double ramp = x_kwh / h_hours;
    constexpr double tol = 1e-9;
    if (ramp < spec.delta_min - tol) {
        std::ostringstream err;
        err << "ramp " << ramp << " kW below discharge limit delta_min=" << spec.delta_min;
        throw ConstraintError(err.str());
    }
    if (ramp > spec.delta_max + tol) {
        std::ostringstream err;
        err << "ramp " << ramp << " kW above charge limit delta_max=" << spec.delta_max;
        throw ConstraintError(err.str());
    }
    const double xp = x_kwh > 0.0 ? x_kwh : 0.0;
    const double xn = x_kwh < 0.0 ? -x_kwh : 0.0;
    return xp / (h_hours * spec.eta_ch) - xn * spec.eta_dis / h_hours;
}

double delta_of_grid_power(double p_kw, double h_hours, const BatterySpec& spec) {
    return p_kw >= 0.0 ? p_kw * h_hours * spec.eta_ch : p_kw * h_hours / spec.eta_dis;
}

double reactive_headroom(double p_b_kw, const BatterySpec& spec) {
    const double margin = spec.s_b_max * spec.s_b_max - p_b_kw * p_b_kw;
    if (margin < -kApparentPowerTol) {
        std::ostringstream err;
        err << "infeasible dispatch: |P_B|=" << std::abs(p_b_kw)
            << " kW exceeds converter rating " << spec.s_b_max << " kVA";
        throw ConstraintError(err.str());
    }
    return std::sqrt(margin > 0.0 ? margin : 0.0);
}

double power_factor(double p_kw, double q_kvar) {
    if (p_kw == 0.0 && q_kvar == 0.0)
        throw DomainError("power factor undefined at zero apparent power");
    return p_kw / std::hypot(p_kw, q_kvar);
}

bool apparent_power_ok(double p_kw, double q_kvar, const BatterySpec& spec) {
    return p_kw * p_kw + q_kvar * q_kvar <= spec.s_b_max * spec.s_b_max + kApparentPowerTol;
}

} // namespace lvstor
