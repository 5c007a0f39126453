#pragma once

#include <string>

#include "lvstor/errors.hpp"

namespace lvstor {

/// Tolerance absorbing square-root and accumulation rounding in the
/// apparent-power feasibility check (kVA^2, absolute).
inline constexpr double kApparentPowerTol = 1e-9;

/// Battery plus converter ratings. Charge level `b` lives in [b_min, b_max];
/// ramp rates are grid-agnostic stored-energy rates (kW); efficiencies map
/// stored energy to grid-side energy.
struct BatterySpec {
    std::string name;
    double b_rated = 0.0; // kWh
    double b_min = 0.0;   // kWh
    double b_max = 0.0;   // kWh
    double delta_min = 0.0; // kW, < 0, max discharge rate
    double delta_max = 0.0; // kW, > 0, max charge rate
    double eta_ch = 1.0;
    double eta_dis = 1.0;
    double s_b_max = 0.0; // kVA converter rating
    double purchase_cost = 0.0; // USD
    double rated_cycles = 0.0;
    double calendar_life_years = 0.0;

    double soc_min() const { return b_rated > 0.0 ? b_min / b_rated : 0.0; }
    double soc_max() const { return b_rated > 0.0 ? b_max / b_rated : 0.0; }
    double usable_kwh() const { return b_max - b_min; }

    void validate() const;
};

/// One dispatch step: stored-energy delta, grid-side battery powers, and the
/// resulting charge level.
struct DispatchStep {
    double x_kwh = 0.0;
    double p_b_kw = 0.0;
    double q_b_kvar = 0.0;
    double b_kwh = 0.0;
};

/// Hours to charge the full usable window at delta_max.
double full_charge_time(const BatterySpec& spec);
/// Hours to discharge the full usable window at |delta_min|.
double full_discharge_time(const BatterySpec& spec);

/// Grid-side active power for a stored-energy delta x over h hours:
/// charging draws x/(h*eta_ch), discharging returns |x|*eta_dis/h.
/// Throws ConstraintError if x/h violates the ramp bounds.
double grid_power_of_delta(double x_kwh, double h_hours, const BatterySpec& spec);

/// Inverse of grid_power_of_delta: stored-energy delta realizing a grid-side
/// power (used when the converter rating clips the schedule).
double delta_of_grid_power(double p_kw, double h_hours, const BatterySpec& spec);

/// Reactive capability left at active output p_b: sqrt(s_max^2 - p_b^2).
/// Throws ConstraintError when |p_b| exceeds the converter rating.
double reactive_headroom(double p_b_kw, const BatterySpec& spec);

/// Signed power factor p/sqrt(p^2+q^2). Throws DomainError at (0,0).
double power_factor(double p_kw, double q_kvar);

/// True when p^2 + q^2 <= s_max^2 + tolerance.
bool apparent_power_ok(double p_kw, double q_kvar, const BatterySpec& spec);

} // namespace lvstor
