#pragma once

#include "lvstor/battery.hpp"
#include "lvstor/tariff.hpp"

namespace lvstor {

/// Relationship between the tariff's period windows and the battery's full
/// charge/discharge times. Case1: full cycle fits both windows. Case2: peak too
/// short to empty. Case3: off-peak too short to fill. Case4: neither fits.
enum class RampRegime { Case1, Case2, Case3, Case4 };

const char* to_string(RampRegime regime);

/// Per-step controller inputs. The charge-level thread of state is owned by
/// the caller (the simulator); the controller itself is stateless.
struct ControlContext {
    ContractKind kind = ContractKind::C1;
    bool nem = false;
    Period period = Period::OffPeak;
    double t_peak_h = 0.0;
    double t_midpeak_h = 0.0;
    double t_offpeak_h = 0.0;
    double charge_level = 0.0; // b_{i-1}, kWh
    double net_load_kw = 0.0;  // demand - generation
    double reactive_kvar = 0.0;
    double step_hours = 1.0;
};

/// Classifies the ramp regime from the charging/discharging windows.
/// Equality at a boundary falls on the "window too short" side; the dispatch
/// is identical there either way.
RampRegime classify_regime(const BatterySpec& spec, double t_offpeak_h, double t_peak_h);

/// Threshold arbitrage ramp for ToU contracts (kW, signed). Mid-peak steps
/// return zero; peak/off-peak ramps spread the usable window over the period
/// when the regime allows, saturate otherwise, and always respect capacity.
double arbitrage_delta(const BatterySpec& spec, const ControlContext& ctx, RampRegime regime);

/// Greedy self-consumption stored-energy delta for C1 without net metering
/// (kWh): discharge to cover load, charge to absorb surplus. Throws
/// PolicyError when called with net metering enabled.
double self_consumption_delta(const BatterySpec& spec, const ControlContext& ctx);

/// Reactive compensation from leftover converter headroom. C2/C3 compensate
/// the full reactive load when headroom allows; C1 corrects only down to the
/// instantaneous ratio 0.426 (power factor 0.92), fully when no active power
/// flows. `p_total_kw` is the grid-side total active power (load + battery).
double reactive_dispatch(const BatterySpec& spec, double p_b_kw, double p_total_kw,
                         double q_load_kvar, ContractKind kind);

/// A pure-arbitrage run of the threshold policy over an explicit price/period
/// sequence (no load, no reactive, no converter clip). Used by the oracle
/// comparison and tests; profit is measured by the storage-only objective
/// -sum(P_B * price * h).
struct ArbitrageRun {
    std::vector<double> x_kwh;     // per-step stored deltas
    std::vector<double> p_b_kw;    // per-step grid powers
    double profit = 0.0;
    double b_final = 0.0;
    double stress = 0.0; // sum of squared ramp rates
};

ArbitrageRun run_threshold_arbitrage(const BatterySpec& spec,
                                     const std::vector<double>& price,
                                     const std::vector<Period>& period, double t_peak_h,
                                     double t_offpeak_h, double h_hours, double b0_kwh);

} // namespace lvstor
