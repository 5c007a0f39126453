#include "lvstor/controller.hpp"

#include <algorithm>
#include <cmath>

namespace lvstor {

const char* to_string(RampRegime regime) {
    switch (regime) {
    case RampRegime::Case1: return "Case1";
    case RampRegime::Case2: return "Case2";
    case RampRegime::Case3: return "Case3";
    case RampRegime::Case4: return "Case4";
    }
    return "?";
}

RampRegime classify_regime(const BatterySpec& spec, double t_offpeak_h, double t_peak_h) {
    const double t_ch = full_charge_time(spec);
    const double t_dis = full_discharge_time(spec);
    if (t_offpeak_h > t_ch && t_peak_h > t_dis) return RampRegime::Case1;
    if (t_offpeak_h > t_ch && t_peak_h < t_dis) return RampRegime::Case2;
    if (t_offpeak_h < t_ch && t_peak_h > t_dis) return RampRegime::Case3;
    return RampRegime::Case4;
}

double arbitrage_delta(const BatterySpec& spec, const ControlContext& ctx, RampRegime regime) {
    const double h = ctx.step_hours;
    switch (ctx.period) {
    case Period::MidPeak:
        return 0.0;
    case Period::Peak: {
        const double cap = (spec.b_min - ctx.charge_level) / h; // <= 0
        if (regime == RampRegime::Case1 || regime == RampRegime::Case3)
            return std::max({(spec.b_min - spec.b_max) / ctx.t_peak_h, cap, spec.delta_min});
        return std::max(spec.delta_min, cap);
    }
    case Period::OffPeak: {
        const double cap = (spec.b_max - ctx.charge_level) / h; // >= 0
        if (regime == RampRegime::Case1 || regime == RampRegime::Case2)
            return std::min({(spec.b_max - spec.b_min) / ctx.t_offpeak_h, cap, spec.delta_max});
        return std::min(spec.delta_max, cap);
    }
    }
    return 0.0;
}

double self_consumption_delta(const BatterySpec& spec, const ControlContext& ctx) {
    if (ctx.nem)
        throw PolicyError("self-consumption dispatch is undefined under net metering "
                          "(arbitrage at equal buy/sell prices cannot be profitable)");
    const double p = ctx.net_load_kw;
    const double h = ctx.step_hours;
    if (p >= 0.0) {
        // Discharge just enough to cover the load.
        return std::max({-p * h / spec.eta_dis, spec.delta_min * h,
                         spec.b_min - ctx.charge_level});
    }
    // Absorb the surplus.
    return std::min({-p * h * spec.eta_ch, spec.delta_max * h, spec.b_max - ctx.charge_level});
}

double reactive_dispatch(const BatterySpec& spec, double p_b_kw, double p_total_kw,
                         double q_load_kvar, ContractKind kind) {
    const double head = reactive_headroom(p_b_kw, spec);
    const double q_abs = std::abs(q_load_kvar);
    const double sign = q_load_kvar > 0.0 ? 1.0 : (q_load_kvar < 0.0 ? -1.0 : 0.0);
    if (kind != ContractKind::C1)
        return -sign * std::min(q_abs, head);
    // C1 consumers gain nothing above power factor 0.92; correct only down to
    // the ratio threshold. With no active flow any reactive energy is pure
    // penalty exposure, so compensate fully.
    const double target = kRatioPenaltyFree * std::abs(p_total_kw);
    if (q_abs <= target) return 0.0;
    return -sign * std::min(q_abs - target, head);
}

ArbitrageRun run_threshold_arbitrage(const BatterySpec& spec, const std::vector<double>& price,
                                     const std::vector<Period>& period, double t_peak_h,
                                     double t_offpeak_h, double h_hours, double b0_kwh) {
    const RampRegime regime = classify_regime(spec, t_offpeak_h, t_peak_h);
    ArbitrageRun run;
    run.x_kwh.reserve(price.size());
    run.p_b_kw.reserve(price.size());
    double b = b0_kwh;
    for (size_t i = 0; i < price.size(); ++i) {
        ControlContext ctx;
        ctx.period = period[i];
        ctx.t_peak_h = t_peak_h;
        ctx.t_offpeak_h = t_offpeak_h;
        ctx.charge_level = b;
        ctx.step_hours = h_hours;
        const double x = h_hours * arbitrage_delta(spec, ctx, regime);
        const double p_b = grid_power_of_delta(x, h_hours, spec);
        b += x;
        run.x_kwh.push_back(x);
        run.p_b_kw.push_back(p_b);
        run.profit -= p_b * price[i] * h_hours;
        run.stress += (x / h_hours) * (x / h_hours);
    }
    run.b_final = b;
    return run;
}

} // namespace lvstor
