#pragma once

#include <limits>

#include "lvstor/battery.hpp"
#include "lvstor/simulator.hpp"
#include "lvstor/synth.hpp"
#include "lvstor/tariff.hpp"

namespace lvstor::testing {

inline TariffContract make_c1(double contracted_kw = 3.7) {
    TariffContract c;
    c.name = "c1";
    c.kind = ContractKind::C1;
    c.energy_blocks = {{100.0, 5.160},
                       {600.0, 6.470},
                       {std::numeric_limits<double>::infinity(), 8.065}};
    c.flat_rate = 5.160;
    c.period_schedule = uniform_offpeak_schedule();
    c.power_charge_rate = 61.6;
    c.fixed_monthly_charge = 198.9;
    c.contracted_power = contracted_kw;
    c.nem_enabled = false;
    return c;
}

inline std::array<Period, 24> two_level_schedule() {
    auto sched = uniform_offpeak_schedule();
    for (int h = 17; h < 23; ++h) sched[static_cast<size_t>(h)] = Period::Peak;
    return sched;
}

inline std::array<Period, 24> three_level_schedule() {
    auto sched = two_level_schedule();
    for (int h = 7; h < 17; ++h) sched[static_cast<size_t>(h)] = Period::MidPeak;
    sched[23] = Period::MidPeak;
    return sched;
}

inline TariffContract make_c2(double contracted_kw = 4.6) {
    TariffContract c;
    c.name = "c2";
    c.kind = ContractKind::C2;
    c.price_peak = 8.623;
    c.price_offpeak = 3.453;
    c.period_schedule = two_level_schedule();
    c.power_charge_rate = 61.6;
    c.fixed_monthly_charge = 359.4;
    c.surcharge_coefficient = 36.0;
    c.contracted_power = contracted_kw;
    c.nem_enabled = true;
    return c;
}

inline TariffContract make_c3(double contracted_kw = 4.6) {
    TariffContract c;
    c.name = "c3";
    c.kind = ContractKind::C3;
    c.price_peak = 8.623;
    c.price_midpeak = 4.676;
    c.price_offpeak = 1.803;
    c.period_schedule = three_level_schedule();
    c.power_charge_rate = 61.6;
    c.fixed_monthly_charge = 359.4;
    c.surcharge_coefficient = 23.0;
    c.contracted_power = contracted_kw;
    c.nem_enabled = true;
    return c;
}

inline BatterySpec make_pw1() {
    BatterySpec s;
    s.name = "pw1";
    s.b_rated = 6.4;
    s.b_min = 0.2 * 6.4;
    s.b_max = 0.98 * 6.4;
    s.delta_min = -3.3;
    s.delta_max = 3.3;
    s.eta_ch = 0.95;
    s.eta_dis = 0.95;
    s.s_b_max = 3.3;
    s.purchase_cost = 3000.0;
    s.rated_cycles = 3000.0;
    s.calendar_life_years = 10.0;
    return s;
}

inline BatterySpec make_pw2() {
    BatterySpec s;
    s.name = "pw2";
    s.b_rated = 13.5;
    s.b_min = 0.2 * 13.5;
    s.b_max = 0.98 * 13.5;
    s.delta_min = -5.0;
    s.delta_max = 5.0;
    s.eta_ch = 0.95;
    s.eta_dis = 0.95;
    s.s_b_max = 5.0;
    s.purchase_cost = 5500.0;
    s.rated_cycles = 3000.0;
    s.calendar_life_years = 10.0;
    return s;
}

inline BatterySpec make_null_battery() {
    BatterySpec s;
    s.name = "null";
    s.b_rated = 1.0;
    s.b_min = 0.0;
    s.b_max = 0.0;
    s.delta_min = -1.0;
    s.delta_max = 1.0;
    s.s_b_max = 0.0;
    return s;
}

inline LoadProfile synth_month(double reactive_share, int days = 30) {
    SynthSpec spec;
    spec.days = days;
    spec.reactive_share = reactive_share;
    return make_synthetic_profile(spec);
}

inline SimulationConfig month_config(const LoadProfile& profile, int days = 30) {
    SimulationConfig cfg;
    cfg.h = profile.step_hours;
    cfg.n_month = static_cast<int>(profile.size());
    cfg.days_in_month = days;
    return cfg;
}

} // namespace lvstor::testing
