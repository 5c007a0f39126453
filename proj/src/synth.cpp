#include "lvstor/synth.hpp"

#include <cmath>

namespace lvstor {

LoadProfile make_synthetic_profile(const SynthSpec& spec) {
    if (spec.days <= 0) throw ConfigError("synthetic profile needs at least one day");
    if (spec.h_hours <= 0.0 || std::abs(24.0 / spec.h_hours - std::round(24.0 / spec.h_hours)) >
                                   1e-9)
        throw ConfigError("synthetic step must divide 24 h");
    if (spec.reactive_share < 0.0) throw ConfigError("reactive share must be nonnegative");
    if (spec.erq1_factor < 1.0)
        throw ConfigError("absolute reactive aggregate cannot be below the signed one");

    // Width of the daily negative-reactive window that realizes
    // E_rQ1 = erq1_factor * E_r with a constant reactive magnitude.
    const double neg_hours = 12.0 * (1.0 - 1.0 / spec.erq1_factor);
    if (std::abs(neg_hours / spec.h_hours - std::round(neg_hours / spec.h_hours)) > 1e-9)
        throw ConfigError("erq1_factor needs a negative-reactive window aligned to the step");

    const double peak_kw = spec.peak_kwh / (spec.days * 6.0);
    const double mid_kw = spec.midpeak_kwh / (spec.days * 11.0);
    const double off_kw = spec.offpeak_kwh / (spec.days * 7.0);
    const double ea_day = (spec.peak_kwh + spec.midpeak_kwh + spec.offpeak_kwh) / spec.days;
    const double q_mag = spec.erq1_factor * spec.reactive_share * ea_day / 24.0;

    LoadProfile profile;
    profile.step_hours = spec.h_hours;
    const int64_t start = parse_iso8601(spec.start);
    const int64_t step_s = static_cast<int64_t>(std::llround(spec.h_hours * 3600.0));
    const int steps_per_day = static_cast<int>(std::lround(24.0 / spec.h_hours));
    const int n = spec.days * steps_per_day;
    profile.epoch_s.reserve(static_cast<size_t>(n));

    for (int i = 0; i < n; ++i) {
        const int64_t t = start + static_cast<int64_t>(i) * step_s;
        const double hour = static_cast<double>(((t % 86400) + 86400) % 86400) / 3600.0;
        double demand;
        if (hour >= 17.0 && hour < 23.0)
            demand = peak_kw;
        else if (hour >= 7.0 && hour < 17.0)
            demand = mid_kw;
        else if (hour >= 23.0)
            demand = mid_kw;
        else
            demand = off_kw;
        // Negative window starts at 03:00.
        const bool negative = hour >= 3.0 && hour < 3.0 + neg_hours;
        profile.epoch_s.push_back(t);
        profile.demand_kw.push_back(demand);
        profile.generation_kw.push_back(0.0);
        profile.reactive_kvar.push_back(negative ? -q_mag : q_mag);
    }
    return profile;
}

} // namespace lvstor
