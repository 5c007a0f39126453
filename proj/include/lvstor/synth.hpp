#pragma once

#include <string>

#include "lvstor/profile.hpp"

namespace lvstor {

/// Synthetic flat per-period consumer: monthly energies are spread uniformly
/// over the three-level ToU hour bands (off-peak 00-07, mid-peak 07-17 and
/// 23-24, peak 17-23). Reactive power has constant magnitude with a short
/// negative window each day sized so that the monthly absolute reactive
/// aggregate is `erq1_factor` times the signed one.
struct SynthSpec {
    int days = 30;
    double h_hours = 1.0;
    double peak_kwh = 200.0;    // per month
    double midpeak_kwh = 200.0; // per month
    double offpeak_kwh = 100.0; // per month
    double reactive_share = 0.0; // target E_r / E_a
    double erq1_factor = 1.2;    // target E_rQ1 / E_r
    std::string start = "2019-04-01T00:00:00";
};

LoadProfile make_synthetic_profile(const SynthSpec& spec);

} // namespace lvstor
