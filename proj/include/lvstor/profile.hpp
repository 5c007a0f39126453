#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lvstor/battery.hpp"
#include "lvstor/errors.hpp"

namespace lvstor {

/// Fixed-step time series of demand, local generation, and reactive power.
struct LoadProfile {
    std::vector<int64_t> epoch_s; // naive UTC seconds per step start
    double step_hours = 1.0;
    std::vector<double> demand_kw;
    std::vector<double> generation_kw;
    std::vector<double> reactive_kvar;

    size_t size() const { return epoch_s.size(); }
    double net_load_kw(size_t i) const { return demand_kw[i] - generation_kw[i]; }
    int hour_of_step(size_t i) const {
        int64_t sod = ((epoch_s[i] % 86400) + 86400) % 86400;
        return static_cast<int>(sod / 3600);
    }
};

/// Parses "YYYY-MM-DDTHH:MM:SS" (a single space also accepted as separator,
/// optional trailing 'Z') into naive UTC epoch seconds.
int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(int64_t epoch_s);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Reads a load profile CSV with header
/// `timestamp,demand_kw,generation_kw,reactive_kvar`; the step is inferred
/// from the first two rows and validated against every subsequent row.
/// Throws DataError naming file and line on any defect.
LoadProfile load_profile_csv(const std::string& path);

void write_profile_csv(const std::string& path, const LoadProfile& profile);

/// Schedule CSV with header `timestamp,x_kwh,p_b_kw,q_b_kw,b_kwh`; doubles are
/// emitted in round-trippable form so re-ingestion is bit-exact.
void write_schedule_csv(const std::string& path, const LoadProfile& profile,
                        const std::vector<DispatchStep>& steps);

std::vector<DispatchStep> load_schedule_csv(const std::string& path);

} // namespace lvstor
