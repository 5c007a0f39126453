#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lvstor/errors.hpp"

namespace lvstor {

enum class ContractKind { C1, C2, C3 };

enum class Period { Peak, MidPeak, OffPeak };

const char* to_string(ContractKind kind);
const char* to_string(Period period);

/// Monthly reactive-to-active energy ratio at which the reactive surcharge
/// starts (power factor 0.92) and at which the steeper second slope kicks
/// in (power factor ~0.82).
inline constexpr double kRatioPenaltyFree = 0.426;
inline constexpr double kRatioHighPenalty = 0.7;

/// C1 surcharge slopes below/above the second breakpoint.
inline constexpr double kC1SlopeLow = 0.4;
inline constexpr double kC1SlopeExtra = 0.6;

/// One tier of the C1 block rate. `upto_kwh` is the block's inclusive upper
/// bound in kWh of monthly consumption; the final tier uses +infinity.
struct BlockTier {
    double upto_kwh = 0.0;
    double price = 0.0; // peso/kWh
};

/// Admissible contracted-power levels for single-phase LV consumers (kW).
inline constexpr std::array<double, 4> kSinglePhasePowersKw = {3.7, 4.6, 7.4, 9.2};
/// Admissible contracted-power levels for three-phase LV consumers (kW);
/// the range 41-50 kW is also admissible but exceeds every residential
/// contract's 40 kW cap.
inline constexpr std::array<double, 6> kThreePhasePowersKw = {12.0, 20.0, 25.0, 30.0, 35.0, 40.0};

/// Reactive surcharge coefficient for C3 by supply voltage (kV).
double c3_surcharge_for_voltage(double voltage_kv);

/// A residential electricity contract: energy prices, hour-of-day period
/// schedule, fixed and power charges, reactive surcharge coefficient, and the
/// net-metering flag.
struct TariffContract {
    std::string name;
    ContractKind kind = ContractKind::C1;

    // C1 pricing. Block tiers are the default billing mode; `flat_rate` is the
    // alternative single-rate reading selected by `use_flat_rate`.
    std::vector<BlockTier> energy_blocks;
    std::optional<double> flat_rate; // peso/kWh
    bool use_flat_rate = false;

    // C2/C3 pricing (C2 leaves price_midpeak unused; mid-labelled hours are
    // billed at the off-peak rate).
    double price_peak = 0.0;
    double price_midpeak = 0.0;
    double price_offpeak = 0.0;

    std::array<Period, 24> period_schedule{}; // hour-of-day -> period

    double power_charge_rate = 0.0;    // peso/kW
    double fixed_monthly_charge = 0.0; // peso
    double surcharge_coefficient = 0.0; // percent operand B (C2) or A (C3)
    double contracted_power = 0.0;     // kW
    int phases = 1;                    // 1 or 3
    bool nem_enabled = false;

    // When true, C3 reactive cost is billed against the total per-period
    // absolute energy instead of the peak-only base.
    bool reactive_base_total = false;

    Period period_at(int hour) const { return period_schedule[static_cast<size_t>(hour % 24)]; }
    double price_for(Period p) const;

    /// Total hours per day labelled peak.
    double peak_hours() const;
    /// Total hours per day labelled mid-peak.
    double midpeak_hours() const;
    /// Length of the contiguous off-peak block starting at midnight; this is
    /// the charging window the threshold controller spreads over.
    double offpeak_block_hours() const;

    /// Structural invariants; throws ConfigError on violation.
    void validate() const;
};

/// Fills the schedule with a single off-peak label (used for C1, which has no
/// time-of-use structure).
std::array<Period, 24> uniform_offpeak_schedule();

/// Monthly energy aggregates feeding the bill. Active energies are signed
/// (exports are negative under net metering); `er_q1` accumulates per-step
/// absolute reactive energy.
struct EnergyAggregates {
    double ea_peak = 0.0;
    double ea_midpeak = 0.0;
    double ea_offpeak = 0.0;
    double er = 0.0;    // signed kVARh
    double er_q1 = 0.0; // sum of |q*h|, kVARh

    double ea() const { return ea_peak + ea_midpeak + ea_offpeak; }
    double ea_plus_peak() const { return std::abs(ea_peak); }
    double ea_plus_midpeak() const { return std::abs(ea_midpeak); }
    double ea_plus_offpeak() const { return std::abs(ea_offpeak); }
    double ea_plus() const { return ea_plus_peak() + ea_plus_midpeak() + ea_plus_offpeak(); }

    bool empty() const {
        return ea_peak == 0.0 && ea_midpeak == 0.0 && ea_offpeak == 0.0 && er == 0.0 &&
               er_q1 == 0.0;
    }

    /// Accumulates one step of grid-side active power. Without net metering,
    /// exported energy is curtailed (no credit).
    void add_active(Period period, double p_kw, double h_hours, bool nem);
    /// Accumulates one step of grid-side reactive power.
    void add_reactive(double q_kvar, double h_hours);
};

struct MonthlyBill {
    double c_fixed = 0.0;
    double c_power = 0.0;
    double c_active = 0.0;
    double c_reactive = 0.0;
    double kfac = 0.0;

    double c_total() const { return c_fixed + c_power + c_active + c_reactive; }
    double c_variable() const { return c_active + c_reactive; }
};

/// Reactive surcharge (or bonus) coefficient. The ratio is E_r/E_a for C1 and
/// C2 and E_rQ1/E_a+ for C3. Throws DomainError when the denominator energy is
/// not positive.
double compute_kfac(const TariffContract& contract, const EnergyAggregates& agg);

/// Monthly power factor cos(arctan(reactive/active)); C3 uses the
/// absolute-value aggregates. Throws DomainError when the active aggregate is
/// not positive.
double monthly_power_factor(const EnergyAggregates& agg, ContractKind kind);

/// Active-energy component of the bill. Signed aggregates yield symmetric
/// credit under net metering.
double active_energy_cost(const TariffContract& contract, const EnergyAggregates& agg);

/// Reactive component: kfac * E_r (C1), kfac * Ea_peak (C2), kfac * Ea+_peak
/// (C3; or Ea+ total when reactive_base_total is set).
double reactive_energy_cost(const TariffContract& contract, const EnergyAggregates& agg,
                            double kfac);

/// Assembles the four bill components. A month with no energy at all bills
/// only the fixed and power components (kfac left at zero); otherwise a
/// degenerate active aggregate surfaces as compute_kfac's DomainError.
MonthlyBill total_bill(const TariffContract& contract, const EnergyAggregates& agg);

} // namespace lvstor
