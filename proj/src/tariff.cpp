#include "lvstor/tariff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvstor {

const char* to_string(ContractKind kind) {
    switch (kind) {
    case ContractKind::C1: return "C1";
    case ContractKind::C2: return "C2";
    case ContractKind::C3: return "C3";
    }
    return "?";
}

const char* to_string(Period period) {
    switch (period) {
    case Period::Peak: return "peak";
    case Period::MidPeak: return "midpeak";
    case Period::OffPeak: return "offpeak";
    }
    return "?";
}

double c3_surcharge_for_voltage(double voltage_kv) {
    if (voltage_kv >= 0.2 && voltage_kv <= 0.4) return 23.0;
    if (voltage_kv >= 6.4 && voltage_kv <= 22.0) return 18.0;
    if (voltage_kv > 22.0 && voltage_kv <= 31.5) return 12.0;
    throw ConfigError("no reactive surcharge coefficient defined for voltage level " +
                      std::to_string(voltage_kv) + " kV");
}

std::array<Period, 24> uniform_offpeak_schedule() {
    std::array<Period, 24> sched;
    sched.fill(Period::OffPeak);
    return sched;
}

double TariffContract::price_for(Period p) const {
    switch (kind) {
    case ContractKind::C1:
        return use_flat_rate && flat_rate ? *flat_rate : 0.0;
    case ContractKind::C2:
        // Mid-peak hours do not exist under C2; they bill at the off-peak rate.
        return p == Period::Peak ? price_peak : price_offpeak;
    case ContractKind::C3:
        if (p == Period::Peak) return price_peak;
        if (p == Period::MidPeak) return price_midpeak;
        return price_offpeak;
    }
    return 0.0;
}

double TariffContract::peak_hours() const {
    int n = 0;
    for (Period p : period_schedule)
        if (p == Period::Peak) ++n;
    return static_cast<double>(n);
}

double TariffContract::midpeak_hours() const {
    int n = 0;
    for (Period p : period_schedule)
        if (p == Period::MidPeak) ++n;
    return static_cast<double>(n);
}

double TariffContract::offpeak_block_hours() const {
    int n = 0;
    while (n < 24 && period_schedule[static_cast<size_t>(n)] == Period::OffPeak)
        ++n;
    return static_cast<double>(n);
}

namespace {

bool admissible_power(double p_kw, int phases) {
    constexpr double tol = 1e-6;
    if (phases == 1) {
        for (double level : kSinglePhasePowersKw)
            if (std::abs(p_kw - level) < tol) return true;
        return false;
    }
    for (double level : kThreePhasePowersKw)
        if (std::abs(p_kw - level) < tol) return true;
    return p_kw >= 41.0 - tol && p_kw <= 50.0 + tol;
}

} // namespace

void TariffContract::validate() const {
    if (power_charge_rate < 0 || fixed_monthly_charge < 0)
        throw ConfigError(name + ": fixed and power charges must be nonnegative");
    if (phases != 1 && phases != 3)
        throw ConfigError(name + ": phases must be 1 or 3");
    if (!admissible_power(contracted_power, phases))
        throw ConfigError(name + ": contracted power " + std::to_string(contracted_power) +
                          " kW is not an admissible " + std::to_string(phases) +
                          "-phase level");

    switch (kind) {
    case ContractKind::C1:
        if (contracted_power > 40.0)
            throw ConfigError(name + ": C1 requires contracted power <= 40 kW");
        if (energy_blocks.empty() && !flat_rate)
            throw ConfigError(name + ": C1 needs block tiers or a flat rate");
        if (use_flat_rate && !flat_rate)
            throw ConfigError(name + ": flat billing mode selected without a flat rate");
        if (flat_rate && *flat_rate < 0)
            throw ConfigError(name + ": flat rate must be nonnegative");
        {
            double prev = 0.0;
            for (size_t i = 0; i < energy_blocks.size(); ++i) {
                const BlockTier& t = energy_blocks[i];
                if (t.price < 0) throw ConfigError(name + ": block prices must be nonnegative");
                if (t.upto_kwh <= prev)
                    throw ConfigError(name + ": block bounds must be strictly increasing");
                prev = t.upto_kwh;
            }
            if (!energy_blocks.empty() && std::isfinite(energy_blocks.back().upto_kwh))
                throw ConfigError(name + ": last block tier must be unbounded");
        }
        break;
    case ContractKind::C2:
        if (!(contracted_power > 3.3) || contracted_power > 40.0)
            throw ConfigError(name + ": C2 requires contracted power in (3.3, 40] kW");
        if (price_peak < 0 || price_offpeak < 0)
            throw ConfigError(name + ": prices must be nonnegative");
        if (surcharge_coefficient <= 0 || surcharge_coefficient >= 100)
            throw ConfigError(name + ": C2 surcharge coefficient must be in (0, 100)");
        for (Period p : period_schedule)
            if (p == Period::MidPeak)
                throw ConfigError(name + ": C2 schedules have no mid-peak hours");
        break;
    case ContractKind::C3:
        if (!(contracted_power > 3.7) || contracted_power > 40.0)
            throw ConfigError(name + ": C3 requires contracted power in (3.7, 40] kW");
        if (price_peak < 0 || price_midpeak < 0 || price_offpeak < 0)
            throw ConfigError(name + ": prices must be nonnegative");
        if (surcharge_coefficient <= 0 || surcharge_coefficient >= 100)
            throw ConfigError(name + ": C3 surcharge coefficient must be in (0, 100)");
        break;
    }

    if (kind != ContractKind::C1) {
        if (peak_hours() < 1)
            throw ConfigError(name + ": schedule needs at least one peak hour");
        if (offpeak_block_hours() < 1)
            throw ConfigError(name + ": schedule must start the day off-peak");
    }
}

void EnergyAggregates::add_active(Period period, double p_kw, double h_hours, bool nem) {
    double e = p_kw * h_hours;
    if (!nem && e < 0.0) e = 0.0; // exports are uncompensated without net metering
    switch (period) {
    case Period::Peak: ea_peak += e; break;
    case Period::MidPeak: ea_midpeak += e; break;
    case Period::OffPeak: ea_offpeak += e; break;
    }
}

void EnergyAggregates::add_reactive(double q_kvar, double h_hours) {
    double e = q_kvar * h_hours;
    er += e;
    er_q1 += std::abs(e);
}

double compute_kfac(const TariffContract& contract, const EnergyAggregates& agg) {
    double num, den;
    if (contract.kind == ContractKind::C3) {
        num = agg.er_q1;
        den = agg.ea_plus();
    } else {
        num = agg.er;
        den = agg.ea();
    }
    if (den <= 0.0)
        throw DomainError(std::string("undefined power factor: ") +
                          (contract.kind == ContractKind::C3 ? "Ea+" : "Ea") +
                          " must be positive, got " + std::to_string(den));
    const double ratio = num / den;

    if (contract.kind == ContractKind::C1) {
        if (ratio <= kRatioPenaltyFree) return 0.0;
        double k = kC1SlopeLow * (ratio - kRatioPenaltyFree);
        if (ratio > kRatioHighPenalty) k += kC1SlopeExtra * (ratio - kRatioHighPenalty);
        return k;
    }
    const double b = contract.surcharge_coefficient / 100.0;
    double k = b * (ratio - kRatioPenaltyFree);
    if (ratio > kRatioHighPenalty) k += (1.0 - b) * (ratio - kRatioHighPenalty);
    return k;
}

double monthly_power_factor(const EnergyAggregates& agg, ContractKind kind) {
    double num, den;
    if (kind == ContractKind::C3) {
        num = agg.er_q1;
        den = agg.ea_plus();
    } else {
        num = agg.er;
        den = agg.ea();
    }
    if (den <= 0.0)
        throw DomainError("undefined power factor: active aggregate must be positive");
    const double ratio = num / den;
    return 1.0 / std::sqrt(1.0 + ratio * ratio);
}

namespace {

double block_cost(const std::vector<BlockTier>& tiers, double ea) {
    if (ea < 0.0) return -block_cost(tiers, -ea); // symmetric credit under NEM
    double cost = 0.0;
    double lower = 0.0;
    for (const BlockTier& t : tiers) {
        const double upper = std::min(ea, t.upto_kwh);
        if (upper > lower) cost += (upper - lower) * t.price;
        if (ea <= t.upto_kwh) break;
        lower = t.upto_kwh;
    }
    return cost;
}

} // namespace

double active_energy_cost(const TariffContract& contract, const EnergyAggregates& agg) {
    switch (contract.kind) {
    case ContractKind::C1:
        if (contract.use_flat_rate) {
            if (!contract.flat_rate)
                throw ConfigError(contract.name + ": flat billing mode without a flat rate");
            return *contract.flat_rate * agg.ea();
        }
        return block_cost(contract.energy_blocks, agg.ea());
    case ContractKind::C2:
        return contract.price_peak * agg.ea_peak +
               contract.price_offpeak * (agg.ea_midpeak + agg.ea_offpeak);
    case ContractKind::C3:
        return contract.price_peak * agg.ea_peak + contract.price_midpeak * agg.ea_midpeak +
               contract.price_offpeak * agg.ea_offpeak;
    }
    return 0.0;
}

double reactive_energy_cost(const TariffContract& contract, const EnergyAggregates& agg,
                            double kfac) {
    switch (contract.kind) {
    case ContractKind::C1: return kfac * agg.er;
    case ContractKind::C2: return kfac * agg.ea_peak;
    case ContractKind::C3:
        return kfac * (contract.reactive_base_total ? agg.ea_plus() : agg.ea_plus_peak());
    }
    return 0.0;
}

MonthlyBill total_bill(const TariffContract& contract, const EnergyAggregates& agg) {
    MonthlyBill bill;
    bill.c_fixed = contract.fixed_monthly_charge;
    bill.c_power = contract.power_charge_rate * contract.contracted_power;
    bill.c_active = active_energy_cost(contract, agg);
    if (agg.empty()) {
        // Nothing flowed this month; only the fixed components survive.
        bill.kfac = 0.0;
        bill.c_reactive = 0.0;
        return bill;
    }
    bill.kfac = compute_kfac(contract, agg);
    bill.c_reactive = reactive_energy_cost(contract, agg, bill.kfac);
    return bill;
}

} // namespace lvstor
