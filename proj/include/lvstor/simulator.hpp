#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvstor/battery.hpp"
#include "lvstor/controller.hpp"
#include "lvstor/profile.hpp"
#include "lvstor/tariff.hpp"

namespace lvstor {

struct SimulationConfig {
    double h = 1.0;            // hours per step
    int n_month = 720;         // steps per month
    std::optional<double> b0;  // initial charge (kWh), defaults to b_min
    int days_in_month = 30;
    // Reproduces the reference pseudocode's converter clipping, which clips
    // the grid power but leaves the charge ledger updated by the unclipped
    // delta. Default recomputes the stored delta from the clipped power so
    // the ledger matches physical flow.
    bool paper_compat = false;

    void validate() const;
};

struct DispatchSchedule {
    std::vector<DispatchStep> steps;
    double stress = 0.0; // sum of squared ramp rates (kW^2), diagnostic only
};

struct SimulationResult {
    DispatchSchedule schedule;
    EnergyAggregates nominal_agg;
    EnergyAggregates storage_agg;
    MonthlyBill nominal_bill;
    MonthlyBill storage_bill;
    double profit = 0.0;         // nominal total - storage total
    double arbitrage_gain = 0.0; // nominal active cost - storage active cost
    double reactive_gain = 0.0;  // nominal reactive cost - storage reactive cost
    RampRegime regime = RampRegime::Case1;
};

/// Runs one month of hierarchical dispatch: active threshold control first,
/// reactive compensation from leftover converter headroom second, aggregation
/// for both the nominal and with-storage cases, then bills and profit.
SimulationResult run_month(const LoadProfile& profile, const TariffContract& contract,
                           const BatterySpec& spec, const SimulationConfig& cfg);

/// Nominal-only aggregation of a profile under a contract's period schedule.
EnergyAggregates aggregate_profile(const LoadProfile& profile, const TariffContract& contract);

/// Aggregation of profile plus an explicit dispatch schedule; used to re-bill
/// a schedule CSV. Accumulates in the same order as run_month so a round trip
/// through the CSV reproduces the bill bit-exactly.
EnergyAggregates aggregate_with_schedule(const LoadProfile& profile,
                                         const std::vector<DispatchStep>& steps,
                                         const TariffContract& contract);

/// One cell of a batch run; `error` is set instead of aborting the batch.
struct BatchJob {
    const LoadProfile* profile = nullptr;
    const TariffContract* contract = nullptr;
    const BatterySpec* spec = nullptr; // null battery when absent
    SimulationConfig cfg;
};

struct BatchCell {
    std::string contract_name;
    std::string battery_name; // empty when no battery
    double total_cost = 0.0;
    double profit = 0.0;
    double stress = 0.0;
    std::string error;
};

/// Executes independent simulations in parallel; cells never share state.
std::vector<BatchCell> run_batch(const std::vector<BatchJob>& jobs);

} // namespace lvstor
