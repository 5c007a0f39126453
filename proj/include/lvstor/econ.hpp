#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lvstor/battery.hpp"
#include "lvstor/simulator.hpp"

namespace lvstor {

struct EconReport {
    double g_arb_per_day = 0.0;   // peso/day
    double monthly_gain = 0.0;    // peso
    double cycles_per_day = 0.0;
    double cycles_per_month = 0.0;
    double gain_per_cycle = 0.0;     // USD/cycle
    double required_per_cycle = 0.0; // USD/cycle, purchase cost over rated cycles
    bool profitable = false;
    std::optional<int> payback_months; // empty when unprofitable or beyond life
};

/// Closed-form daily arbitrage gain of one full usable-window cycle under a
/// two-price spread, net of efficiency losses. Negative means unprofitable.
double arbitrage_gain_per_day(const BatterySpec& spec, double lambda_peak,
                              double lambda_offpeak);

/// Profitability screen: selling at p_sell after buying at p_buy beats the
/// round-trip efficiency loss (strict inequality).
bool arbitrage_profitable(double p_buy, double p_sell, double eta_ch, double eta_dis);

/// Per-cycle economics of a monthly gain. Cycles default to
/// (SoC_max - SoC_min) * days; pass an override to pin a different count.
/// `fx_rate` converts the gain currency to the purchase-cost currency.
EconReport cycle_economics(const BatterySpec& spec, double monthly_gain, double fx_rate,
                           int days, std::optional<double> cycles_override = std::nullopt);

struct RecommendationRow {
    std::string contract_name;
    std::string battery_name; // empty = no battery
    double total_cost = 0.0;
    double profit = 0.0;
    double stress = 0.0;
    std::string error;
};

/// Simulates the full contract x battery cross product over one profile and
/// ranks by with-storage total cost ascending (ties broken by lower stress).
/// With no batteries the ranking is nominal-only. Failures are reported per
/// cell without aborting the batch.
std::vector<RecommendationRow> recommend_contract(const LoadProfile& profile,
                                                  const std::vector<BatterySpec>& specs,
                                                  const std::vector<TariffContract>& contracts,
                                                  const SimulationConfig& cfg);

} // namespace lvstor
