#include "lvstor/econ.hpp"

#include <algorithm>
#include <cmath>

namespace lvstor {

double arbitrage_gain_per_day(const BatterySpec& spec, double lambda_peak,
                              double lambda_offpeak) {
    return spec.usable_kwh() * (lambda_peak * spec.eta_dis - lambda_offpeak / spec.eta_ch);
}

bool arbitrage_profitable(double p_buy, double p_sell, double eta_ch, double eta_dis) {
    return p_sell * eta_dis > p_buy / eta_ch;
}

EconReport cycle_economics(const BatterySpec& spec, double monthly_gain, double fx_rate,
                           int days, std::optional<double> cycles_override) {
    EconReport rep;
    rep.monthly_gain = monthly_gain;
    rep.cycles_per_month =
        cycles_override.value_or((spec.soc_max() - spec.soc_min()) * days);
    if (rep.cycles_per_month <= 0.0)
        throw DomainError("cycle economics undefined for zero operating cycles");
    rep.cycles_per_day = rep.cycles_per_month / days;
    rep.gain_per_cycle = monthly_gain * fx_rate / rep.cycles_per_month;
    rep.required_per_cycle =
        spec.rated_cycles > 0.0 ? spec.purchase_cost / spec.rated_cycles : 0.0;
    rep.profitable = rep.gain_per_cycle > rep.required_per_cycle;
    if (rep.profitable && monthly_gain > 0.0) {
        const double months = spec.purchase_cost / (monthly_gain * fx_rate);
        const int rounded = static_cast<int>(std::ceil(months));
        if (rounded <= spec.calendar_life_years * 12.0) rep.payback_months = rounded;
    }
    return rep;
}

std::vector<RecommendationRow> recommend_contract(const LoadProfile& profile,
                                                  const std::vector<BatterySpec>& specs,
                                                  const std::vector<TariffContract>& contracts,
                                                  const SimulationConfig& cfg) {
    if (contracts.empty()) throw ConfigError("recommendation needs at least one contract");
    std::vector<BatchJob> jobs;
    for (const TariffContract& contract : contracts) {
        if (specs.empty()) {
            jobs.push_back({&profile, &contract, nullptr, cfg});
            continue;
        }
        for (const BatterySpec& spec : specs)
            jobs.push_back({&profile, &contract, &spec, cfg});
    }
    const std::vector<BatchCell> cells = run_batch(jobs);

    std::vector<RecommendationRow> rows;
    rows.reserve(cells.size());
    for (const BatchCell& cell : cells)
        rows.push_back({cell.contract_name, cell.battery_name, cell.total_cost, cell.profit,
                        cell.stress, cell.error});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RecommendationRow& a, const RecommendationRow& b) {
                         if (a.error.empty() != b.error.empty()) return a.error.empty();
                         if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
                         return a.stress < b.stress;
                     });
    return rows;
}

} // namespace lvstor
