#include "lvstor/simulator.hpp"

#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lvstor {

void SimulationConfig::validate() const {
    if (h <= 0.0) throw ConfigError("step length must be positive");
    if (n_month <= 0) throw ConfigError("step count must be positive");
    if (days_in_month <= 0) throw ConfigError("days_in_month must be positive");
    const double horizon = h * n_month;
    const double month = days_in_month * 24.0;
    if (std::abs(horizon - month) > h + 1e-9) {
        std::ostringstream err;
        err << "h * n_month = " << horizon << " h does not cover a " << days_in_month
            << "-day month within one step";
        throw ConfigError(err.str());
    }
}

namespace {

struct StepDecision {
    double x = 0.0;
    double p_b = 0.0;
};

// Active decision, converter clip, and ledger correction for one step.
StepDecision decide_active(const TariffContract& contract, const BatterySpec& spec,
                           const ControlContext& ctx, RampRegime regime, bool paper_compat) {
    StepDecision d;
    if (contract.kind == ContractKind::C1) {
        // With net metering the equal buy/sell price makes arbitrage a strict
        // loss, so the battery stays idle on the active side.
        d.x = ctx.nem ? 0.0 : self_consumption_delta(spec, ctx);
    } else {
        d.x = ctx.step_hours * arbitrage_delta(spec, ctx, regime);
    }
    d.p_b = grid_power_of_delta(d.x, ctx.step_hours, spec);
    if (std::abs(d.p_b) > spec.s_b_max) {
        d.p_b = d.p_b > 0.0 ? spec.s_b_max : -spec.s_b_max;
        if (!paper_compat) d.x = delta_of_grid_power(d.p_b, ctx.step_hours, spec);
    }
    return d;
}

} // namespace

SimulationResult run_month(const LoadProfile& profile, const TariffContract& contract,
                           const BatterySpec& spec, const SimulationConfig& cfg) {
    cfg.validate();
    contract.validate();
    spec.validate();
    if (static_cast<int>(profile.size()) != cfg.n_month) {
        std::ostringstream err;
        err << "profile has " << profile.size() << " steps, config expects " << cfg.n_month;
        throw DataError(err.str());
    }
    if (std::abs(profile.step_hours - cfg.h) > 1e-9) {
        std::ostringstream err;
        err << "profile sampling " << profile.step_hours << " h does not match configured "
            << cfg.h << " h";
        throw DataError(err.str());
    }

    const double h = cfg.h;
    const double t_peak = contract.peak_hours();
    const double t_offpeak = contract.offpeak_block_hours();
    const double t_midpeak = contract.midpeak_hours();

    SimulationResult res;
    res.regime = contract.kind == ContractKind::C1
                     ? RampRegime::Case1
                     : classify_regime(spec, t_offpeak, t_peak);
    res.schedule.steps.reserve(profile.size());

    double b = cfg.b0.value_or(spec.b_min);
    if (b < spec.b_min - 1e-9 || b > spec.b_max + 1e-9)
        throw ConfigError("initial charge outside [b_min, b_max]");

    const double cap_tol = 1e-9 * std::max(1.0, spec.b_max);
    for (size_t i = 0; i < profile.size(); ++i) {
        ControlContext ctx;
        ctx.kind = contract.kind;
        ctx.nem = contract.nem_enabled;
        ctx.period = contract.period_at(profile.hour_of_step(i));
        ctx.t_peak_h = t_peak;
        ctx.t_midpeak_h = t_midpeak;
        ctx.t_offpeak_h = t_offpeak;
        ctx.charge_level = b;
        ctx.net_load_kw = profile.net_load_kw(i);
        ctx.reactive_kvar = profile.reactive_kvar[i];
        ctx.step_hours = h;

        const StepDecision d = decide_active(contract, spec, ctx, res.regime, cfg.paper_compat);
        const double p_total = ctx.net_load_kw + d.p_b;
        const double q_b = reactive_dispatch(spec, d.p_b, p_total, ctx.reactive_kvar,
                                             contract.kind);
        b += d.x;

        if (b < spec.b_min - cap_tol || b > spec.b_max + cap_tol) {
            std::ostringstream err;
            err << "step " << i << ": charge level " << b << " kWh escaped ["
                << spec.b_min << ", " << spec.b_max << "]";
            throw ConstraintError(err.str());
        }
        if (!apparent_power_ok(d.p_b, q_b, spec)) {
            std::ostringstream err;
            err << "step " << i << ": apparent power exceeds converter rating";
            throw ConstraintError(err.str());
        }

        res.nominal_agg.add_active(ctx.period, ctx.net_load_kw, h, contract.nem_enabled);
        res.nominal_agg.add_reactive(ctx.reactive_kvar, h);
        res.storage_agg.add_active(ctx.period, p_total, h, contract.nem_enabled);
        res.storage_agg.add_reactive(ctx.reactive_kvar + q_b, h);

        res.schedule.steps.push_back({d.x, d.p_b, q_b, b});
        res.schedule.stress += (d.x / h) * (d.x / h);
    }

    res.nominal_bill = total_bill(contract, res.nominal_agg);
    res.storage_bill = total_bill(contract, res.storage_agg);
    res.profit = res.nominal_bill.c_total() - res.storage_bill.c_total();
    res.arbitrage_gain = res.nominal_bill.c_active - res.storage_bill.c_active;
    res.reactive_gain = res.nominal_bill.c_reactive - res.storage_bill.c_reactive;
    return res;
}

EnergyAggregates aggregate_profile(const LoadProfile& profile, const TariffContract& contract) {
    EnergyAggregates agg;
    for (size_t i = 0; i < profile.size(); ++i) {
        const Period period = contract.period_at(profile.hour_of_step(i));
        agg.add_active(period, profile.net_load_kw(i), profile.step_hours,
                       contract.nem_enabled);
        agg.add_reactive(profile.reactive_kvar[i], profile.step_hours);
    }
    return agg;
}

EnergyAggregates aggregate_with_schedule(const LoadProfile& profile,
                                         const std::vector<DispatchStep>& steps,
                                         const TariffContract& contract) {
    if (steps.size() != profile.size())
        throw DataError("schedule length does not match profile");
    EnergyAggregates agg;
    for (size_t i = 0; i < profile.size(); ++i) {
        const Period period = contract.period_at(profile.hour_of_step(i));
        agg.add_active(period, profile.net_load_kw(i) + steps[i].p_b_kw, profile.step_hours,
                       contract.nem_enabled);
        agg.add_reactive(profile.reactive_kvar[i] + steps[i].q_b_kvar, profile.step_hours);
    }
    return agg;
}

std::vector<BatchCell> run_batch(const std::vector<BatchJob>& jobs) {
    std::vector<BatchCell> cells(jobs.size());
    const int n = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const BatchJob& job = jobs[static_cast<size_t>(i)];
        BatchCell& cell = cells[static_cast<size_t>(i)];
        cell.contract_name = job.contract->name;
        try {
            if (job.spec) {
                cell.battery_name = job.spec->name;
                const SimulationResult r = run_month(*job.profile, *job.contract, *job.spec,
                                                     job.cfg);
                cell.total_cost = r.storage_bill.c_total();
                cell.profit = r.profit;
                cell.stress = r.schedule.stress;
            } else {
                job.contract->validate();
                const EnergyAggregates agg = aggregate_profile(*job.profile, *job.contract);
                cell.total_cost = total_bill(*job.contract, agg).c_total();
            }
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    }
    return cells;
}

} // namespace lvstor
