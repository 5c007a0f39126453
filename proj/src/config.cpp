#include "lvstor/config.hpp"

#include <fstream>
#include <limits>

#include <json.hpp>

namespace lvstor {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    try {
        return json::parse(in, nullptr, true, true); // allow comments
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

double require_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(path + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

void apply_ranges(std::array<Period, 24>& sched, const json& ranges, Period period,
                  const std::string& path) {
    for (const json& r : ranges) {
        if (!r.is_array() || r.size() != 2)
            throw ConfigError(path + ": period ranges must be [start_hour, end_hour) pairs");
        const int lo = r[0].get<int>();
        const int hi = r[1].get<int>();
        if (lo < 0 || hi > 24 || lo >= hi)
            throw ConfigError(path + ": period range must satisfy 0 <= start < end <= 24");
        for (int h = lo; h < hi; ++h) sched[static_cast<size_t>(h)] = period;
    }
}

} // namespace

TariffContract load_tariff(const std::string& path) {
    const json j = load_json(path);
    TariffContract c;
    c.name = j.value("name", std::string{});

    const std::string kind = j.value("kind", std::string{});
    if (kind == "C1")
        c.kind = ContractKind::C1;
    else if (kind == "C2")
        c.kind = ContractKind::C2;
    else if (kind == "C3")
        c.kind = ContractKind::C3;
    else
        throw ConfigError(path + ": field 'kind' must be C1, C2 or C3");
    if (c.name.empty()) c.name = kind;

    c.power_charge_rate = require_number(j, "power_charge_rate", path);
    c.fixed_monthly_charge = require_number(j, "fixed_monthly_charge", path);
    c.contracted_power = require_number(j, "contracted_power_kw", path);
    c.phases = j.value("phases", 1);
    c.nem_enabled = j.value("nem", false);

    if (c.kind == ContractKind::C1) {
        c.period_schedule = uniform_offpeak_schedule();
        if (j.contains("energy_blocks")) {
            for (const json& b : j["energy_blocks"]) {
                BlockTier tier;
                tier.upto_kwh = b.contains("upto_kwh")
                                    ? b["upto_kwh"].get<double>()
                                    : std::numeric_limits<double>::infinity();
                tier.price = require_number(b, "price", path);
                c.energy_blocks.push_back(tier);
            }
        }
        if (j.contains("flat_rate")) c.flat_rate = j["flat_rate"].get<double>();
        c.use_flat_rate = j.value("use_flat_rate", false);
    } else {
        if (!j.contains("prices") || !j["prices"].is_object())
            throw ConfigError(path + ": missing 'prices' object");
        const json& p = j["prices"];
        c.price_peak = require_number(p, "peak", path);
        c.price_offpeak = require_number(p, "offpeak", path);
        if (c.kind == ContractKind::C3) c.price_midpeak = require_number(p, "midpeak", path);

        if (!j.contains("period_schedule") || !j["period_schedule"].is_object())
            throw ConfigError(path + ": missing 'period_schedule' object");
        const json& s = j["period_schedule"];
        c.period_schedule = uniform_offpeak_schedule();
        if (s.contains("offpeak")) apply_ranges(c.period_schedule, s["offpeak"], Period::OffPeak, path);
        if (s.contains("midpeak")) apply_ranges(c.period_schedule, s["midpeak"], Period::MidPeak, path);
        if (s.contains("peak")) apply_ranges(c.period_schedule, s["peak"], Period::Peak, path);

        if (j.contains("surcharge_coefficient"))
            c.surcharge_coefficient = j["surcharge_coefficient"].get<double>();
        else if (c.kind == ContractKind::C3 && j.contains("voltage_kv"))
            c.surcharge_coefficient = c3_surcharge_for_voltage(j["voltage_kv"].get<double>());
        else if (c.kind == ContractKind::C2)
            c.surcharge_coefficient = 36.0; // default; 34 applies to some contracts
        else
            throw ConfigError(path + ": C3 needs 'surcharge_coefficient' or 'voltage_kv'");
    }

    c.reactive_base_total = j.value("reactive_base_total", false);

    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return c;
}

BatterySpec load_battery(const std::string& path) {
    const json j = load_json(path);
    BatterySpec s;
    s.name = j.value("name", std::string{"battery"});
    s.b_rated = require_number(j, "b_rated_kwh", path);
    if (j.contains("b_min_kwh") || j.contains("b_max_kwh")) {
        s.b_min = require_number(j, "b_min_kwh", path);
        s.b_max = require_number(j, "b_max_kwh", path);
    } else {
        s.b_min = require_number(j, "soc_min", path) * s.b_rated;
        s.b_max = require_number(j, "soc_max", path) * s.b_rated;
    }
    s.delta_min = require_number(j, "delta_min_kw", path);
    s.delta_max = require_number(j, "delta_max_kw", path);
    s.eta_ch = require_number(j, "eta_ch", path);
    s.eta_dis = require_number(j, "eta_dis", path);
    s.s_b_max = require_number(j, "s_b_max_kva", path);
    s.purchase_cost = j.value("purchase_cost_usd", 0.0);
    s.rated_cycles = j.value("rated_cycles", 0.0);
    s.calendar_life_years = j.value("calendar_life_years", 0.0);
    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return s;
}

} // namespace lvstor
