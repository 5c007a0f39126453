#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvstor/config.hpp"
#include "lvstor/econ.hpp"
#include "lvstor/oracle.hpp"
#include "lvstor/simulator.hpp"
#include "lvstor/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lvstor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitVerify = 4;

json bill_to_json(const MonthlyBill& bill) {
    return json{{"fixed", bill.c_fixed},         {"power", bill.c_power},
                {"active", bill.c_active},       {"reactive", bill.c_reactive},
                {"variable", bill.c_variable()}, {"total", bill.c_total()},
                {"kfac", bill.kfac}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << text;
}

// Returns a copy of the profile whose signed reactive aggregate is
// share * E_a: scales the existing reactive shape when there is one, injects
// the synthetic constant-magnitude pattern otherwise.
LoadProfile with_reactive_share(const LoadProfile& base, double share, double erq1_factor) {
    LoadProfile out = base;
    double ea = 0.0, er = 0.0;
    for (size_t i = 0; i < base.size(); ++i) {
        ea += base.net_load_kw(i) * base.step_hours;
        er += base.reactive_kvar[i] * base.step_hours;
    }
    if (std::abs(er) > 1e-12) {
        const double scale = share * ea / er;
        for (double& q : out.reactive_kvar) q *= scale;
        return out;
    }
    const double days = base.size() * base.step_hours / 24.0;
    const double q_mag = erq1_factor * share * (ea / days) / 24.0;
    const double neg_hours = 12.0 * (1.0 - 1.0 / erq1_factor);
    for (size_t i = 0; i < base.size(); ++i) {
        const double hour =
            static_cast<double>(((base.epoch_s[i] % 86400) + 86400) % 86400) / 3600.0;
        const bool negative = hour >= 3.0 && hour < 3.0 + neg_hours;
        out.reactive_kvar[i] = negative ? -q_mag : q_mag;
    }
    return out;
}

SimulationConfig config_for(const LoadProfile& profile, int days, bool paper_compat) {
    SimulationConfig cfg;
    cfg.h = profile.step_hours;
    cfg.n_month = static_cast<int>(profile.size());
    cfg.days_in_month = days;
    cfg.paper_compat = paper_compat;
    return cfg;
}

BatterySpec null_battery() {
    BatterySpec spec;
    spec.name = "none";
    spec.b_rated = 1.0;
    spec.b_min = 0.0;
    spec.b_max = 0.0;
    spec.delta_min = -1.0;
    spec.delta_max = 1.0;
    spec.s_b_max = 0.0;
    return spec;
}

int cmd_simulate(const std::string& tariff_path, const std::string& battery_path,
                 const std::string& profile_path, const std::string& out_dir, int days,
                 bool flat_c1, bool paper_compat, int sweep_points) {
    TariffContract contract = load_tariff(tariff_path);
    if (flat_c1 && contract.kind == ContractKind::C1) contract.use_flat_rate = true;
    const BatterySpec spec = battery_path.empty() ? null_battery() : load_battery(battery_path);
    const LoadProfile profile = load_profile_csv(profile_path);
    const SimulationConfig cfg = config_for(profile, days, paper_compat);

    const SimulationResult res = run_month(profile, contract, spec, cfg);

    fs::create_directories(out_dir);
    write_schedule_csv((fs::path(out_dir) / "schedule.csv").string(), profile,
                       res.schedule.steps);

    const double savings = res.nominal_bill.c_total() != 0.0
                               ? 100.0 * res.profit / res.nominal_bill.c_total()
                               : 0.0;
    json report{{"contract", contract.name},
                {"battery", spec.name},
                {"steps", profile.size()},
                {"h_hours", profile.step_hours},
                {"regime", to_string(res.regime)},
                {"nominal", bill_to_json(res.nominal_bill)},
                {"storage", bill_to_json(res.storage_bill)},
                {"profit", res.profit},
                {"arbitrage_gain", res.arbitrage_gain},
                {"reactive_gain", res.reactive_gain},
                {"savings_pct", savings},
                {"stress", res.schedule.stress}};
    write_text(fs::path(out_dir) / "report.json", report.dump(2) + "\n");

    // Cost components against the reactive-energy share, nominal and with
    // storage, as plottable series.
    std::ostringstream sweep;
    sweep << "reactive_share,nominal_active,nominal_reactive,nominal_variable,nominal_total,"
             "storage_active,storage_reactive,storage_variable,storage_total,savings_pct\n";
    for (int k = 0; k < sweep_points; ++k) {
        const double share =
            sweep_points > 1 ? static_cast<double>(k) / (sweep_points - 1) : 0.0;
        const LoadProfile varied = with_reactive_share(profile, share, 1.2);
        const SimulationResult r = run_month(varied, contract, spec, cfg);
        const double pct = r.nominal_bill.c_total() != 0.0
                               ? 100.0 * r.profit / r.nominal_bill.c_total()
                               : 0.0;
        sweep << format_double(share) << ',' << format_double(r.nominal_bill.c_active) << ','
              << format_double(r.nominal_bill.c_reactive) << ','
              << format_double(r.nominal_bill.c_variable()) << ','
              << format_double(r.nominal_bill.c_total()) << ','
              << format_double(r.storage_bill.c_active) << ','
              << format_double(r.storage_bill.c_reactive) << ','
              << format_double(r.storage_bill.c_variable()) << ','
              << format_double(r.storage_bill.c_total()) << ',' << format_double(pct) << '\n';
    }
    write_text(fs::path(out_dir) / "sweep.csv", sweep.str());

    std::printf("%s + %s: nominal %.2f, with storage %.2f, profit %.2f (%.1f%% savings)\n",
                contract.name.c_str(), spec.name.c_str(), res.nominal_bill.c_total(),
                res.storage_bill.c_total(), res.profit, savings);
    std::printf("outputs written to %s (schedule.csv, report.json, sweep.csv)\n",
                out_dir.c_str());
    return kExitOk;
}

int cmd_recommend(const std::vector<std::string>& tariff_paths,
                  const std::vector<std::string>& battery_paths,
                  const std::string& profile_path, const std::string& out_dir, int days,
                  bool flat_c1, bool paper_compat) {
    std::vector<TariffContract> contracts;
    for (const std::string& p : tariff_paths) {
        contracts.push_back(load_tariff(p));
        if (flat_c1 && contracts.back().kind == ContractKind::C1)
            contracts.back().use_flat_rate = true;
    }
    std::vector<BatterySpec> specs;
    for (const std::string& p : battery_paths) specs.push_back(load_battery(p));
    const LoadProfile profile = load_profile_csv(profile_path);
    const SimulationConfig cfg = config_for(profile, days, paper_compat);

    const auto rows = recommend_contract(profile, specs, contracts, cfg);
    std::printf("%-24s %-14s %12s %12s\n", "contract", "battery", "total", "profit");
    json jrows = json::array();
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::printf("%-24s %-14s failed: %s\n", row.contract_name.c_str(),
                        row.battery_name.empty() ? "-" : row.battery_name.c_str(),
                        row.error.c_str());
        } else {
            std::printf("%-24s %-14s %12.2f %12.2f\n", row.contract_name.c_str(),
                        row.battery_name.empty() ? "-" : row.battery_name.c_str(),
                        row.total_cost, row.profit);
        }
        jrows.push_back(json{{"contract", row.contract_name},
                             {"battery", row.battery_name},
                             {"total", row.total_cost},
                             {"profit", row.profit},
                             {"stress", row.stress},
                             {"error", row.error}});
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "recommendation.json", jrows.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_potential(const std::vector<std::string>& tariff_paths,
                  const std::vector<std::string>& battery_paths,
                  const std::vector<double>& sizes, const std::string& out_dir, int days,
                  double fx, double cycles_override, double eta, double soc_min,
                  double soc_max) {
    std::vector<TariffContract> contracts;
    for (const std::string& p : tariff_paths) contracts.push_back(load_tariff(p));
    for (const TariffContract& c : contracts)
        if (c.kind == ContractKind::C1)
            throw ConfigError(c.name + ": arbitrage potential needs a ToU contract");

    std::ostringstream csv;
    csv << "b_rated_kwh";
    for (const auto& c : contracts) csv << ',' << c.name;
    csv << '\n';
    std::printf("monthly arbitrage gain (peso), %d days\n", days);
    std::printf("%-12s", "size kWh");
    for (const auto& c : contracts) std::printf(" %20s", c.name.c_str());
    std::printf("\n");
    for (double size : sizes) {
        BatterySpec spec;
        spec.name = "sized";
        spec.b_rated = size;
        spec.b_min = soc_min * size;
        spec.b_max = soc_max * size;
        spec.delta_min = -std::max(size, 1.0);
        spec.delta_max = std::max(size, 1.0);
        spec.eta_ch = eta;
        spec.eta_dis = eta;
        csv << format_double(size);
        std::printf("%-12g", size);
        for (const auto& c : contracts) {
            const double gain =
                days * arbitrage_gain_per_day(spec, c.price_peak, c.price_offpeak);
            csv << ',' << format_double(gain);
            std::printf(" %20.2f", gain);
        }
        csv << '\n';
        std::printf("\n");
    }

    json jbatteries = json::array();
    if (!battery_paths.empty()) {
        std::printf("\nper-cycle economics (fx %.5f USD/peso)\n", fx);
        std::printf("%-14s %-24s %12s %12s %10s %12s\n", "battery", "contract", "gain/mo",
                    "$/cycle", "required", "verdict");
        for (const std::string& p : battery_paths) {
            const BatterySpec spec = load_battery(p);
            for (const TariffContract& c : contracts) {
                const double gain =
                    days * arbitrage_gain_per_day(spec, c.price_peak, c.price_offpeak);
                const std::optional<double> cyc = cycles_override > 0.0
                                                      ? std::optional<double>(cycles_override)
                                                      : std::nullopt;
                const EconReport rep = cycle_economics(spec, gain, fx, days, cyc);
                std::printf("%-14s %-24s %12.2f %12.3f %10.3f %12s\n", spec.name.c_str(),
                            c.name.c_str(), gain, rep.gain_per_cycle, rep.required_per_cycle,
                            rep.profitable ? "profitable" : "not profitable");
                jbatteries.push_back(json{{"battery", spec.name},
                                          {"contract", c.name},
                                          {"monthly_gain", gain},
                                          {"gain_per_cycle", rep.gain_per_cycle},
                                          {"required_per_cycle", rep.required_per_cycle},
                                          {"cycles_per_month", rep.cycles_per_month},
                                          {"profitable", rep.profitable},
                                          {"payback_months",
                                           rep.payback_months ? json(*rep.payback_months)
                                                              : json(nullptr)}});
            }
        }
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "potential.csv", csv.str());
        if (!jbatteries.empty())
            write_text(fs::path(out_dir) / "cycle_economics.json", jbatteries.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_verify(uint64_t seed, int instances, int levels) {
    std::printf("verification seed %llu\n", static_cast<unsigned long long>(seed));
    bool all_ok = true;

    // Threshold policy vs exact DP across the four ramp regimes.
    {
        bool ok = true;
        double worst_rel = 0.0;
        for (int i = 0; i < instances; ++i) {
            const RampRegime target = static_cast<RampRegime>(i % 4);
            const RandomToUInstance inst = random_tou_instance(seed + i, target, levels);
            const ThresholdOptimalityReport rep = verify_threshold_optimality(
                inst.contract, inst.spec, inst.days, inst.h, levels, inst.spec.b_min);
            if (!rep.pass) {
                ok = false;
                std::printf("  instance %d (seed %llu, %s): gap %.6g exceeds bound %.6g\n", i,
                            static_cast<unsigned long long>(seed + i), to_string(rep.regime),
                            rep.gap, rep.bound);
            }
            if (rep.bound > 0.0) worst_rel = std::max(worst_rel, std::abs(rep.gap) / rep.bound);
        }
        all_ok = all_ok && ok;
        std::printf("%s threshold-optimality: %d instances, worst |gap|/bound %.3g\n",
                    ok ? "ok  " : "FAIL", instances, worst_rel);
    }

    // Equal buy/sell prices leave no profit on the table.
    {
        OracleInstance inst;
        inst.spec.name = "flat_prices";
        inst.spec.b_rated = 6.4;
        inst.spec.b_min = 1.28;
        inst.spec.b_max = 6.272;
        inst.spec.delta_min = -3.3;
        inst.spec.delta_max = 3.3;
        inst.spec.eta_ch = 0.95;
        inst.spec.eta_dis = 0.95;
        inst.spec.s_b_max = 1e6;
        inst.price.assign(48, 5.0);
        inst.b0 = inst.spec.b_min;
        inst.grid_levels = levels;
        const DpResult dp = dp_optimal_profit(inst);
        const FuzzReport fuzz = random_schedule_fuzz(inst, 10000, seed);
        const bool ok = dp.profit == 0.0 && fuzz.violations == 0;
        all_ok = all_ok && ok;
        std::printf("%s equal-price no-profit: dp profit %.3g, %d/10000 schedules positive "
                    "(max %.3g)\n",
                    ok ? "ok  " : "FAIL", dp.profit, fuzz.violations, fuzz.max_profit);
    }

    // DP schedules ignore the load under equal buy/sell, and must stop doing
    // so when the sell price is cut in half.
    {
        const RandomToUInstance tou =
            random_tou_instance(seed ^ 0xABCDEFULL, RampRegime::Case1, levels);
        OracleInstance inst;
        inst.spec = tou.spec;
        inst.grid_levels = levels;
        inst.h = tou.h;
        inst.b0 = tou.spec.b_min;
        const int n = static_cast<int>(tou.days * 24 / tou.h);
        for (int i = 0; i < n; ++i) {
            const Period per = tou.contract.period_at(static_cast<int>(i * tou.h) % 24);
            inst.price.push_back(tou.contract.price_for(per));
        }
        std::vector<std::vector<double>> loads;
        uint64_t state = seed ^ 0x5DEECE66DULL;
        auto next_uniform = [&state]() {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            return static_cast<double>(state >> 11) * 0x1.0p-53;
        };
        for (int k = 0; k < 20; ++k) {
            std::vector<double> load(static_cast<size_t>(n));
            for (double& v : load) v = -3.0 + 8.0 * next_uniform();
            loads.push_back(std::move(load));
        }
        const LoadIndependenceReport equal = verify_load_independence(inst, loads, 1.0);
        const LoadIndependenceReport broken = verify_load_independence(inst, loads, 0.5);
        const bool ok = equal.pass && !broken.pass;
        all_ok = all_ok && ok;
        std::printf("%s load-independence: equal prices %s (gap %.3g), sell=0.5*buy %s\n",
                    ok ? "ok  " : "FAIL", equal.pass ? "equivalent" : "NOT EQUIVALENT",
                    equal.max_objective_gap_rel,
                    broken.pass ? "NOT DETECTED" : "breaks as expected");
    }

    std::printf("%s\n", all_ok ? "verification passed" : "verification FAILED");
    return all_ok ? kExitOk : kExitVerify;
}

int cmd_synth(const std::string& out_path, int days, double h, double peak_kwh,
              double midpeak_kwh, double offpeak_kwh, double share, double erq1_factor,
              const std::string& start) {
    SynthSpec spec;
    spec.days = days;
    spec.h_hours = h;
    spec.peak_kwh = peak_kwh;
    spec.midpeak_kwh = midpeak_kwh;
    spec.offpeak_kwh = offpeak_kwh;
    spec.reactive_share = share;
    spec.erq1_factor = erq1_factor;
    spec.start = start;
    const LoadProfile profile = make_synthetic_profile(spec);
    write_profile_csv(out_path, profile);
    std::printf("wrote %zu steps to %s\n", profile.size(), out_path.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prosumer storage dispatch simulator and LV tariff billing engine"};
    app.require_subcommand(1);

    std::vector<std::string> tariffs;
    std::string battery;
    std::vector<std::string> batteries;
    std::string profile_path;
    std::string out_dir;
    int days = 30;
    double fx = 0.02973;
    double cycles_override = 0.0;
    bool flat_c1 = false;
    bool paper_compat = false;
    uint64_t seed = 20190301;

    auto* sim = app.add_subcommand("simulate", "run one month of dispatch and bill it");
    sim->add_option("--tariff", tariffs, "tariff config file")->required()->expected(1);
    sim->add_option("--battery", battery, "battery preset file (omit for no storage)");
    sim->add_option("--profile", profile_path, "load profile CSV")->required();
    sim->add_option("--out", out_dir, "output directory")->required();
    sim->add_option("--days", days, "days in the billing month");
    int sweep_points = 21;
    sim->add_option("--sweep-points", sweep_points, "points in the reactive-share sweep");
    sim->add_flag("--flat-c1", flat_c1, "bill C1 at the flat rate instead of block tiers");
    sim->add_flag("--paper-compat", paper_compat,
                  "converter clip leaves the charge ledger on the unclipped delta");

    auto* rec = app.add_subcommand("recommend", "rank contracts (and batteries) for a profile");
    rec->add_option("--tariff", tariffs, "tariff config file (repeatable)")->required();
    rec->add_option("--battery", batteries, "battery preset file (repeatable)");
    rec->add_option("--profile", profile_path, "load profile CSV")->required();
    rec->add_option("--out", out_dir, "output directory");
    rec->add_option("--days", days, "days in the billing month");
    rec->add_flag("--flat-c1", flat_c1, "bill C1 at the flat rate instead of block tiers");
    rec->add_flag("--paper-compat", paper_compat, "pseudocode-faithful converter clipping");

    auto* pot = app.add_subcommand("potential", "closed-form arbitrage potential matrix");
    pot->add_option("--tariff", tariffs, "ToU tariff config file (repeatable)")->required();
    pot->add_option("--battery", batteries, "battery preset for cycle economics (repeatable)");
    std::vector<double> sizes{1, 2, 5, 10, 20};
    pot->add_option("--sizes", sizes, "battery sizes in kWh");
    pot->add_option("--days", days, "days in the billing month");
    pot->add_option("--fx", fx, "USD per peso");
    pot->add_option("--cycles-override", cycles_override,
                    "pin cycles per month instead of the SoC-window formula");
    double eta = 0.95, soc_min = 0.2, soc_max = 0.98;
    pot->add_option("--eta", eta, "round-trip leg efficiency for sized batteries");
    pot->add_option("--soc-min", soc_min, "SoC floor for sized batteries");
    pot->add_option("--soc-max", soc_max, "SoC ceiling for sized batteries");
    pot->add_option("--out", out_dir, "output directory");

    auto* ver = app.add_subcommand("verify", "brute-force verification suite");
    int instances = 60;
    int levels = 201;
    ver->add_option("--seed", seed, "seed for the randomized instances");
    ver->add_option("--instances", instances, "number of randomized ToU instances");
    ver->add_option("--levels", levels, "charge grid resolution");

    auto* syn = app.add_subcommand("synth", "generate a synthetic flat per-period profile");
    std::string synth_out;
    double share = 0.0, erq1_factor = 1.2, h = 1.0;
    double peak_kwh = 200.0, midpeak_kwh = 200.0, offpeak_kwh = 100.0;
    std::string start = "2019-04-01T00:00:00";
    syn->add_option("--out", synth_out, "output CSV path")->required();
    syn->add_option("--days", days, "days to generate");
    syn->add_option("--step-hours", h, "step length in hours");
    syn->add_option("--peak-kwh", peak_kwh, "monthly peak-band energy");
    syn->add_option("--midpeak-kwh", midpeak_kwh, "monthly mid-band energy");
    syn->add_option("--offpeak-kwh", offpeak_kwh, "monthly off-band energy");
    syn->add_option("--reactive-share", share, "target E_r / E_a");
    syn->add_option("--erq1-factor", erq1_factor, "target E_rQ1 / E_r");
    syn->add_option("--start", start, "first timestamp (ISO-8601)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(tariffs.at(0), battery, profile_path, out_dir, days, flat_c1,
                                paper_compat, sweep_points);
        if (rec->parsed())
            return cmd_recommend(tariffs, batteries, profile_path, out_dir, days, flat_c1,
                                 paper_compat);
        if (pot->parsed())
            return cmd_potential(tariffs, batteries, sizes, out_dir, days, fx, cycles_override,
                                 eta, soc_min, soc_max);
        if (ver->parsed()) return cmd_verify(seed, instances, levels);
        if (syn->parsed())
            return cmd_synth(synth_out, days, h, peak_kwh, midpeak_kwh, offpeak_kwh, share,
                             erq1_factor, start);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
