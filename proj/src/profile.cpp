#include "lvstor/profile.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lvstor {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

double parse_double_field(const std::string& field, const std::string& path, size_t line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        std::ostringstream err;
        err << path << ":" << line << ": cannot parse number '" << field << "'";
        throw DataError(err.str());
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

int64_t parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    char tail[4] = {0, 0, 0, 0};
    const int n = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%3s", &y, &mo, &d, &sep,
                              &h, &mi, &s, tail);
    const bool tail_ok = n == 7 || (n == 8 && std::string(tail) == "Z");
    if (n < 7 || !tail_ok || (sep != 'T' && sep != ' ') || mo < 1 || mo > 12 || d < 1 ||
        d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
        throw DataError("invalid ISO-8601 timestamp '" + text + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(int64_t epoch_s) {
    int64_t day = epoch_s / 86400;
    int64_t sod = epoch_s % 86400;
    if (sod < 0) {
        sod += 86400;
        --day;
    }
    int y, m, d;
    civil_from_days(day, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", y, m, d,
                  static_cast<int>(sod / 3600), static_cast<int>((sod / 60) % 60),
                  static_cast<int>(sod % 60));
    return buf;
}

std::string format_double(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

LoadProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    std::string line;
    size_t lineno = 0;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,demand_kw,generation_kw,reactive_kvar")
        throw DataError(path + ":1: expected header "
                               "'timestamp,demand_kw,generation_kw,reactive_kvar'");

    LoadProfile profile;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            std::ostringstream err;
            err << path << ":" << lineno << ": expected 4 columns, got " << fields.size();
            throw DataError(err.str());
        }
        int64_t t;
        try {
            t = parse_iso8601(fields[0]);
        } catch (const DataError& e) {
            std::ostringstream err;
            err << path << ":" << lineno << ": " << e.what();
            throw DataError(err.str());
        }
        profile.epoch_s.push_back(t);
        profile.demand_kw.push_back(parse_double_field(fields[1], path, lineno));
        profile.generation_kw.push_back(parse_double_field(fields[2], path, lineno));
        profile.reactive_kvar.push_back(parse_double_field(fields[3], path, lineno));
    }
    if (profile.size() < 2) throw DataError(path + ": need at least two data rows");

    const int64_t step = profile.epoch_s[1] - profile.epoch_s[0];
    if (step <= 0) throw DataError(path + ":3: timestamps must be strictly increasing");
    for (size_t i = 2; i < profile.size(); ++i) {
        if (profile.epoch_s[i] - profile.epoch_s[i - 1] != step) {
            std::ostringstream err;
            err << path << ":" << (i + 2) << ": non-uniform step (expected " << step
                << " s)";
            throw DataError(err.str());
        }
    }
    profile.step_hours = static_cast<double>(step) / 3600.0;
    return profile;
}

void write_profile_csv(const std::string& path, const LoadProfile& profile) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "timestamp,demand_kw,generation_kw,reactive_kvar\n";
    for (size_t i = 0; i < profile.size(); ++i) {
        out << format_iso8601(profile.epoch_s[i]) << ',' << format_double(profile.demand_kw[i])
            << ',' << format_double(profile.generation_kw[i]) << ','
            << format_double(profile.reactive_kvar[i]) << '\n';
    }
    if (!out) throw DataError(path + ": write failed");
}

void write_schedule_csv(const std::string& path, const LoadProfile& profile,
                        const std::vector<DispatchStep>& steps) {
    if (steps.size() != profile.size())
        throw DataError(path + ": schedule length does not match profile");
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "timestamp,x_kwh,p_b_kw,q_b_kw,b_kwh\n";
    for (size_t i = 0; i < steps.size(); ++i) {
        out << format_iso8601(profile.epoch_s[i]) << ',' << format_double(steps[i].x_kwh)
            << ',' << format_double(steps[i].p_b_kw) << ',' << format_double(steps[i].q_b_kvar)
            << ',' << format_double(steps[i].b_kwh) << '\n';
    }
    if (!out) throw DataError(path + ": write failed");
}

std::vector<DispatchStep> load_schedule_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    std::string line;
    size_t lineno = 0;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,x_kwh,p_b_kw,q_b_kw,b_kwh")
        throw DataError(path + ":1: expected header 'timestamp,x_kwh,p_b_kw,q_b_kw,b_kwh'");
    std::vector<DispatchStep> steps;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            std::ostringstream err;
            err << path << ":" << lineno << ": expected 5 columns, got " << fields.size();
            throw DataError(err.str());
        }
        DispatchStep step;
        step.x_kwh = parse_double_field(fields[1], path, lineno);
        step.p_b_kw = parse_double_field(fields[2], path, lineno);
        step.q_b_kvar = parse_double_field(fields[3], path, lineno);
        step.b_kwh = parse_double_field(fields[4], path, lineno);
        steps.push_back(step);
    }
    return steps;
}

} // namespace lvstor
