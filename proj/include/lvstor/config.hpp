#pragma once

#include <string>

#include "lvstor/battery.hpp"
#include "lvstor/tariff.hpp"

namespace lvstor {

/// Loads and validates a tariff contract from a JSON config file (schema in
/// the README; one file per contract). Throws ConfigError with the path on
/// any defect.
TariffContract load_tariff(const std::string& path);

/// Loads and validates a battery preset from a JSON config file.
BatterySpec load_battery(const std::string& path);

} // namespace lvstor
