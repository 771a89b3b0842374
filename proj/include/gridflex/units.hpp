#pragma once

// Every unit conversion used by the objectives lives here. Setups carry power
// in W per core; the objectives need MW (energy terms) and kW (demand charge).

namespace gridflex::units {

inline constexpr double kWattToMegawatt = 1e-6;
inline constexpr double kWattToKilowatt = 1e-3;
inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kSecondsPerHour = 3600.0;

[[nodiscard]] constexpr double watt_to_megawatt(double watt) noexcept { return watt * kWattToMegawatt; }
[[nodiscard]] constexpr double watt_to_kilowatt(double watt) noexcept { return watt * kWattToKilowatt; }

}  // namespace gridflex::units
