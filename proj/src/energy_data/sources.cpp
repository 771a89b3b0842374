#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

#include "gridflex/energy_data.hpp"

namespace gridflex::energy {
namespace {

std::string slug(std::string_view raw) {
  std::string out;
  bool pending_sep = false;
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_sep = true;
    }
  }
  return out;
}

// Raw energy-charts series names (slugged) -> canonical source.
constexpr std::array<std::pair<std::string_view, std::string_view>, 14> kAliases{{
    {"fossil_brown_coal_lignite", "lignite"},
    {"fossil_hard_coal", "hard_coal"},
    {"fossil_gas", "gas"},
    {"fossil_oil", "oil"},
    {"fossil_coal_derived_gas", "coal_derived_gas"},
    {"hydro_run_of_river", "hydro_run_of_river"},
    {"hydro_water_reservoir", "hydro_water_reservoir"},
    {"hydro_pumped_storage", "pumped_storage"},
    {"hydro_pumped_storage_consumption", "pumped_storage_consumption"},
    {"hydro_pumped_storage_generation", "pumped_storage"},
    {"battery_storage_discharging", "battery_storage"},
    {"battery_storage_charging", "battery_storage_consumption"},
    {"others", "other"},
    {"renewable_waste", "waste_renewable"},
}};

constexpr std::array<std::string_view, 9> kNotGeneration{
    "load", "residual_load", "renewable_share_of_load", "renewable_share_of_generation",
    "cross_border_electricity_trading", "load_incl_self_consumption", "total_load", "grid_load",
    "net_import"};

constexpr std::array<std::string_view, 9> kRenewable{
    "solar", "wind_onshore", "wind_offshore", "hydro_run_of_river", "hydro_water_reservoir",
    "biomass", "geothermal", "waste_renewable", "hydro"};

}  // namespace

std::string_view metric_name(Metric m) noexcept { return m == Metric::intensity ? "intensity" : "price"; }

std::optional<std::string> canonical_source_name(std::string_view raw) {
  std::string s = slug(raw);
  if (s.empty()) return std::nullopt;
  if (std::find(kNotGeneration.begin(), kNotGeneration.end(), s) != kNotGeneration.end()) return std::nullopt;
  for (const auto& [from, to] : kAliases) {
    if (s == from) return std::string(to);
  }
  return s;
}

bool is_storage_source(std::string_view canonical) {
  return canonical.find("pumped_storage") != std::string_view::npos ||
         canonical.find("battery") != std::string_view::npos;
}

bool is_renewable_source(std::string_view canonical) {
  return std::find(kRenewable.begin(), kRenewable.end(), canonical) != kRenewable.end();
}

void EmissionFactors::add(EmissionFactorTable table) {
  auto& slot = tables_[table.year];
  slot.year = table.year;
  for (auto& [source, factor] : table.per_source_factor) slot.per_source_factor[source] = factor;
}

}  // namespace gridflex::energy
