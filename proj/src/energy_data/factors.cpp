#include <istream>

#include "gridflex/csv.hpp"
#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"

namespace gridflex::energy {

const EmissionFactorTable& EmissionFactors::for_year(int year) const {
  if (auto it = tables_.find(year); it != tables_.end()) return it->second;
  if (auto it = tables_.find(0); it != tables_.end()) return it->second;
  throw InputError("energy_data", "no emission factor table for year " + std::to_string(year));
}

EmissionFactors parse_emission_factors(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw InputError("energy_data", "emission factor file is empty");
  const auto& header = rows.front().fields;
  const bool with_year = header.size() == 3;
  if (header.size() != 2 && !with_year) {
    throw InputError("energy_data", "emission factor header must be 'source,kg_per_mwh' or 'year,source,kg_per_mwh'");
  }

  EmissionFactors factors;
  std::map<int, EmissionFactorTable> tables;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto where = "factor row " + std::to_string(row.line);
    if (row.fields.size() != header.size()) throw InputError("energy_data", where + ": wrong field count");
    int year = 0;
    std::size_t c = 0;
    if (with_year) {
      const auto y = csv::parse_double(row.fields[0]);
      if (!y || *y != static_cast<int>(*y) || *y < 1900) throw InputError("energy_data", where + ": invalid year");
      year = static_cast<int>(*y);
      c = 1;
    }
    const auto source = canonical_source_name(row.fields[c]);
    if (!source) throw InputError("energy_data", where + ": '" + row.fields[c] + "' is not a generation source");
    const auto factor = csv::parse_double(row.fields[c + 1]);
    if (!factor || *factor < 0.0) throw InputError("energy_data", where + ": factor must be a number >= 0");
    auto& table = tables[year];
    table.year = year;
    if (!table.per_source_factor.emplace(*source, *factor).second) {
      throw InputError("energy_data", where + ": duplicate factor for '" + *source + "'");
    }
  }
  for (auto& [year, table] : tables) factors.add(std::move(table));
  return factors;
}

}  // namespace gridflex::energy
