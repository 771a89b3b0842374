#pragma once

#include <optional>
#include <vector>

#include "gridflex/energy_data.hpp"

namespace gridflex::energy::detail {

/// Most frequent positive spacing between starts, in hours (0.25 if unknown).
double infer_step_hours(std::vector<TimePoint> starts);

/// Fills missing durations with the inferred step, converts power to energy
/// when requested, sorts by start and rejects duplicate timestamps.
void finish_records(std::vector<GenerationRecord>& records, const std::vector<std::optional<double>>& durations,
                    bool power_values);

}  // namespace gridflex::energy::detail
