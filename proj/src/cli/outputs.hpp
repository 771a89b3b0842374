#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridflex/dispatch.hpp"
#include "gridflex/sensitivity.hpp"
#include "gridflex/validation.hpp"
#include "json.hpp"

namespace gridflex::cli {

using Json = nlohmann::ordered_json;

/// Writes through a temporary file and renames, so readers never see a partial file.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);
void write_json(const std::filesystem::path& path, const Json& doc);

[[nodiscard]] Json to_json(const dispatch::OptimizationResult& result, std::size_t pauses);
[[nodiscard]] Json to_json(const validation::ValidationReport& report);
[[nodiscard]] Json to_json(const sensitivity::FreqComparison& cmp, const sensitivity::FreqLimitSpec& spec,
                           const std::string& setup, const std::string& workload);

/// curve.csv: per-u breakdown, scaled core count and a marker on the optimum.
void write_curve(std::ostream& out, const dispatch::OptimizationResult& result);
void write_schedule(std::ostream& out, const energy::IntervalSeries& series, const dispatch::DispatchPolicy& policy);

struct SweepTableRow {
  std::string setup;
  std::string workload;
  std::string objective;
  std::string parameter;
  sensitivity::SweepRow row;
};
inline constexpr const char* kSweepHeader = "setup,workload,objective,parameter,value,u_opt,X,relative_objective";
void write_sweep(std::ostream& out, const std::vector<SweepTableRow>& rows);

/// Fixed-point text with `decimals` digits, for paper-shaped tables.
[[nodiscard]] std::string fixed(double value, int decimals);

[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

}  // namespace gridflex::cli
