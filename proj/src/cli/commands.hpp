#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridflex/cluster_model.hpp"

namespace gridflex::cli {

using std::filesystem::path;

struct Context {
  cluster::Registry registry = cluster::Registry::builtin();
  bool quiet = false;
  std::ostream* log = nullptr;

  void note(const std::string& message) const;
};

struct IngestOptions {
  path generation;
  path prices;
  path factors;
  path out;
  std::string generation_format;  // csv | json, empty: by extension
  std::string prices_format;
  std::string generation_unit;    // mwh | mw, empty: csv -> mwh, json -> mw
  std::string calendar_offset = "+00:00";
  std::optional<path> summary_out;
  bool allow_partial = false;
};

struct OptimizeOptions {
  path data;
  std::vector<std::string> setups;     // "all" expands
  std::vector<std::string> workloads;  // "all" expands
  std::string objective = "emission";
  std::optional<path> tariff;
  path out;
};

struct SweepOptions {
  path data;
  std::string parameter = "idle-ratio";
  std::optional<double> from;
  std::optional<double> to;
  std::size_t steps = 51;
  std::vector<double> values;
  std::vector<std::string> setups;
  std::vector<std::string> workloads;
  std::string objective = "emission";
  std::optional<path> tariff;
  path out;
};

struct ValidateOptions {
  path base;
  path target;
  path shares;
  std::string setup = "baf_modern";
  std::string workload = "backfilling";
  int base_year = 0;
  int target_year = 0;
  path out;
};

struct CompareFreqOptions {
  path data;
  std::string setup = "gridka_arm";
  std::vector<std::string> workloads{"backfilling"};
  double power_reduction = 0.40;
  double performance_drop = 0.19;
  bool combined = false;
  path out;
};

struct ReportOptions {
  std::vector<path> inputs;
  path out;
};

void run_ingest(const Context& ctx, const IngestOptions& o);
void run_optimize(const Context& ctx, const OptimizeOptions& o);
void run_sweep(const Context& ctx, const SweepOptions& o);
void run_validate(const Context& ctx, const ValidateOptions& o);
void run_compare_freq(const Context& ctx, const CompareFreqOptions& o);
void run_report(const Context& ctx, const ReportOptions& o);

}  // namespace gridflex::cli
