#pragma once

/**
 * @file cluster_model.hpp
 * @brief Cluster setups, workload scenarios and the per-core constants the
 *        dispatch objectives are built from.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridflex::cluster {

struct ClusterSetup {
  std::string name;
  double n_cores = 1.0;
  double p_max_w = 0.0;                      ///< W per logical core at full load
  double p_idle_w = 0.0;                     ///< W per logical core when idle
  double embedded_kg_per_core_hour = 0.0;    ///< kg CO2 per core-hour
  std::optional<double> acq_eur_per_core_hour;  ///< acquisition cost, required for cost optimisation

  /// Throws InputError when an invariant is broken.
  void validate() const;

  [[nodiscard]] double idle_ratio() const noexcept { return p_max_w > 0.0 ? p_idle_w / p_max_w : 1.0; }
};

struct LoadMode {
  double load = 0.0;           ///< fraction of full load
  double time_fraction = 0.0;  ///< fraction of operating time spent at this load
};

struct WorkloadScenario {
  std::string name;
  std::vector<LoadMode> modes;

  void validate() const;
};

struct TariffModel {
  double yearly_demand_eur_per_kw = 100.0;

  void validate() const;
};

/// Replacing one storage technology by another in the server inventory.
struct StorageSubstitution {
  double capacity_gb = 0.0;
  double sef_replaced_kg_per_gb = 0.16;
  double sef_substitute_kg_per_gb = 0.02;
};

struct EmbeddedEstimate {
  double per_server_kg = 0.0;
  double cores_per_server = 1.0;
  double lifetime_years = 10.0;
  std::optional<StorageSubstitution> storage;
};

/// P_idle + load * (P_max - P_idle), W per core.
[[nodiscard]] double power_at_load(const ClusterSetup& setup, double load);

/// Time-weighted mean operating power of a workload, W per core.
[[nodiscard]] double average_power(const ClusterSetup& setup, const WorkloadScenario& workload);

/// Embedded emissions per core-hour (kg CO2 / h / core).
[[nodiscard]] double embedded_rate(const EmbeddedEstimate& estimate);

/// Storage capacity for which the substitution yields `target_rate`.
[[nodiscard]] double substitution_capacity_for_rate(const EmbeddedEstimate& estimate, double target_rate);

/// Named setups, workloads and the demand tariff.
class Registry {
 public:
  /// The five measured setups and three workload scenarios shipped with the tool.
  [[nodiscard]] static Registry builtin();

  void add_setup(ClusterSetup setup);
  void add_workload(WorkloadScenario workload);
  void set_tariff(TariffModel tariff);

  [[nodiscard]] const ClusterSetup& setup(const std::string& name) const;
  [[nodiscard]] const WorkloadScenario& workload(const std::string& name) const;
  [[nodiscard]] const TariffModel& tariff() const noexcept { return tariff_; }

  [[nodiscard]] std::vector<std::string> setup_names() const;
  [[nodiscard]] std::vector<std::string> workload_names() const;

 private:
  std::vector<ClusterSetup> setups_;  // insertion order is report order
  std::vector<WorkloadScenario> workloads_;
  TariffModel tariff_;
};

}  // namespace gridflex::cluster
