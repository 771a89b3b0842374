#include "gridflex/cluster_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gridflex/errors.hpp"
#include "gridflex/units.hpp"

namespace gridflex::cluster {
namespace {

constexpr const char* kModule = "cluster_model";

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void ClusterSetup::validate() const {
  const auto where = "setup '" + name + "': ";
  if (!(n_cores >= 1.0) || !std::isfinite(n_cores)) throw InputError(kModule, where + "n_cores must be >= 1");
  if (!finite_nonneg(p_idle_w) || !finite_nonneg(p_max_w) || p_idle_w > p_max_w) {
    throw InputError(kModule, where + "require 0 <= p_idle_w <= p_max_w");
  }
  if (!finite_nonneg(embedded_kg_per_core_hour)) throw InputError(kModule, where + "embedded rate must be >= 0");
  if (acq_eur_per_core_hour && !finite_nonneg(*acq_eur_per_core_hour)) {
    throw InputError(kModule, where + "acquisition rate must be >= 0");
  }
}

void WorkloadScenario::validate() const {
  const auto where = "workload '" + name + "': ";
  if (modes.empty()) throw InputError(kModule, where + "no load modes");
  double sum = 0.0;
  std::set<double> loads;
  for (const auto& m : modes) {
    if (!(m.load >= 0.0 && m.load <= 1.0)) throw InputError(kModule, where + "load outside [0, 1]");
    if (!(m.time_fraction >= 0.0 && m.time_fraction <= 1.0)) {
      throw InputError(kModule, where + "time fraction outside [0, 1]");
    }
    if (!loads.insert(m.load).second) throw InputError(kModule, where + "duplicate load mode");
    sum += m.time_fraction;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError(kModule, where + "time fractions must sum to 1");
}

void TariffModel::validate() const {
  if (!finite_nonneg(yearly_demand_eur_per_kw)) throw InputError(kModule, "demand charge must be >= 0");
}

double power_at_load(const ClusterSetup& setup, double load) {
  if (!(load >= 0.0 && load <= 1.0)) throw InputError(kModule, "load must lie in [0, 1]");
  return setup.p_idle_w + load * (setup.p_max_w - setup.p_idle_w);
}

double average_power(const ClusterSetup& setup, const WorkloadScenario& workload) {
  double p = 0.0;
  for (const auto& mode : workload.modes) p += mode.time_fraction * power_at_load(setup, mode.load);
  // Rounding in the time fractions must not push the mean outside the power envelope.
  return std::clamp(p, setup.p_idle_w, setup.p_max_w);
}

double embedded_rate(const EmbeddedEstimate& e) {
  if (!(e.cores_per_server > 0.0) || !(e.lifetime_years > 0.0) || !(e.per_server_kg >= 0.0)) {
    throw InputError(kModule, "embedded estimate needs positive cores and lifetime and non-negative mass");
  }
  double per_server = e.per_server_kg;
  if (e.storage) {
    per_server -= e.storage->capacity_gb * (e.storage->sef_replaced_kg_per_gb - e.storage->sef_substitute_kg_per_gb);
    if (per_server < 0.0) throw InputError(kModule, "storage substitution removes more than the server total");
  }
  return per_server / (e.cores_per_server * e.lifetime_years * units::kHoursPerYear);
}

double substitution_capacity_for_rate(const EmbeddedEstimate& e, double target_rate) {
  const StorageSubstitution sub = e.storage.value_or(StorageSubstitution{});
  const double delta = sub.sef_replaced_kg_per_gb - sub.sef_substitute_kg_per_gb;
  if (!(delta > 0.0)) throw InputError(kModule, "substitution must lower the storage emission factor");
  const double target_server = target_rate * e.cores_per_server * e.lifetime_years * units::kHoursPerYear;
  return (e.per_server_kg - target_server) / delta;
}

Registry Registry::builtin() {
  Registry r;
  // Measured per-core power (W) and embedded emissions (kg CO2 / core-hour).
  // Acquisition cost per core-hour is known only for the BAF hardware.
  r.add_setup({"baf_default", 7104, 9.2, 2.3, 1.5e-5, 5.35e-4});
  r.add_setup({"baf_modern", 2816, 7.6, 1.1, 1.8e-4, 5.35e-4});
  r.add_setup({"deep_cm", 2400, 7.8, 2.6, 1.8e-4, std::nullopt});
  r.add_setup({"deep_dam", 1536, 6.9, 3.3, 1.8e-4, std::nullopt});
  r.add_setup({"gridka_arm", 2816, 2.9, 0.9, 1.8e-4, std::nullopt});

  r.add_workload({"medium", {{0.0, 0.25}, {0.1, 0.30}, {0.5, 0.35}, {1.0, 0.10}}});
  r.add_workload({"heavy", {{0.0, 0.10}, {0.1, 0.20}, {0.5, 0.55}, {1.0, 0.15}}});
  r.add_workload({"backfilling", {{0.0, 0.05}, {1.0, 0.95}}});

  r.set_tariff({100.0});
  return r;
}

void Registry::add_setup(ClusterSetup setup) {
  setup.validate();
  auto it = std::find_if(setups_.begin(), setups_.end(), [&](const auto& s) { return s.name == setup.name; });
  if (it != setups_.end()) {
    *it = std::move(setup);
  } else {
    setups_.push_back(std::move(setup));
  }
}

void Registry::add_workload(WorkloadScenario workload) {
  workload.validate();
  auto it = std::find_if(workloads_.begin(), workloads_.end(), [&](const auto& w) { return w.name == workload.name; });
  if (it != workloads_.end()) {
    *it = std::move(workload);
  } else {
    workloads_.push_back(std::move(workload));
  }
}

void Registry::set_tariff(TariffModel tariff) {
  tariff.validate();
  tariff_ = tariff;
}

const ClusterSetup& Registry::setup(const std::string& name) const {
  for (const auto& s : setups_) {
    if (s.name == name) return s;
  }
  throw InputError(kModule, "unknown setup '" + name + "'");
}

const WorkloadScenario& Registry::workload(const std::string& name) const {
  for (const auto& w : workloads_) {
    if (w.name == name) return w;
  }
  throw InputError(kModule, "unknown workload '" + name + "'");
}

std::vector<std::string> Registry::setup_names() const {
  std::vector<std::string> out;
  for (const auto& s : setups_) out.push_back(s.name);
  return out;
}

std::vector<std::string> Registry::workload_names() const {
  std::vector<std::string> out;
  for (const auto& w : workloads_) out.push_back(w.name);
  return out;
}

}  // namespace gridflex::cluster
