#pragma once

#include <filesystem>
#include <iosfwd>

#include "gridflex/cluster_model.hpp"

namespace gridflex::cluster {

/// Applies a TOML-style config on top of `registry`.
///
///     [setup.<name>]
///     n_cores = 2816
///     p_max_w = 7.6
///     p_idle_w = 1.1
///     e_embedded_kg_per_core_hour = 1.8e-4
///     c_acq_eur_per_core_hour = 5.35e-4
///
///     [workload.<name>]
///     modes = [[0.0, 0.05], [1.0, 0.95]]
///
///     [tariff]
///     c_yearly_demand_eur_per_kw = 100
///
/// A setup section naming an existing setup starts from its values.
void load_config(std::istream& in, Registry& registry);
void load_config(const std::filesystem::path& path, Registry& registry);

}  // namespace gridflex::cluster
