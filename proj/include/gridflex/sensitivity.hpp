#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gridflex/dispatch.hpp"

namespace gridflex::sensitivity {

enum class SweepParameter {
  idle_ratio,     ///< value sets P_idle = value * P_max
  embedded_rate,  ///< value multiplies the embedded emission rate
  acq_rate,       ///< value multiplies the acquisition cost rate
};

[[nodiscard]] std::string_view parameter_name(SweepParameter p) noexcept;
[[nodiscard]] SweepParameter parse_parameter(std::string_view text);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::idle_ratio;
  std::vector<double> values;
  cluster::ClusterSetup setup;
  cluster::WorkloadScenario workload;
  dispatch::Objective objective = dispatch::Objective::emission;
  cluster::TariffModel tariff;

  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  double u_opt = 1.0;
  std::optional<double> threshold;
  double relative_objective = 1.0;
};

/// `count` evenly spaced values from `from` to `to` inclusive.
[[nodiscard]] std::vector<double> linspace(double from, double to, std::size_t count);

/// Setup with the swept parameter substituted.
[[nodiscard]] cluster::ClusterSetup apply_parameter(const cluster::ClusterSetup& base, SweepParameter p, double value);

/// One optimisation per value, rows in the order of `spec.values`. Points run
/// concurrently; results do not depend on the thread count.
[[nodiscard]] std::vector<SweepRow> sweep(const SweepSpec& spec, const energy::IntervalSeries& series);

[[nodiscard]] std::vector<SweepRow> embedded_variation(const energy::IntervalSeries& series,
                                                       const cluster::ClusterSetup& setup,
                                                       const cluster::WorkloadScenario& workload,
                                                       const std::vector<double>& factors);

struct FreqLimitSpec {
  double power_reduction = 0.40;   ///< relative drop of full-load power
  double performance_drop = 0.19;  ///< relative drop of per-core throughput

  void validate() const;
};

struct FreqComparison {
  double hardware_scale = 1.0;  ///< 1 / (1 - performance_drop)
  cluster::ClusterSetup limited_setup;
  dispatch::EmissionBreakdown nominal;  ///< constant operation, nominal clock
  dispatch::EmissionBreakdown limited;  ///< constant operation, limited clock, scaled hardware
  double ratio = 1.0;                   ///< limited.total / nominal.total
  /// Dynamic operation of the nominal setup, for comparison.
  double nominal_dynamic_relative = 1.0;
  double nominal_dynamic_u = 1.0;
  /// Dynamic operation of the clock-limited setup relative to nominal constant operation.
  std::optional<double> combined_ratio;
  std::optional<double> combined_u;
};

/// Constant operation at a limited clock: P_max scaled down, P_idle kept, core
/// count (and with it embedded emissions and power draw) scaled up to keep the
/// compute output. With `combined`, the limited setup is also optimised dynamically.
[[nodiscard]] FreqComparison freq_limited_emission(const energy::IntervalSeries& series,
                                                   const cluster::ClusterSetup& setup,
                                                   const cluster::WorkloadScenario& workload,
                                                   const FreqLimitSpec& spec, bool combined = false);

}  // namespace gridflex::sensitivity
