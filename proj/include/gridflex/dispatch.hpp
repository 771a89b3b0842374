#pragma once

/**
 * @file dispatch.hpp
 * @brief Threshold dispatch of a cluster over an interval series.
 *
 * A utilisation u selects the cheapest intervals (by carbon intensity or by
 * price) whose total duration is a fraction u of the period. The cluster runs
 * in those intervals and idles in the rest; to keep the compute output fixed
 * it is scaled to n_cores / u cores. The objective (total emissions or total
 * cost) is evaluated for every attainable u and the minimum is reported.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridflex/cluster_model.hpp"
#include "gridflex/energy_data.hpp"

namespace gridflex::dispatch {

using energy::IntervalSeries;
using energy::Metric;

enum class Objective { emission, cost };

[[nodiscard]] std::string_view objective_name(Objective o) noexcept;
[[nodiscard]] Objective parse_objective(std::string_view text);
[[nodiscard]] constexpr Metric metric_for(Objective o) noexcept {
  return o == Objective::emission ? Metric::intensity : Metric::price;
}

struct DispatchPolicy {
  Metric metric = Metric::intensity;
  double u_requested = 1.0;
  double u = 1.0;          ///< realised: run duration / t_total
  double threshold = 0.0;  ///< metric of the most expensive running interval
  std::size_t run_count = 0;
  std::vector<std::uint8_t> run_mask;  ///< chronological, 1 = run

  [[nodiscard]] bool full_operation() const noexcept { return run_count == run_mask.size(); }
};

struct EmissionBreakdown {
  double embedded = 0.0;
  double operation = 0.0;
  double idle = 0.0;
  double total = 0.0;  ///< kg CO2
};

struct CostBreakdown {
  double acquisition = 0.0;
  double demand = 0.0;
  double operation = 0.0;
  double idle = 0.0;
  double total = 0.0;  ///< EUR
};

/// Intervals ordered by (metric, start) with cumulative sums, built once per
/// series and metric and shared by every evaluation on that series.
class QuantileIndex {
 public:
  QuantileIndex(const IntervalSeries& series, Metric metric);

  [[nodiscard]] const IntervalSeries& series() const noexcept { return *series_; }
  [[nodiscard]] Metric metric() const noexcept { return metric_; }
  [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }

  /// Chronological index of the k-th cheapest interval (0-based).
  [[nodiscard]] std::size_t order(std::size_t k) const { return order_[k]; }
  /// Duration of the `count` cheapest intervals.
  [[nodiscard]] double run_hours(std::size_t count) const { return cumulative_[count]; }
  /// Sum of metric*t over the `count` cheapest intervals.
  [[nodiscard]] double run_sum(std::size_t count) const { return run_sum_[count]; }
  /// Sum of metric*t over all but the `count` cheapest intervals.
  [[nodiscard]] double idle_sum(std::size_t count) const { return idle_sum_[count]; }
  /// Metric of the `count`-th cheapest interval (count >= 1).
  [[nodiscard]] double threshold(std::size_t count) const;

  /// Number of run intervals realising utilisation u: the count whose
  /// duration is closest to u * t_total (ties toward more intervals).
  /// Throws InputError for u outside (0, 1] or an empty run set.
  [[nodiscard]] std::size_t count_for_utilisation(double u) const;

  [[nodiscard]] DispatchPolicy policy(std::size_t count, double u_requested) const;

 private:
  const IntervalSeries* series_;
  Metric metric_;
  std::vector<std::size_t> order_;
  std::vector<double> cumulative_;  // size N + 1
  std::vector<double> run_sum_;     // size N + 1, prefix in sorted order
  std::vector<double> idle_sum_;    // size N + 1, suffix in sorted order
};

[[nodiscard]] DispatchPolicy policy_from_utilisation(const IntervalSeries& series, Metric metric, double u);

/// Objective evaluated on an explicit run mask; u is the mask's run fraction.
[[nodiscard]] EmissionBreakdown emission_from_mask(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                                   const cluster::WorkloadScenario& workload,
                                                   std::span<const std::uint8_t> run_mask);
[[nodiscard]] CostBreakdown cost_from_mask(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                           const cluster::WorkloadScenario& workload,
                                           const cluster::TariffModel& tariff, std::span<const std::uint8_t> run_mask);

[[nodiscard]] EmissionBreakdown emission_total(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                               const cluster::WorkloadScenario& workload, double u);
[[nodiscard]] CostBreakdown cost_total(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                       const cluster::WorkloadScenario& workload, const cluster::TariffModel& tariff,
                                       double u);

/// One point of the objective curve. For emissions `hardware` is E_embedded
/// and `demand` is zero; for costs they are C_acq and C_demand.
struct CurvePoint {
  std::size_t run_count = 0;
  double u = 1.0;
  double threshold = 0.0;
  double hardware = 0.0;
  double demand = 0.0;
  double operation = 0.0;
  double idle = 0.0;
  double total = 0.0;
};

struct OptimizationResult {
  Objective objective = Objective::emission;
  std::string setup;
  std::string workload;
  double n_cores = 0.0;
  std::size_t optimum = 0;  ///< index into curve
  std::vector<CurvePoint> curve;  ///< ascending u; last point is u = 1

  [[nodiscard]] const CurvePoint& best() const { return curve.at(optimum); }
  [[nodiscard]] const CurvePoint& constant_operation() const { return curve.back(); }
  [[nodiscard]] double u_opt() const { return best().u; }
  /// Absent when constant operation is optimal.
  [[nodiscard]] std::optional<double> threshold() const;
  [[nodiscard]] double relative_objective() const { return best().total / constant_operation().total; }
  [[nodiscard]] double scaled_cores() const { return n_cores / u_opt(); }
  [[nodiscard]] EmissionBreakdown emission_at(std::size_t i) const;
  [[nodiscard]] CostBreakdown cost_at(std::size_t i) const;
};

/// Exhaustive minimisation over all attainable utilisations k = 1..N. Exact
/// ties go to the larger utilisation. `tariff` is required for costs.
[[nodiscard]] OptimizationResult optimise(const QuantileIndex& index, const cluster::ClusterSetup& setup,
                                          const cluster::WorkloadScenario& workload, Objective objective,
                                          const cluster::TariffModel* tariff = nullptr);
[[nodiscard]] OptimizationResult optimise(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                          const cluster::WorkloadScenario& workload, Objective objective,
                                          const cluster::TariffModel* tariff = nullptr);

/// Number of run -> idle transitions in chronological order.
[[nodiscard]] std::size_t switching_count(const DispatchPolicy& policy);
[[nodiscard]] std::size_t switching_count(std::span<const std::uint8_t> run_mask);

}  // namespace gridflex::dispatch
