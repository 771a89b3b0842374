#include "gridflex/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridflex/errors.hpp"
#include "gridflex/kernels.hpp"
#include "gridflex/units.hpp"

namespace gridflex::dispatch {
namespace {

constexpr const char* kModule = "dispatch_optimizer";

struct TermConstants {
  double fixed_a = 0.0;
  double fixed_b = 0.0;
  double run_power = 0.0;
  double idle_power = 0.0;
};

TermConstants emission_constants(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                 const cluster::WorkloadScenario& workload) {
  setup.validate();
  workload.validate();
  return {setup.embedded_kg_per_core_hour * series.t_total(), 0.0,
          units::watt_to_megawatt(cluster::average_power(setup, workload)), units::watt_to_megawatt(setup.p_idle_w)};
}

TermConstants cost_constants(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                             const cluster::WorkloadScenario& workload, const cluster::TariffModel& tariff) {
  setup.validate();
  workload.validate();
  tariff.validate();
  if (!setup.acq_eur_per_core_hour) {
    throw InputError(kModule, "setup '" + setup.name + "' has no acquisition cost; cost optimisation needs one");
  }
  const double years = series.t_total() / units::kHoursPerYear;
  return {*setup.acq_eur_per_core_hour * series.t_total(),
          units::watt_to_kilowatt(setup.p_max_w) * tariff.yearly_demand_eur_per_kw * years,
          units::watt_to_megawatt(cluster::average_power(setup, workload)), units::watt_to_megawatt(setup.p_idle_w)};
}

struct MaskSums {
  double run_hours = 0.0;
  double run = 0.0;
  double idle = 0.0;
};

MaskSums mask_sums(const IntervalSeries& series, Metric metric, std::span<const std::uint8_t> mask) {
  if (mask.size() != series.size()) throw InputError(kModule, "run mask length does not match the series");
  std::vector<double> products(series.size());
  kernels::active().multiply(series.metric(metric), series.durations(), products);
  const auto durations = series.durations();
  MaskSums sums;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      sums.run_hours += durations[i];
      sums.run += products[i];
    } else {
      sums.idle += products[i];
    }
  }
  if (!(sums.run_hours > 0.0)) throw InputError(kModule, "run mask selects no interval");
  return sums;
}

// Same operation order as kernels::objective_grid so both paths agree bitwise.
CurvePoint evaluate(const TermConstants& c, double n_cores, double t_total, const MaskSums& sums) {
  CurvePoint p;
  p.u = sums.run_hours == t_total ? 1.0 : sums.run_hours / t_total;
  const double s = n_cores / p.u;
  p.hardware = s * c.fixed_a;
  p.demand = s * c.fixed_b;
  p.operation = s * (c.run_power * sums.run);
  p.idle = s * (c.idle_power * sums.idle);
  p.total = ((p.hardware + p.demand) + p.operation) + p.idle;
  return p;
}

}  // namespace

std::string_view objective_name(Objective o) noexcept { return o == Objective::emission ? "emission" : "cost"; }

Objective parse_objective(std::string_view text) {
  if (text == "emission" || text == "emissions") return Objective::emission;
  if (text == "cost" || text == "costs") return Objective::cost;
  throw InputError(kModule, "objective must be 'emission' or 'cost', got '" + std::string(text) + "'");
}

QuantileIndex::QuantileIndex(const IntervalSeries& series, Metric metric) : series_(&series), metric_(metric) {
  const std::size_t n = series.size();
  if (n == 0) throw InputError(kModule, "interval series is empty");
  const auto values = series.metric(metric);
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  // Equal metrics: the earlier interval takes the slot.
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> products(n);
  kernels::active().multiply(values, series.durations(), products);
  const auto durations = series.durations();

  cumulative_.assign(n + 1, 0.0);
  run_sum_.assign(n + 1, 0.0);
  idle_sum_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    cumulative_[k + 1] = cumulative_[k] + durations[order_[k]];
    run_sum_[k + 1] = run_sum_[k] + products[order_[k]];
  }
  for (std::size_t k = n; k-- > 0;) idle_sum_[k] = idle_sum_[k + 1] + products[order_[k]];

  // Full operation is independent of the ordering: use chronological sums so
  // the u = 1 point equals a direct evaluation of the all-run mask.
  cumulative_[n] = series.t_total();
  double chronological = 0.0;
  for (const double p : products) chronological += p;
  run_sum_[n] = chronological;
}

double QuantileIndex::threshold(std::size_t count) const {
  if (count == 0 || count > order_.size()) throw InputError(kModule, "run count out of range");
  return series_->metric(metric_)[order_[count - 1]];
}

std::size_t QuantileIndex::count_for_utilisation(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw InputError(kModule, "utilisation must lie in (0, 1]");
  const double target = u * series_->t_total();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
  auto k = static_cast<std::size_t>(it - cumulative_.begin());
  if (k > order_.size()) k = order_.size();
  if (k > 0 && (k == cumulative_.size() || target - cumulative_[k - 1] < cumulative_[k] - target)) --k;
  if (k == 0) {
    throw InputError(kModule, "utilisation " + std::to_string(u) + " selects no interval (empty run set)");
  }
  return k;
}

DispatchPolicy QuantileIndex::policy(std::size_t count, double u_requested) const {
  if (count == 0 || count > order_.size()) throw InputError(kModule, "run count out of range");
  DispatchPolicy p;
  p.metric = metric_;
  p.u_requested = u_requested;
  p.run_count = count;
  p.u = count == order_.size() ? 1.0 : cumulative_[count] / series_->t_total();
  p.threshold = threshold(count);
  p.run_mask.assign(order_.size(), 0);
  for (std::size_t k = 0; k < count; ++k) p.run_mask[order_[k]] = 1;
  return p;
}

DispatchPolicy policy_from_utilisation(const IntervalSeries& series, Metric metric, double u) {
  const QuantileIndex index(series, metric);
  return index.policy(index.count_for_utilisation(u), u);
}

EmissionBreakdown emission_from_mask(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                     const cluster::WorkloadScenario& workload, std::span<const std::uint8_t> run_mask) {
  const auto p = evaluate(emission_constants(series, setup, workload), setup.n_cores, series.t_total(),
                          mask_sums(series, Metric::intensity, run_mask));
  return {p.hardware, p.operation, p.idle, p.total};
}

CostBreakdown cost_from_mask(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                             const cluster::WorkloadScenario& workload, const cluster::TariffModel& tariff,
                             std::span<const std::uint8_t> run_mask) {
  const auto p = evaluate(cost_constants(series, setup, workload, tariff), setup.n_cores, series.t_total(),
                          mask_sums(series, Metric::price, run_mask));
  return {p.hardware, p.demand, p.operation, p.idle, p.total};
}

EmissionBreakdown emission_total(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                                 const cluster::WorkloadScenario& workload, double u) {
  const auto policy = policy_from_utilisation(series, Metric::intensity, u);
  return emission_from_mask(series, setup, workload, policy.run_mask);
}

CostBreakdown cost_total(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                         const cluster::WorkloadScenario& workload, const cluster::TariffModel& tariff, double u) {
  const auto policy = policy_from_utilisation(series, Metric::price, u);
  return cost_from_mask(series, setup, workload, tariff, policy.run_mask);
}

std::optional<double> OptimizationResult::threshold() const {
  if (optimum + 1 == curve.size()) return std::nullopt;
  return best().threshold;
}

EmissionBreakdown OptimizationResult::emission_at(std::size_t i) const {
  const auto& p = curve.at(i);
  return {p.hardware, p.operation, p.idle, p.total};
}

CostBreakdown OptimizationResult::cost_at(std::size_t i) const {
  const auto& p = curve.at(i);
  return {p.hardware, p.demand, p.operation, p.idle, p.total};
}

OptimizationResult optimise(const QuantileIndex& index, const cluster::ClusterSetup& setup,
                            const cluster::WorkloadScenario& workload, Objective objective,
                            const cluster::TariffModel* tariff) {
  if (index.metric() != metric_for(objective)) {
    throw InputError(kModule, "quantile index metric does not match the objective");
  }
  const IntervalSeries& series = index.series();
  TermConstants c;
  if (objective == Objective::emission) {
    c = emission_constants(series, setup, workload);
  } else {
    if (tariff == nullptr) throw InputError(kModule, "cost optimisation needs a tariff");
    c = cost_constants(series, setup, workload, *tariff);
  }

  const std::size_t n = index.size();
  std::vector<double> cumulative(n), run(n), idle(n);
  for (std::size_t k = 0; k < n; ++k) {
    cumulative[k] = index.run_hours(k + 1);
    run[k] = index.run_sum(k + 1);
    idle[k] = index.idle_sum(k + 1);
  }
  std::vector<double> u(n), scale(n), term_a(n), term_b(n), operation(n), idle_term(n), total(n);
  const auto& kernels = kernels::active();
  kernels.utilisation_scale(cumulative, series.t_total(), setup.n_cores, u, scale);
  kernels.objective_grid({scale, c.fixed_a, c.fixed_b, c.run_power, run, c.idle_power, idle},
                         {term_a, term_b, operation, idle_term, total});

  OptimizationResult result;
  result.objective = objective;
  result.setup = setup.name;
  result.workload = workload.name;
  result.n_cores = setup.n_cores;
  result.curve.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.curve[k] = {k + 1, u[k], index.threshold(k + 1), term_a[k], term_b[k], operation[k], idle_term[k], total[k]};
  }
  // Scan from full operation downwards; only a strict improvement moves the optimum.
  std::size_t best = n - 1;
  for (std::size_t k = n - 1; k-- > 0;) {
    if (total[k] < total[best]) best = k;
  }
  result.optimum = best;
  if (!std::isfinite(total[best])) throw InvariantError(kModule, "objective is not finite");
  return result;
}

OptimizationResult optimise(const IntervalSeries& series, const cluster::ClusterSetup& setup,
                            const cluster::WorkloadScenario& workload, Objective objective,
                            const cluster::TariffModel* tariff) {
  const QuantileIndex index(series, metric_for(objective));
  return optimise(index, setup, workload, objective, tariff);
}

std::size_t switching_count(std::span<const std::uint8_t> run_mask) {
  std::size_t pauses = 0;
  for (std::size_t i = 1; i < run_mask.size(); ++i) {
    if (run_mask[i - 1] != 0 && run_mask[i] == 0) ++pauses;
  }
  return pauses;
}

std::size_t switching_count(const DispatchPolicy& policy) { return switching_count(policy.run_mask); }

}  // namespace gridflex::dispatch
