#include "gridflex/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "gridflex/errors.hpp"

namespace gridflex::sensitivity {
namespace {

constexpr const char* kModule = "sensitivity";

SweepRow row_from(double value, const dispatch::OptimizationResult& r) {
  return {value, r.u_opt(), r.threshold(), r.relative_objective()};
}

}  // namespace

std::string_view parameter_name(SweepParameter p) noexcept {
  switch (p) {
    case SweepParameter::idle_ratio: return "idle_ratio";
    case SweepParameter::embedded_rate: return "embedded_rate";
    case SweepParameter::acq_rate: return "acq_rate";
  }
  return "unknown";
}

SweepParameter parse_parameter(std::string_view text) {
  if (text == "idle-ratio" || text == "idle_ratio") return SweepParameter::idle_ratio;
  if (text == "embedded" || text == "embedded-rate" || text == "embedded_rate") return SweepParameter::embedded_rate;
  if (text == "acq" || text == "acq-rate" || text == "acq_rate") return SweepParameter::acq_rate;
  throw InputError(kModule, "unknown sweep parameter '" + std::string(text) + "'");
}

void SweepSpec::validate() const {
  if (values.empty()) throw InputError(kModule, "sweep needs at least one value");
  for (const double v : values) {
    if (!std::isfinite(v)) throw InputError(kModule, "sweep values must be finite");
    if (parameter == SweepParameter::idle_ratio && !(v >= 0.0 && v <= 1.0)) {
      throw InputError(kModule, "idle ratio must lie in [0, 1]");
    }
    if (parameter != SweepParameter::idle_ratio && v < 0.0) throw InputError(kModule, "rate factors must be >= 0");
  }
  if (parameter == SweepParameter::acq_rate && objective != dispatch::Objective::cost) {
    throw InputError(kModule, "acquisition-rate sweeps only apply to the cost objective");
  }
  setup.validate();
  workload.validate();
}

std::vector<double> linspace(double from, double to, std::size_t count) {
  if (count == 0) throw InputError(kModule, "sweep needs at least one step");
  if (count == 1) return {from};
  std::vector<double> out(count);
  const double step = (to - from) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = from + step * static_cast<double>(i);
  out.back() = to;
  return out;
}

cluster::ClusterSetup apply_parameter(const cluster::ClusterSetup& base, SweepParameter p, double value) {
  cluster::ClusterSetup s = base;
  switch (p) {
    case SweepParameter::idle_ratio:
      s.p_idle_w = value * s.p_max_w;
      break;
    case SweepParameter::embedded_rate:
      s.embedded_kg_per_core_hour *= value;
      break;
    case SweepParameter::acq_rate:
      if (!s.acq_eur_per_core_hour) throw InputError(kModule, "setup '" + s.name + "' has no acquisition cost");
      *s.acq_eur_per_core_hour *= value;
      break;
  }
  return s;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const energy::IntervalSeries& series) {
  spec.validate();
  const dispatch::QuantileIndex index(series, dispatch::metric_for(spec.objective));
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                                               spec.values.size()));
  std::vector<SweepRow> rows(spec.values.size());
  auto run_range = [&](std::size_t first) {
    for (std::size_t i = first; i < spec.values.size(); i += workers) {
      const auto setup = apply_parameter(spec.setup, spec.parameter, spec.values[i]);
      rows[i] = row_from(spec.values[i], dispatch::optimise(index, setup, spec.workload, spec.objective, &spec.tariff));
    }
  };
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 1; w < workers; ++w) tasks.push_back(std::async(std::launch::async, run_range, w));
  run_range(0);
  for (auto& t : tasks) t.get();
  return rows;
}

std::vector<SweepRow> embedded_variation(const energy::IntervalSeries& series, const cluster::ClusterSetup& setup,
                                         const cluster::WorkloadScenario& workload, const std::vector<double>& factors) {
  for (const double f : factors) {
    if (!(f > 0.0)) throw InputError(kModule, "embedded factors must be > 0");
  }
  SweepSpec spec;
  spec.parameter = SweepParameter::embedded_rate;
  spec.values = factors;
  spec.setup = setup;
  spec.workload = workload;
  spec.objective = dispatch::Objective::emission;
  return sweep(spec, series);
}

void FreqLimitSpec::validate() const {
  if (!(power_reduction >= 0.0 && power_reduction < 1.0)) throw InputError(kModule, "power reduction must lie in [0, 1)");
  if (!(performance_drop >= 0.0 && performance_drop < 1.0)) {
    throw InputError(kModule, "performance drop must lie in [0, 1); a drop of 1 needs infinite hardware");
  }
}

FreqComparison freq_limited_emission(const energy::IntervalSeries& series, const cluster::ClusterSetup& setup,
                                     const cluster::WorkloadScenario& workload, const FreqLimitSpec& spec,
                                     bool combined) {
  spec.validate();
  FreqComparison out;
  out.hardware_scale = 1.0 / (1.0 - spec.performance_drop);

  out.limited_setup = setup;
  out.limited_setup.name = setup.name + "_freq_limited";
  out.limited_setup.p_max_w = (1.0 - spec.power_reduction) * setup.p_max_w;
  if (out.limited_setup.p_max_w < out.limited_setup.p_idle_w) {
    throw InputError(kModule, "limited full-load power falls below idle power");
  }
  out.limited_setup.n_cores = setup.n_cores * out.hardware_scale;

  out.nominal = dispatch::emission_total(series, setup, workload, 1.0);
  out.limited = dispatch::emission_total(series, out.limited_setup, workload, 1.0);
  out.ratio = out.limited.total / out.nominal.total;

  const dispatch::QuantileIndex index(series, energy::Metric::intensity);
  const auto dynamic = dispatch::optimise(index, setup, workload, dispatch::Objective::emission);
  out.nominal_dynamic_relative = dynamic.relative_objective();
  out.nominal_dynamic_u = dynamic.u_opt();
  if (combined) {
    const auto both = dispatch::optimise(index, out.limited_setup, workload, dispatch::Objective::emission);
    out.combined_ratio = both.best().total / out.nominal.total;
    out.combined_u = both.u_opt();
  }
  return out;
}

}  // namespace gridflex::sensitivity
