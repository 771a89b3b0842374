#pragma once

// Synthetic inputs and a brute-force reference optimiser shared by the unit
// tests and the acceptance suite.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "gridflex/cluster_model.hpp"
#include "gridflex/dispatch.hpp"
#include "gridflex/energy_data.hpp"

namespace gridflex::testing {

inline TimePoint t0() {
  using namespace std::chrono;
  return sys_days{year{2024} / January / 1};
}

/// Consecutive intervals starting at t0 with the given durations.
inline energy::IntervalSeries make_series(const std::vector<double>& intensity, const std::vector<double>& price,
                                          const std::vector<double>& durations) {
  std::vector<energy::Interval> iv;
  auto t = t0();
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    iv.push_back({t, durations[i], intensity[i], price[i]});
    t += std::chrono::seconds(static_cast<long long>(std::llround(durations[i] * 3600.0)));
  }
  return energy::IntervalSeries(iv);
}

inline energy::IntervalSeries make_series(const std::vector<double>& intensity, double duration = 1.0) {
  return make_series(intensity, std::vector<double>(intensity.size(), 0.0),
                     std::vector<double>(intensity.size(), duration));
}

inline cluster::WorkloadScenario constant_load(double load) { return {"constant", {{load, 1.0}}}; }

/// Objective computed from scratch for an explicit run set, without the
/// quantile machinery or the kernels.
struct OracleValue {
  double u = 0.0;
  double hardware = 0.0;
  double demand = 0.0;
  double operation = 0.0;
  double idle = 0.0;
  double total = 0.0;
};

inline OracleValue oracle_objective(const energy::IntervalSeries& s, const cluster::ClusterSetup& setup,
                                    const cluster::WorkloadScenario& workload, bool cost, double tariff,
                                    const std::vector<bool>& run) {
  long double t_total = 0, run_h = 0, run_sum = 0, idle_sum = 0;
  const auto metric = cost ? s.prices() : s.intensities();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const long double d = s.durations()[i];
    t_total += d;
    if (run[i]) {
      run_h += d;
      run_sum += metric[i] * d;
    } else {
      idle_sum += metric[i] * d;
    }
  }
  long double p_avg = 0;
  for (const auto& m : workload.modes) {
    p_avg += m.time_fraction * (setup.p_idle_w + m.load * (setup.p_max_w - setup.p_idle_w));
  }
  const long double u = run_h / t_total;
  const long double cores = setup.n_cores / u;
  OracleValue v;
  v.u = static_cast<double>(u);
  if (cost) {
    v.hardware = static_cast<double>(cores * setup.acq_eur_per_core_hour.value_or(0.0) * t_total);
    v.demand = static_cast<double>(cores * (setup.p_max_w / 1000.0L) * tariff * (t_total / 8760.0L));
  } else {
    v.hardware = static_cast<double>(cores * setup.embedded_kg_per_core_hour * t_total);
  }
  v.operation = static_cast<double>(cores * (p_avg / 1e6L) * run_sum);
  v.idle = static_cast<double>(cores * (setup.p_idle_w / 1e6L) * idle_sum);
  v.total = v.hardware + v.demand + v.operation + v.idle;
  return v;
}

struct OracleResult {
  std::size_t best_count = 0;  ///< number of run intervals at the optimum
  std::vector<OracleValue> values;  ///< index k-1 for k run intervals
};

/// Enumerates every run count k = 1..N. The run set for k is built by repeated
/// selection of the cheapest remaining interval (earliest start on ties).
/// Exact ties in the objective go to the larger utilisation.
inline OracleResult brute_force(const energy::IntervalSeries& s, const cluster::ClusterSetup& setup,
                                const cluster::WorkloadScenario& workload, bool cost, double tariff = 100.0) {
  const auto metric = cost ? s.prices() : s.intensities();
  const std::size_t n = s.size();
  OracleResult r;
  std::vector<bool> run(n, false);
  for (std::size_t k = 1; k <= n; ++k) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i) {
      if (run[i]) continue;
      if (!pick || metric[i] < metric[*pick]) pick = i;
    }
    run[*pick] = true;
    r.values.push_back(oracle_objective(s, setup, workload, cost, tariff, run));
  }
  r.best_count = n;
  for (std::size_t k = n; k >= 1; --k) {
    if (r.values[k - 1].total < r.values[r.best_count - 1].total) r.best_count = k;
  }
  return r;
}

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Random series of up to `max_n` intervals with durations from {0.25, 0.5, 1}.
inline energy::IntervalSeries random_series(std::mt19937_64& rng, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> count(1, max_n);
  std::uniform_int_distribution<int> step(0, 2);
  std::uniform_real_distribution<double> intensity(0.0, 900.0);
  std::uniform_real_distribution<double> price(-80.0, 250.0);
  const std::size_t n = count(rng);
  std::vector<double> e(n), p(n), d(n);
  const double steps[] = {0.25, 0.5, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = intensity(rng);
    p[i] = price(rng);
    d[i] = steps[step(rng)];
  }
  return make_series(e, p, d);
}

inline cluster::ClusterSetup random_setup(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  cluster::ClusterSetup s;
  s.name = "random";
  s.n_cores = std::floor(1.0 + unit(rng) * 8000.0);
  s.p_max_w = 1.0 + unit(rng) * 10.0;
  s.p_idle_w = unit(rng) * s.p_max_w;
  s.embedded_kg_per_core_hour = unit(rng) * 5e-4;
  s.acq_eur_per_core_hour = unit(rng) * 1e-3;
  return s;
}

inline cluster::WorkloadScenario random_workload(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double loads[] = {0.0, 0.1, 0.5, 1.0};
  std::vector<double> w(4);
  for (auto& x : w) x = unit(rng) + 1e-3;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  cluster::WorkloadScenario ws{"random", {}};
  double used = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double f = i == 3 ? 1.0 - used : w[i] / sum;
    used += f;
    ws.modes.push_back({loads[i], f});
  }
  return ws;
}

}  // namespace gridflex::testing
