#pragma once

/**
 * @file validation.hpp
 * @brief Renewable-share regression and validation of a threshold carried
 *        over to another year.
 */

#include <string>
#include <vector>

#include "gridflex/dispatch.hpp"
#include "gridflex/energy_data.hpp"

namespace gridflex::validation {

struct ShareRegression {
  double slope = 0.0;      ///< kg CO2/MWh per percentage point (signed)
  double slope_std = 0.0;  ///< standard error of the slope
  double intercept = 0.0;
  double r_squared = 0.0;
  int first_year = 0;
  int last_year = 0;
};

/// Unweighted least squares of mean intensity on renewable share.
[[nodiscard]] ShareRegression fit_share_regression(const energy::RenewableShareTable& table);

/// X_base + slope * (share_target - share_base).
[[nodiscard]] double extrapolate_threshold(double x_base, double share_base, double share_target,
                                           const ShareRegression& regression);

/// Duration-weighted fraction of intervals with metric <= threshold.
[[nodiscard]] double achieved_utilisation(const energy::IntervalSeries& series, double threshold,
                                          energy::Metric metric = energy::Metric::intensity);

/// Threshold that realises `u_target` under the dispatch quantile convention.
[[nodiscard]] double matching_threshold(const energy::IntervalSeries& series, double u_target,
                                        energy::Metric metric = energy::Metric::intensity);

struct ValidationReport {
  std::string setup;
  std::string workload;
  int base_year = 0;
  int target_year = 0;
  double share_base = 0.0;
  double share_target = 0.0;
  ShareRegression regression;
  double x_base = 0.0;
  double x_extra = 0.0;
  double u_target = 0.0;
  double u_extra = 0.0;
  double u_deviation = 0.0;  ///< u_extra - u_target
  double x_target = 0.0;
  double x_relative_deviation = 0.0;  ///< |x_extra - x_target| / x_target
  std::vector<std::string> warnings;
};

struct ValidationInputs {
  const energy::IntervalSeries* base = nullptr;
  const energy::IntervalSeries* target = nullptr;
  const energy::RenewableShareTable* shares = nullptr;
  int base_year = 0;
  int target_year = 0;
};

/// Optimises emissions on the base year, carries the threshold to the target
/// year through the share regression and compares the utilisation reached.
[[nodiscard]] ValidationReport validate_threshold(const ValidationInputs& in, const cluster::ClusterSetup& setup,
                                                  const cluster::WorkloadScenario& workload);

/// Majority calendar year of a series (by duration).
[[nodiscard]] int dominant_year(const energy::IntervalSeries& series,
                                std::chrono::minutes calendar_offset = std::chrono::minutes{0});

}  // namespace gridflex::validation
