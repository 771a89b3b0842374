#include "gridflex/validation.hpp"

#include <cmath>
#include <map>

#include "gridflex/errors.hpp"
#include "gridflex/kernels.hpp"

namespace gridflex::validation {
namespace {

constexpr const char* kModule = "forecast_validation";

}  // namespace

ShareRegression fit_share_regression(const energy::RenewableShareTable& table) {
  const auto& rows = table.rows();
  if (rows.size() < 3) throw InputError(kModule, "share regression needs at least 3 years");
  const double n = static_cast<double>(rows.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& r : rows) {
    mean_x += r.renewable_share;
    mean_y += r.mean_intensity;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& r : rows) {
    const double dx = r.renewable_share - mean_x;
    const double dy = r.mean_intensity - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DataQualityError(kModule, "renewable share is constant; regression is degenerate");

  ShareRegression out;
  out.slope = sxy / sxx;
  out.intercept = mean_y - out.slope * mean_x;
  double sse = 0.0;
  for (const auto& r : rows) {
    const double residual = r.mean_intensity - (out.intercept + out.slope * r.renewable_share);
    sse += residual * residual;
  }
  out.slope_std = std::sqrt(sse / (n - 2.0) / sxx);
  out.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  out.first_year = rows.front().year;
  out.last_year = rows.back().year;
  if (!std::isfinite(out.slope)) throw InvariantError(kModule, "regression slope is not finite");
  return out;
}

double extrapolate_threshold(double x_base, double share_base, double share_target, const ShareRegression& regression) {
  for (const double s : {share_base, share_target}) {
    if (!(s >= 0.0 && s <= 100.0)) throw InputError(kModule, "renewable shares must lie in [0, 100]");
  }
  return x_base + regression.slope * (share_target - share_base);
}

double achieved_utilisation(const energy::IntervalSeries& series, double threshold, energy::Metric metric) {
  if (series.empty()) throw InputError(kModule, "series is empty");
  std::vector<std::uint8_t> mask(series.size());
  kernels::active().threshold_mask(series.metric(metric), threshold, mask);
  const auto durations = series.durations();
  double run = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) run += durations[i];
  }
  return run / series.t_total();
}

double matching_threshold(const energy::IntervalSeries& series, double u_target, energy::Metric metric) {
  const dispatch::QuantileIndex index(series, metric);
  return index.threshold(index.count_for_utilisation(u_target));
}

int dominant_year(const energy::IntervalSeries& series, std::chrono::minutes calendar_offset) {
  if (series.empty()) throw InputError(kModule, "series is empty");
  std::map<int, double> hours;
  for (std::size_t i = 0; i < series.size(); ++i) {
    hours[calendar_year(series.starts()[i], calendar_offset)] += series.durations()[i];
  }
  auto best = hours.begin();
  for (auto it = hours.begin(); it != hours.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

ValidationReport validate_threshold(const ValidationInputs& in, const cluster::ClusterSetup& setup,
                                    const cluster::WorkloadScenario& workload) {
  if (in.base == nullptr || in.target == nullptr || in.shares == nullptr) {
    throw InputError(kModule, "validation needs base and target series and a share table");
  }
  ValidationReport report;
  report.setup = setup.name;
  report.workload = workload.name;
  report.base_year = in.base_year != 0 ? in.base_year : dominant_year(*in.base);
  report.target_year = in.target_year != 0 ? in.target_year : dominant_year(*in.target);
  report.regression = fit_share_regression(*in.shares);
  report.share_base = in.shares->year(report.base_year).renewable_share;
  report.share_target = in.shares->year(report.target_year).renewable_share;

  const auto base = dispatch::optimise(*in.base, setup, workload, dispatch::Objective::emission);
  report.u_target = base.u_opt();
  report.x_base = base.best().threshold;
  if (!base.threshold()) report.warnings.push_back("constant operation is optimal in the base year");

  report.x_extra = extrapolate_threshold(report.x_base, report.share_base, report.share_target, report.regression);
  report.u_extra = achieved_utilisation(*in.target, report.x_extra);
  if (report.u_extra == 0.0) {
    report.warnings.push_back("extrapolated threshold lies below every interval of the target year");
  }
  report.u_deviation = report.u_extra - report.u_target;
  report.x_target = matching_threshold(*in.target, report.u_target);
  report.x_relative_deviation = std::abs(report.x_extra - report.x_target) / report.x_target;
  return report;
}

}  // namespace gridflex::validation
