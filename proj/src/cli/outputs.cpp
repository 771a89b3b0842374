#include "outputs.hpp"

#include <cstdio>
#include <fstream>

#include "gridflex/csv.hpp"
#include "gridflex/errors.hpp"

namespace gridflex::cli {
namespace {

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cli_report", "cannot write " + path.string());
    body(out);
    out.flush();
    if (!out) throw InputError("cli_report", "write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  write_file(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

Json to_json(const dispatch::OptimizationResult& r, std::size_t pauses) {
  Json doc;
  doc["objective"] = std::string(dispatch::objective_name(r.objective));
  doc["metric"] = std::string(energy::metric_name(dispatch::metric_for(r.objective)));
  doc["setup"] = r.setup;
  doc["workload"] = r.workload;
  doc["n_cores"] = r.n_cores;
  doc["u_opt"] = r.u_opt();
  doc["threshold"] = nullable(r.threshold());
  doc["relative_objective"] = r.relative_objective();
  doc["scaled_cores"] = r.scaled_cores();
  doc["run_intervals"] = r.best().run_count;
  doc["pause_events"] = pauses;
  auto breakdown = [&](std::size_t i) {
    Json b;
    if (r.objective == dispatch::Objective::emission) {
      const auto e = r.emission_at(i);
      b["embedded"] = e.embedded;
      b["operation"] = e.operation;
      b["idle"] = e.idle;
      b["total"] = e.total;
    } else {
      const auto c = r.cost_at(i);
      b["acquisition"] = c.acquisition;
      b["demand"] = c.demand;
      b["operation"] = c.operation;
      b["idle"] = c.idle;
      b["total"] = c.total;
    }
    return b;
  };
  doc["breakdown"] = breakdown(r.optimum);
  doc["constant_operation"] = breakdown(r.curve.size() - 1);
  doc["curve_points"] = r.curve.size();
  doc["curve_file"] = "curve.csv";
  return doc;
}

Json to_json(const validation::ValidationReport& v) {
  Json doc;
  doc["setup"] = v.setup;
  doc["workload"] = v.workload;
  doc["base_year"] = v.base_year;
  doc["target_year"] = v.target_year;
  doc["share_base"] = v.share_base;
  doc["share_target"] = v.share_target;
  doc["regression"] = {{"slope", v.regression.slope},
                       {"slope_std", v.regression.slope_std},
                       {"intercept", v.regression.intercept},
                       {"r_squared", v.regression.r_squared},
                       {"first_year", v.regression.first_year},
                       {"last_year", v.regression.last_year}};
  doc["x_base"] = v.x_base;
  doc["x_extra"] = v.x_extra;
  doc["u_target"] = v.u_target;
  doc["u_extra"] = v.u_extra;
  doc["u_deviation"] = v.u_deviation;
  doc["x_target"] = v.x_target;
  doc["x_relative_deviation"] = v.x_relative_deviation;
  doc["warnings"] = v.warnings;
  return doc;
}

Json to_json(const sensitivity::FreqComparison& c, const sensitivity::FreqLimitSpec& spec, const std::string& setup,
             const std::string& workload) {
  auto breakdown = [](const dispatch::EmissionBreakdown& e) {
    return Json{{"embedded", e.embedded}, {"operation", e.operation}, {"idle", e.idle}, {"total", e.total}};
  };
  Json doc;
  doc["setup"] = setup;
  doc["workload"] = workload;
  doc["power_reduction"] = spec.power_reduction;
  doc["performance_drop"] = spec.performance_drop;
  doc["hardware_scale"] = c.hardware_scale;
  doc["limited_p_max_w"] = c.limited_setup.p_max_w;
  doc["limited_n_cores"] = c.limited_setup.n_cores;
  doc["ratio"] = c.ratio;
  doc["nominal"] = breakdown(c.nominal);
  doc["limited"] = breakdown(c.limited);
  doc["dynamic_relative"] = c.nominal_dynamic_relative;
  doc["dynamic_u_opt"] = c.nominal_dynamic_u;
  doc["combined_ratio"] = nullable(c.combined_ratio);
  doc["combined_u_opt"] = nullable(c.combined_u);
  return doc;
}

void write_curve(std::ostream& out, const dispatch::OptimizationResult& r) {
  const bool emission = r.objective == dispatch::Objective::emission;
  out << (emission ? "u,X,embedded,operation,idle,total,cores,optimum\n"
                   : "u,X,acq,demand,operation,idle,total,cores,optimum\n");
  for (std::size_t k = 0; k < r.curve.size(); ++k) {
    const auto& p = r.curve[k];
    const bool full = k + 1 == r.curve.size();
    out << csv::format_double(p.u) << ',' << (full ? std::string() : csv::format_double(p.threshold)) << ','
        << csv::format_double(p.hardware) << ',';
    if (!emission) out << csv::format_double(p.demand) << ',';
    out << csv::format_double(p.operation) << ',' << csv::format_double(p.idle) << ',' << csv::format_double(p.total)
        << ',' << csv::format_double(r.n_cores / p.u) << ',' << (k == r.optimum ? 1 : 0) << '\n';
  }
}

void write_schedule(std::ostream& out, const energy::IntervalSeries& series, const dispatch::DispatchPolicy& policy) {
  out << "start_utc,run\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_utc(series.starts()[i]) << ',' << static_cast<int>(policy.run_mask[i]) << '\n';
  }
}

void write_sweep(std::ostream& out, const std::vector<SweepTableRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.setup << ',' << r.workload << ',' << r.objective << ',' << r.parameter << ','
        << csv::format_double(r.row.value) << ',' << csv::format_double(r.row.u_opt) << ','
        << (r.row.threshold ? csv::format_double(*r.row.threshold) : std::string()) << ','
        << csv::format_double(r.row.relative_objective) << '\n';
  }
}

}  // namespace gridflex::cli
