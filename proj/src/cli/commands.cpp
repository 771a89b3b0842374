#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "gridflex/config.hpp"
#include "gridflex/csv.hpp"
#include "gridflex/dispatch.hpp"
#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"
#include "gridflex/kernels.hpp"
#include "gridflex/sensitivity.hpp"
#include "gridflex/validation.hpp"
#include "outputs.hpp"

#ifndef GRIDFLEX_VERSION
#define GRIDFLEX_VERSION "dev"
#endif

namespace gridflex::cli {
namespace {

constexpr const char* kModule = "cli_report";

void require_readable(const path& p, const char* what) {
  std::ifstream in(p);
  if (!in) throw InputError(kModule, std::string("cannot read ") + what + " file '" + p.string() + "'");
}

std::ifstream open_input(const path& p, const char* what) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError(kModule, std::string("cannot read ") + what + " file '" + p.string() + "'");
  return in;
}

energy::DataFormat format_of(const path& p, const std::string& explicit_format) {
  std::string f = explicit_format;
  if (f.empty()) f = p.extension() == ".json" ? "json" : "csv";
  if (f == "csv") return energy::DataFormat::csv;
  if (f == "json") return energy::DataFormat::json;
  throw InputError(kModule, "format must be csv or json, got '" + f + "'");
}

energy::IntervalSeries load_series(const path& p) {
  auto in = open_input(p, "interval");
  return energy::read_series(in);
}

Json provenance(const std::vector<path>& inputs) {
  Json doc;
  doc["tool"] = "gridflex";
  doc["version"] = GRIDFLEX_VERSION;
  Json files = Json::array();
  for (const auto& p : inputs) {
    Json entry{{"path", p.string()}, {"sha256", sha256_file(p)}};
    auto ingest_record = p;
    ingest_record += ".provenance.json";
    if (std::filesystem::exists(ingest_record)) {
      std::ifstream in(ingest_record);
      try {
        entry["ingest"] = Json::parse(in);
      } catch (const Json::exception&) {
        throw DataQualityError(kModule, "unreadable ingest provenance " + ingest_record.string());
      }
    }
    files.push_back(std::move(entry));
  }
  doc["inputs"] = std::move(files);
  return doc;
}

std::vector<std::string> expand(const std::vector<std::string>& names, const std::vector<std::string>& all) {
  if (names.empty()) throw InputError(kModule, "no setup/workload selected");
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.insert(out.end(), all.begin(), all.end());
    } else {
      out.push_back(n);
    }
  }
  return out;
}

cluster::Registry with_tariff(const Context& ctx, const std::optional<path>& tariff) {
  cluster::Registry registry = ctx.registry;
  if (tariff) {
    require_readable(*tariff, "tariff");
    cluster::load_config(*tariff, registry);
  }
  return registry;
}

}  // namespace

void Context::note(const std::string& message) const {
  if (!quiet && log != nullptr) *log << message << '\n';
}

// --- ingest --------------------------------------------------------------------

void run_ingest(const Context& ctx, const IngestOptions& o) {
  require_readable(o.generation, "generation");
  require_readable(o.prices, "price");
  require_readable(o.factors, "emission factor");

  const auto gen_format = format_of(o.generation, o.generation_format);
  energy::GenerationUnit unit =
      gen_format == energy::DataFormat::json ? energy::GenerationUnit::power_mw : energy::GenerationUnit::energy_mwh;
  if (o.generation_unit == "mw") {
    unit = energy::GenerationUnit::power_mw;
  } else if (o.generation_unit == "mwh") {
    unit = energy::GenerationUnit::energy_mwh;
  } else if (!o.generation_unit.empty()) {
    throw InputError(kModule, "generation unit must be mw or mwh");
  }
  const auto offset = parse_utc_offset(o.calendar_offset);

  auto gen_in = open_input(o.generation, "generation");
  const auto records = energy::parse_generation(gen_in, gen_format, unit);
  auto price_in = open_input(o.prices, "price");
  const auto prices = energy::parse_prices(price_in, format_of(o.prices, o.prices_format));
  auto factor_in = open_input(o.factors, "emission factor");
  const auto factors = energy::parse_emission_factors(factor_in);

  energy::BlendOptions blend;
  blend.calendar_offset = offset;
  const auto series = energy::blend_intensity(records, factors, prices, blend);

  std::vector<energy::YearSummary> summary;
  if (o.summary_out) {
    energy::SummaryOptions so;
    so.calendar_offset = offset;
    so.allow_partial = o.allow_partial;
    summary = energy::yearly_summary(series, records, so);
    if (std::filesystem::exists(*o.summary_out)) {
      auto existing_in = open_input(*o.summary_out, "share");
      summary = energy::merge_share_rows(energy::read_share_rows(existing_in), summary);
    }
  }

  write_file(o.out, [&](std::ostream& out) { energy::write_series(out, series); });
  Json record;
  record["generation"] = {{"path", o.generation.string()}, {"sha256", sha256_file(o.generation)}};
  record["prices"] = {{"path", o.prices.string()}, {"sha256", sha256_file(o.prices)}};
  record["factors"] = {{"path", o.factors.string()}, {"sha256", sha256_file(o.factors)}};
  record["intervals"] = series.size();
  record["t_total_h"] = series.t_total();
  auto provenance_path = o.out;
  provenance_path += ".provenance.json";
  write_json(provenance_path, record);
  if (o.summary_out) {
    write_file(*o.summary_out, [&](std::ostream& out) { energy::write_share_rows(out, summary); });
  }
  ctx.note("ingested " + std::to_string(series.size()) + " intervals (" + csv::format_double(series.t_total()) +
           " h) -> " + o.out.string());
}

// --- optimize ------------------------------------------------------------------

void run_optimize(const Context& ctx, const OptimizeOptions& o) {
  require_readable(o.data, "interval");
  const auto registry = with_tariff(ctx, o.tariff);
  const auto objective = dispatch::parse_objective(o.objective);
  const auto series = load_series(o.data);

  auto setups = expand(o.setups, registry.setup_names());
  const auto workloads = expand(o.workloads, registry.workload_names());
  const bool single = setups.size() == 1 && workloads.size() == 1;
  if (objective == dispatch::Objective::cost &&
      std::find(o.setups.begin(), o.setups.end(), "all") != o.setups.end()) {
    std::erase_if(setups, [&](const std::string& s) { return !registry.setup(s).acq_eur_per_core_hour; });
  }
  for (const auto& s : setups) (void)registry.setup(s);
  for (const auto& w : workloads) (void)registry.workload(w);

  const dispatch::QuantileIndex index(series, dispatch::metric_for(objective));
  struct Cell {
    dispatch::OptimizationResult result;
    dispatch::DispatchPolicy policy;
  };
  std::vector<Cell> cells;
  for (const auto& s : setups) {
    for (const auto& w : workloads) {
      auto result = dispatch::optimise(index, registry.setup(s), registry.workload(w), objective, &registry.tariff());
      auto policy = index.policy(result.best().run_count, result.u_opt());
      cells.push_back({std::move(result), std::move(policy)});
    }
  }

  const Json prov = provenance({o.data});
  Json table;
  table["objective"] = std::string(dispatch::objective_name(objective));
  table["rows"] = Json::array();
  for (const auto& cell : cells) {
    const auto& r = cell.result;
    const path dir = single ? o.out : o.out / (r.setup + "__" + r.workload);
    write_json(dir / "result.json", to_json(r, dispatch::switching_count(cell.policy)));
    write_file(dir / "curve.csv", [&](std::ostream& out) { write_curve(out, r); });
    write_file(dir / "schedule.csv", [&](std::ostream& out) { write_schedule(out, series, cell.policy); });
    write_json(dir / "provenance.json", prov);
    table["rows"].push_back({{"setup", r.setup},
                             {"workload", r.workload},
                             {"u_opt", r.u_opt()},
                             {"X", r.threshold() ? Json(*r.threshold()) : Json(nullptr)},
                             {"relative_objective", r.relative_objective()}});
    ctx.note(r.setup + " / " + r.workload + ": u_opt " + fixed(r.u_opt(), 3) + ", X " +
             (r.threshold() ? fixed(*r.threshold(), 2) : std::string("-")) + ", relative " +
             fixed(r.relative_objective(), 3));
  }
  if (!single) {
    table["provenance"] = prov;
    write_json(o.out / "result_table.json", table);
    write_file(o.out / "result_table.csv", [&](std::ostream& out) {
      out << "setup,workload,u_opt,X,relative_objective\n";
      for (const auto& row : table["rows"]) {
        out << row["setup"].get<std::string>() << ',' << row["workload"].get<std::string>() << ','
            << csv::format_double(row["u_opt"].get<double>()) << ','
            << (row["X"].is_null() ? std::string() : csv::format_double(row["X"].get<double>())) << ','
            << csv::format_double(row["relative_objective"].get<double>()) << '\n';
      }
    });
  }
}

// --- sweep ---------------------------------------------------------------------

void run_sweep(const Context& ctx, const SweepOptions& o) {
  require_readable(o.data, "interval");
  const auto registry = with_tariff(ctx, o.tariff);
  const auto parameter = sensitivity::parse_parameter(o.parameter);
  auto objective = dispatch::parse_objective(o.objective);
  if (parameter == sensitivity::SweepParameter::acq_rate) objective = dispatch::Objective::cost;

  std::vector<double> values = o.values;
  if (values.empty()) {
    const double from = o.from.value_or(parameter == sensitivity::SweepParameter::idle_ratio ? 0.0 : 0.5);
    const double to = o.to.value_or(parameter == sensitivity::SweepParameter::idle_ratio ? 1.0 : 1.5);
    values = sensitivity::linspace(from, to, o.steps);
  }
  const auto series = load_series(o.data);
  const auto setups = expand(o.setups, registry.setup_names());
  const auto workloads = expand(o.workloads, registry.workload_names());

  std::vector<SweepTableRow> rows;
  for (const auto& s : setups) {
    for (const auto& w : workloads) {
      sensitivity::SweepSpec spec;
      spec.parameter = parameter;
      spec.values = values;
      spec.setup = registry.setup(s);
      spec.workload = registry.workload(w);
      spec.objective = objective;
      spec.tariff = registry.tariff();
      for (const auto& row : sensitivity::sweep(spec, series)) {
        rows.push_back({s, w, std::string(dispatch::objective_name(objective)),
                        std::string(sensitivity::parameter_name(parameter)), row});
      }
    }
  }
  write_file(o.out / "sweep.csv", [&](std::ostream& out) { write_sweep(out, rows); });
  write_json(o.out / "provenance.json", provenance({o.data}));
  ctx.note("sweep: " + std::to_string(rows.size()) + " rows -> " + (o.out / "sweep.csv").string());
}

// --- validate ------------------------------------------------------------------

void run_validate(const Context& ctx, const ValidateOptions& o) {
  require_readable(o.base, "base interval");
  require_readable(o.target, "target interval");
  require_readable(o.shares, "share");
  const auto base = load_series(o.base);
  const auto target = load_series(o.target);
  auto shares_in = open_input(o.shares, "share");
  const energy::RenewableShareTable shares(energy::read_share_rows(shares_in));

  validation::ValidationInputs in{&base, &target, &shares, o.base_year, o.target_year};
  const auto report =
      validation::validate_threshold(in, ctx.registry.setup(o.setup), ctx.registry.workload(o.workload));
  write_json(o.out / "validation.json", to_json(report));
  write_json(o.out / "provenance.json", provenance({o.base, o.target, o.shares}));
  ctx.note("validation " + std::to_string(report.base_year) + " -> " + std::to_string(report.target_year) +
           ": u_extra " + fixed(report.u_extra, 3) + " vs u_target " + fixed(report.u_target, 3) + ", X_extra " +
           fixed(report.x_extra, 2) + " vs X_target " + fixed(report.x_target, 2));
}

// --- compare-freq --------------------------------------------------------------

void run_compare_freq(const Context& ctx, const CompareFreqOptions& o) {
  require_readable(o.data, "interval");
  const auto series = load_series(o.data);
  const sensitivity::FreqLimitSpec spec{o.power_reduction, o.performance_drop};
  const auto& setup = ctx.registry.setup(o.setup);
  Json doc;
  doc["comparisons"] = Json::array();
  for (const auto& w : expand(o.workloads, ctx.registry.workload_names())) {
    const auto cmp = sensitivity::freq_limited_emission(series, setup, ctx.registry.workload(w), spec, o.combined);
    doc["comparisons"].push_back(to_json(cmp, spec, setup.name, w));
    ctx.note(setup.name + " / " + w + ": clock-limited ratio " + fixed(cmp.ratio, 3) + ", dynamic " +
             fixed(cmp.nominal_dynamic_relative, 3));
  }
  write_json(o.out / "freq_compare.json", doc);
  write_json(o.out / "provenance.json", provenance({o.data}));
}

// --- report --------------------------------------------------------------------

void run_report(const Context& ctx, const ReportOptions& o) {
  std::vector<path> files;
  for (const auto& dir : o.inputs) {
    if (!std::filesystem::is_directory(dir)) throw InputError(kModule, "report input '" + dir.string() + "' is not a directory");
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  const auto setup_order = ctx.registry.setup_names();
  const auto workload_order = ctx.registry.workload_names();
  auto rank = [](const std::vector<std::string>& order, const std::string& name) {
    const auto it = std::find(order.begin(), order.end(), name);
    return static_cast<std::size_t>(it - order.begin());
  };
  auto key = [&](const std::string& s, const std::string& w) {
    return std::make_pair(rank(setup_order, s), rank(workload_order, w));
  };

  struct ResultRow {
    std::pair<std::size_t, std::size_t> key;
    std::string setup, workload;
    double u_opt;
    std::optional<double> x;
    double relative;
  };
  std::map<std::string, std::vector<ResultRow>> results;  // by objective
  std::vector<std::pair<std::tuple<std::size_t, std::size_t, double>, SweepTableRow>> embedded, idle, acq;
  std::vector<Json> validations;
  std::vector<Json> freq;

  for (const auto& f : files) {
    const auto name = f.filename().string();
    if (name == "result.json") {
      std::ifstream in(f);
      const auto doc = Json::parse(in);
      const auto s = doc.at("setup").get<std::string>();
      const auto w = doc.at("workload").get<std::string>();
      results[doc.at("objective").get<std::string>()].push_back(
          {key(s, w), s, w, doc.at("u_opt").get<double>(),
           doc.at("threshold").is_null() ? std::nullopt : std::optional<double>(doc.at("threshold").get<double>()),
           doc.at("relative_objective").get<double>()});
    } else if (name == "sweep.csv") {
      std::ifstream in(f);
      const auto rows = csv::read_rows(in);
      if (rows.empty() || rows.front().fields != csv::split_line(kSweepHeader)) {
        throw DataQualityError(kModule, "unexpected sweep header in " + f.string());
      }
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& c = rows[r].fields;
        if (c.size() != 8) throw DataQualityError(kModule, "malformed sweep row in " + f.string());
        SweepTableRow row{c[0], c[1], c[2], c[3], {}};
        row.row.value = csv::parse_double(c[4]).value_or(0.0);
        row.row.u_opt = csv::parse_double(c[5]).value_or(0.0);
        row.row.threshold = csv::parse_double(c[6]);
        row.row.relative_objective = csv::parse_double(c[7]).value_or(0.0);
        const auto k = key(row.setup, row.workload);
        auto entry = std::make_pair(std::make_tuple(k.first, k.second, row.row.value), row);
        if (row.parameter == "embedded_rate") {
          embedded.push_back(entry);
        } else if (row.parameter == "idle_ratio") {
          idle.push_back(entry);
        } else {
          acq.push_back(entry);
        }
      }
    } else if (name == "validation.json") {
      std::ifstream in(f);
      validations.push_back(Json::parse(in));
    } else if (name == "freq_compare.json") {
      std::ifstream in(f);
      const auto doc = Json::parse(in);
      for (const auto& c : doc.at("comparisons")) freq.push_back(c);
    }
  }

  if (results.empty() && embedded.empty() && idle.empty() && acq.empty() && validations.empty() && freq.empty()) {
    throw InputError(kModule, "no result files found under the report inputs");
  }

  auto write_results = [&](const std::string& objective, const std::string& file) {
    auto rows = results[objective];
    if (rows.empty()) return;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    write_file(o.out / file, [&](std::ostream& out) {
      out << "setup,workload,u_opt,X,relative_objective\n";
      for (const auto& r : rows) {
        out << r.setup << ',' << r.workload << ',' << fixed(r.u_opt, 3) << ',' << (r.x ? fixed(*r.x, 2) : "-") << ','
            << fixed(r.relative, 3) << '\n';
      }
    });
  };
  write_results("emission", "table4_emission.csv");
  write_results("cost", "table7_cost.csv");

  auto write_sweep_table = [&](auto& rows, const std::string& file, const std::string& value_column) {
    if (rows.empty()) return;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    write_file(o.out / file, [&](std::ostream& out) {
      out << "setup,workload," << value_column << ",u_opt,X,relative_objective\n";
      for (const auto& [k, r] : rows) {
        out << r.setup << ',' << r.workload << ',' << csv::format_double(r.row.value) << ',' << fixed(r.row.u_opt, 3)
            << ',' << (r.row.threshold ? fixed(*r.row.threshold, 2) : "-") << ',' << fixed(r.row.relative_objective, 3)
            << '\n';
      }
    });
  };
  write_sweep_table(embedded, "table5_embedded.csv", "embedded_factor");
  write_sweep_table(idle, "fig4_idle_ratio.csv", "idle_ratio");
  write_sweep_table(acq, "fig7_acquisition.csv", "acq_factor");

  if (!validations.empty()) {
    std::sort(validations.begin(), validations.end(),
              [](const Json& a, const Json& b) { return a.at("target_year") < b.at("target_year"); });
    write_file(o.out / "table6_validation.csv", [&](std::ostream& out) {
      out << "validation_period,u_extra,X_extra,u_target,X_target,X_relative_deviation\n";
      for (const auto& v : validations) {
        out << v.at("target_year").get<int>() << ',' << fixed(v.at("u_extra").get<double>(), 3) << ','
            << fixed(v.at("x_extra").get<double>(), 2) << ',' << fixed(v.at("u_target").get<double>(), 3) << ','
            << fixed(v.at("x_target").get<double>(), 2) << ','
            << fixed(v.at("x_relative_deviation").get<double>() * 100.0, 2) << "%\n";
      }
    });
  }
  if (!freq.empty()) {
    write_file(o.out / "freq_compare.csv", [&](std::ostream& out) {
      out << "setup,workload,clock_limited_ratio,dynamic_relative,dynamic_u_opt\n";
      for (const auto& c : freq) {
        out << c.at("setup").get<std::string>() << ',' << c.at("workload").get<std::string>() << ','
            << fixed(c.at("ratio").get<double>(), 3) << ',' << fixed(c.at("dynamic_relative").get<double>(), 3) << ','
            << fixed(c.at("dynamic_u_opt").get<double>(), 3) << '\n';
      }
    });
  }
  ctx.note("report written to " + o.out.string());
}

}  // namespace gridflex::cli
