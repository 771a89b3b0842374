#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fetch.hpp"
#include "gridflex/cli.hpp"
#include "gridflex/config.hpp"
#include "gridflex/errors.hpp"
#include "gridflex/kernels.hpp"
#include "json.hpp"

#ifndef GRIDFLEX_VERSION
#define GRIDFLEX_VERSION "dev"
#endif

namespace gridflex::cli {
namespace {

void report_error(std::ostream& err, std::string_view kind, std::string_view module, std::string_view message) {
  nlohmann::ordered_json line;
  line["error"] = kind;
  line["module"] = module;
  line["message"] = message;
  err << line.dump() << '\n';
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input:
      return kInputError;
    case ErrorKind::data_quality:
      return kDataQualityError;
    case ErrorKind::invariant:
      return kInvariantError;
  }
  return kInvariantError;
}

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input:
      return "input";
    case ErrorKind::data_quality:
      return "data_quality";
    case ErrorKind::invariant:
      return "invariant";
  }
  return "invariant";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grid-aware dispatch planning for compute clusters", "gridflex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GRIDFLEX_VERSION);

  std::filesystem::path config;
  std::filesystem::path global_out;
  bool quiet = false;
  app.add_option("--config", config, "TOML file with extra setups, workloads or tariff")->check(CLI::ExistingFile);
  app.add_option("--out", global_out, "Output directory for subcommands without their own --out");
  app.add_flag("-q,--quiet", quiet, "Suppress progress lines");
  app.fallthrough();

  IngestOptions ingest;
  std::string summary_out;
  auto* c_ingest = app.add_subcommand("ingest", "Blend raw generation and prices into an interval series");
  c_ingest->add_option("--generation", ingest.generation, "Generation per source (csv or json)")->required();
  c_ingest->add_option("--prices", ingest.prices, "Day-ahead prices (csv or json)")->required();
  c_ingest->add_option("--factors", ingest.factors, "Emission factors per source (csv)")->required();
  c_ingest->add_option("--out", ingest.out, "Interval series csv to write (default: <global out>/intervals.csv)");
  c_ingest->add_option("--generation-format", ingest.generation_format)->check(CLI::IsMember({"csv", "json"}));
  c_ingest->add_option("--prices-format", ingest.prices_format)->check(CLI::IsMember({"csv", "json"}));
  c_ingest->add_option("--generation-unit", ingest.generation_unit, "mwh (energy per interval) or mw (mean power)")
      ->check(CLI::IsMember({"mwh", "mw"}));
  c_ingest->add_option("--calendar-offset", ingest.calendar_offset, "UTC offset used to assign intervals to years")
      ->capture_default_str();
  c_ingest->add_option("--summary", summary_out, "Yearly renewable share table to create or update");
  c_ingest->add_flag("--allow-partial", ingest.allow_partial, "Accept years with less than 95% coverage");

  FetchOptions fetch;
  auto* c_fetch = app.add_subcommand("fetch", "Download one year of raw generation and price data");
  c_fetch->add_option("--year", fetch.year)->required();
  c_fetch->add_option("--out-dir,--out", fetch.out_dir);
  c_fetch->add_option("--base-url", fetch.base_url)->capture_default_str();
  c_fetch->add_option("--country", fetch.country)->capture_default_str();
  c_fetch->add_option("--bidding-zone", fetch.bidding_zone)->capture_default_str();

  OptimizeOptions optimize;
  auto* c_opt = app.add_subcommand("optimize", "Find the utilisation minimising emissions or cost");
  c_opt->add_option("--data", optimize.data, "Interval series csv")->required();
  c_opt->add_option("--setup", optimize.setups, "Setup name(s) or 'all'")->required()->delimiter(',');
  c_opt->add_option("--workload", optimize.workloads, "Workload name(s) or 'all'")->required()->delimiter(',');
  c_opt->add_option("--objective", optimize.objective)->check(CLI::IsMember({"emission", "cost"}))->capture_default_str();
  c_opt->add_option("--tariff", optimize.tariff, "TOML file with a [tariff] section");
  c_opt->add_option("--out", optimize.out);

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Repeat the optimisation over a parameter range");
  c_sweep->add_option("--data", sweep.data)->required();
  c_sweep->add_option("--param", sweep.parameter, "idle-ratio, embedded or acq")
      ->check(CLI::IsMember({"idle-ratio", "embedded", "acq"}))
      ->capture_default_str();
  c_sweep->add_option("--from", sweep.from);
  c_sweep->add_option("--to", sweep.to);
  c_sweep->add_option("--steps", sweep.steps)->capture_default_str();
  c_sweep->add_option("--values", sweep.values, "Explicit values, overrides --from/--to")->delimiter(',');
  c_sweep->add_option("--setup", sweep.setups)->required()->delimiter(',');
  c_sweep->add_option("--workload", sweep.workloads)->required()->delimiter(',');
  c_sweep->add_option("--objective", sweep.objective)->check(CLI::IsMember({"emission", "cost"}))->capture_default_str();
  c_sweep->add_option("--tariff", sweep.tariff);
  c_sweep->add_option("--out", sweep.out);

  ValidateOptions validate;
  auto* c_val = app.add_subcommand("validate", "Carry a threshold to another year and compare");
  c_val->add_option("--base", validate.base, "Interval series of the base year")->required();
  c_val->add_option("--target", validate.target, "Interval series of the target year")->required();
  c_val->add_option("--shares", validate.shares, "Yearly renewable share table")->required();
  c_val->add_option("--setup", validate.setup)->capture_default_str();
  c_val->add_option("--workload", validate.workload)->capture_default_str();
  c_val->add_option("--base-year", validate.base_year, "Default: dominant year of --base");
  c_val->add_option("--target-year", validate.target_year, "Default: dominant year of --target");
  c_val->add_option("--out", validate.out);

  CompareFreqOptions freq;
  auto* c_freq = app.add_subcommand("compare-freq", "Constant operation at a limited clock versus dynamic operation");
  c_freq->add_option("--data", freq.data)->required();
  c_freq->add_option("--setup", freq.setup)->capture_default_str();
  c_freq->add_option("--workload", freq.workloads)->delimiter(',')->capture_default_str();
  c_freq->add_option("--power-reduction", freq.power_reduction)->capture_default_str();
  c_freq->add_option("--performance-drop", freq.performance_drop)->capture_default_str();
  c_freq->add_flag("--combined", freq.combined, "Also optimise the clock-limited setup dynamically");
  c_freq->add_option("--out", freq.out);

  ReportOptions report;
  auto* c_report = app.add_subcommand("report", "Collect result files into summary tables");
  c_report->add_option("--inputs", report.inputs, "Directories holding command outputs")->required()->delimiter(',');
  c_report->add_option("--out", report.out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e, out, err);
    report_error(err, "input", "cli_report", e.what());
    return kInputError;
  }

  try {
    Context ctx;
    ctx.quiet = quiet;
    ctx.log = &err;
    if (!config.empty()) cluster::load_config(config, ctx.registry);
    auto resolve_out = [&](std::filesystem::path& target, const std::filesystem::path& fallback) {
      if (!target.empty()) return;
      if (global_out.empty()) throw InputError("cli_report", "no output location given (--out)");
      target = fallback;
    };

    if (*c_ingest) {
      resolve_out(ingest.out, global_out / "intervals.csv");
      if (!summary_out.empty()) ingest.summary_out = summary_out;
      run_ingest(ctx, ingest);
    } else if (*c_fetch) {
      resolve_out(fetch.out_dir, global_out);
      for (const auto& p : fetch_year(fetch)) ctx.note("wrote " + p.string());
    } else if (*c_opt) {
      resolve_out(optimize.out, global_out);
      run_optimize(ctx, optimize);
    } else if (*c_sweep) {
      resolve_out(sweep.out, global_out);
      run_sweep(ctx, sweep);
    } else if (*c_val) {
      resolve_out(validate.out, global_out);
      run_validate(ctx, validate);
    } else if (*c_freq) {
      resolve_out(freq.out, global_out);
      run_compare_freq(ctx, freq);
    } else if (*c_report) {
      resolve_out(report.out, global_out);
      run_report(ctx, report);
    }
    ctx.note(std::string("kernels: ") + std::string(kernels::isa_name(kernels::active().isa)));
  } catch (const Error& e) {
    report_error(err, kind_name(e.kind()), e.module(), e.what());
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "data_quality", "cli_report", e.what());
    return kDataQualityError;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "input", "cli_report", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    report_error(err, "invariant", "cli_report", e.what());
    return kInvariantError;
  }
  return kSuccess;
}

}  // namespace gridflex::cli
