// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   gridflex_acceptance            all criteria
//   gridflex_acceptance 1 9        selected criteria
//
// Criteria that need real grid data read them from $GRIDFLEX_DATA_DIR:
//   intervals_2023.csv, intervals_2024.csv, intervals_2025.csv  (ingested series)
//   shares.csv                                                  (yearly share table)
// Without them those criteria report SKIP. Exit status: 0 all selected passed,
// 1 any failed, 77 nothing failed but something was skipped.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gridflex/cluster_model.hpp"
#include "gridflex/dispatch.hpp"
#include "gridflex/energy_data.hpp"
#include "gridflex/sensitivity.hpp"
#include "gridflex/validation.hpp"
#include "../support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace gridflex;
using dispatch::Objective;

namespace {

constexpr int kSkipCode = 77;

// Tolerances for reproducing published tables.
constexpr double kUTol = 0.02;         // absolute, on u_opt
constexpr double kXRelTol = 0.03;      // relative, on the threshold
constexpr double kRelObjTol = 0.01;    // absolute, on relative emissions
constexpr double kOracleRelTol = 1e-9;
constexpr double kCellSeconds = 60.0;

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::fail, std::move(d)}; }
Outcome skip(std::string d) { return {Status::skip, std::move(d)}; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// --- data ----------------------------------------------------------------------

std::optional<fs::path> data_file(const std::string& name) {
  const char* dir = std::getenv("GRIDFLEX_DATA_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  const fs::path p = fs::path(dir) / name;
  if (!fs::exists(p)) return std::nullopt;
  return p;
}

std::string missing(const std::vector<std::string>& names) {
  std::string out = "needs";
  for (const auto& n : names) {
    if (!data_file(n)) out += " " + n;
  }
  return out + " in GRIDFLEX_DATA_DIR";
}

const energy::IntervalSeries* series_for(int year) {
  static std::map<int, energy::IntervalSeries> cache;
  if (auto it = cache.find(year); it != cache.end()) return &it->second;
  const auto p = data_file("intervals_" + std::to_string(year) + ".csv");
  if (!p) return nullptr;
  std::ifstream in(*p);
  return &cache.emplace(year, energy::read_series(in)).first->second;
}

const energy::RenewableShareTable* share_table() {
  static std::optional<energy::RenewableShareTable> table;
  if (table) return &*table;
  const auto p = data_file("shares.csv");
  if (!p) return nullptr;
  std::ifstream in(*p);
  table.emplace(energy::read_share_rows(in));
  return &*table;
}

const cluster::Registry& registry() {
  static const auto reg = cluster::Registry::builtin();
  return reg;
}

// Reference rows: u_opt, threshold (nullopt: constant operation), relative objective.
struct Reference {
  std::string setup;
  std::string workload;
  double u;
  std::optional<double> x;
  double rel;
};

const std::vector<Reference>& emission_reference() {
  static const std::vector<Reference> rows{
      {"baf_default", "medium", 1.000, std::nullopt, 1.000}, {"baf_default", "heavy", 0.975, 699.90, 0.998},
      {"baf_default", "backfilling", 0.745, 515.01, 0.955},  {"baf_modern", "medium", 0.983, 714.13, 0.999},
      {"baf_modern", "heavy", 0.882, 607.45, 0.988},         {"baf_modern", "backfilling", 0.635, 458.11, 0.918},
      {"deep_cm", "medium", 1.000, std::nullopt, 1.000},     {"deep_cm", "heavy", 1.000, std::nullopt, 1.000},
      {"deep_cm", "backfilling", 0.916, 635.90, 0.993},      {"deep_dam", "medium", 1.000, std::nullopt, 1.000},
      {"deep_dam", "heavy", 1.000, std::nullopt, 1.000},     {"deep_dam", "backfilling", 1.000, std::nullopt, 1.000},
      {"gridka_arm", "medium", 1.000, std::nullopt, 1.000},  {"gridka_arm", "heavy", 1.000, std::nullopt, 1.000},
      {"gridka_arm", "backfilling", 0.953, 671.458, 0.997},
  };
  return rows;
}

// Compares one optimisation with a reference row; returns an empty string on success.
std::string compare(const Reference& ref, double u, std::optional<double> x, double rel, bool exact_constant) {
  std::ostringstream why;
  if (std::abs(u - ref.u) > kUTol) why << " u " << fmt("%.3f", u) << " vs " << fmt("%.3f", ref.u) << ";";
  if (ref.x && x) {
    if (std::abs(*x - *ref.x) / *ref.x > kXRelTol) why << " X " << fmt("%.2f", *x) << " vs " << fmt("%.2f", *ref.x) << ";";
  } else if (ref.x.has_value() != x.has_value() && (exact_constant || std::abs(u - ref.u) > kUTol)) {
    why << " threshold presence differs;";
  }
  if (std::abs(rel - ref.rel) > kRelObjTol) why << " rel " << fmt("%.3f", rel) << " vs " << fmt("%.3f", ref.rel) << ";";
  if (exact_constant && !(u == 1.0 && !x && rel == 1.0)) why << " expected exact constant operation;";
  return why.str();
}

// --- criteria ------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  const cluster::TariffModel tariff{100.0};
  std::size_t argmin_mismatch = 0;
  std::size_t value_mismatch = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = testing::random_series(rng, 12);
    const auto setup = testing::random_setup(rng);
    const auto work = testing::random_workload(rng);
    const bool cost = trial % 2 == 1;
    const auto r = dispatch::optimise(s, setup, work, cost ? Objective::cost : Objective::emission, &tariff);
    const auto o = testing::brute_force(s, setup, work, cost, tariff.yearly_demand_eur_per_kw);
    if (r.best().run_count != o.best_count) ++argmin_mismatch;
    for (std::size_t k = 0; k < o.values.size(); ++k) {
      const double d = testing::relative_difference(r.curve[k].total, o.values[k].total);
      worst = std::max(worst, d);
      if (d > kOracleRelTol) ++value_mismatch;
    }
    const double best_d = testing::relative_difference(r.best().total, o.values[o.best_count - 1].total);
    if (best_d > kOracleRelTol) ++value_mismatch;
  }
  const double secs = seconds_since(start);
  std::string detail = "1000 series; argmin mismatches " + std::to_string(argmin_mismatch) +
                       ", objective mismatches " + std::to_string(value_mismatch) + ", max rel. deviation " +
                       fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s";
  return argmin_mismatch == 0 && value_mismatch == 0 && secs < 60.0 ? pass(detail) : fail(detail);
}

Outcome table_emission() {
  const auto* s = series_for(2024);
  if (s == nullptr) return skip(missing({"intervals_2024.csv"}));
  const dispatch::QuantileIndex index(*s, energy::Metric::intensity);
  std::string failures;
  double slowest = 0.0;
  for (const auto& ref : emission_reference()) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = dispatch::optimise(index, registry().setup(ref.setup), registry().workload(ref.workload),
                                      Objective::emission);
    slowest = std::max(slowest, seconds_since(start));
    const auto why = compare(ref, r.u_opt(), r.threshold(), r.relative_objective(), ref.setup == "deep_dam");
    if (!why.empty()) failures += " " + ref.setup + "/" + ref.workload + ":" + why;
  }
  const std::string detail = "15 cells, slowest " + fmt("%.3f", slowest) + " s" + failures;
  return failures.empty() && slowest < kCellSeconds ? pass(detail) : fail(detail);
}

Outcome table_embedded() {
  const auto* s = series_for(2024);
  if (s == nullptr) return skip(missing({"intervals_2024.csv"}));
  const auto rows = sensitivity::embedded_variation(*s, registry().setup("baf_modern"),
                                                    registry().workload("backfilling"), {0.5, 1.0, 1.5});
  const std::vector<Reference> refs{{"baf_modern", "x0.5", 0.594, 436.78, 0.896},
                                    {"baf_modern", "x1.0", 0.635, 458.11, 0.918},
                                    {"baf_modern", "x1.5", 0.723, 500.78, 0.949}};
  std::string failures;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto why = compare(refs[i], rows[i].u_opt, rows[i].threshold, rows[i].relative_objective, false);
    if (!why.empty()) failures += " " + refs[i].workload + ":" + why;
  }
  const bool ordered = rows[0].u_opt < rows[1].u_opt && rows[1].u_opt < rows[2].u_opt;
  if (!ordered) failures += " u_opt ordering violated;";
  const std::string detail = "u_opt " + fmt("%.3f", rows[0].u_opt) + " < " + fmt("%.3f", rows[1].u_opt) + " < " +
                             fmt("%.3f", rows[2].u_opt) + failures;
  return failures.empty() ? pass(detail) : fail(detail);
}

Outcome threshold_validation() {
  const auto* base = series_for(2024);
  const auto* y2023 = series_for(2023);
  const auto* y2025 = series_for(2025);
  const auto* shares = share_table();
  if (!base || !y2023 || !y2025 || !shares) {
    return skip(missing({"intervals_2023.csv", "intervals_2024.csv", "intervals_2025.csv", "shares.csv"}));
  }
  std::string detail;
  bool ok = true;
  for (const auto& [year, series] : {std::pair{2023, y2023}, std::pair{2025, y2025}}) {
    const auto rep = validation::validate_threshold({base, series, shares, 2024, year}, registry().setup("baf_modern"),
                                                    registry().workload("backfilling"));
    const bool target_ok = std::abs(rep.u_target - 0.635) <= kUTol;
    const bool u_ok = std::abs(rep.u_deviation) <= kUTol;
    const bool x_ok = rep.x_relative_deviation <= kXRelTol;
    ok = ok && target_ok && u_ok && x_ok;
    detail += " " + std::to_string(year) + ": u_target " + fmt("%.3f", rep.u_target) + ", u_extra " +
              fmt("%.3f", rep.u_extra) + ", X_extra " + fmt("%.2f", rep.x_extra) + ", X_target " +
              fmt("%.2f", rep.x_target) + ", dev " + fmt("%.2f", rep.x_relative_deviation * 100) + "%;";
  }
  return ok ? pass(detail.substr(1)) : fail(detail.substr(1));
}

Outcome idle_ratio_sweep() {
  const auto* s = series_for(2024);
  if (s == nullptr) return skip(missing({"intervals_2024.csv"}));
  std::string failures;
  for (const auto& name : registry().setup_names()) {
    sensitivity::SweepSpec spec;
    spec.parameter = sensitivity::SweepParameter::idle_ratio;
    spec.values = sensitivity::linspace(0.0, 1.0, 101);
    spec.setup = registry().setup(name);
    spec.workload = registry().workload("backfilling");
    const auto rows = sensitivity::sweep(spec, *s);
    if (!(rows.front().relative_objective < 0.5)) {
      failures += " " + name + ": ratio 0 gives " + fmt("%.3f", rows.front().relative_objective) + ";";
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].value >= 0.45 - 1e-12 && std::abs(rows[i].relative_objective - 1.0) > 0.005) {
        failures += " " + name + ": ratio " + fmt("%.2f", rows[i].value) + " gives " +
                    fmt("%.4f", rows[i].relative_objective) + ";";
        break;
      }
      if (i > 0 && rows[i].relative_objective < rows[i - 1].relative_objective) {
        failures += " " + name + ": decreasing at " + fmt("%.2f", rows[i].value) + ";";
        break;
      }
    }
  }
  const std::string detail = "5 setups x 101 ratios" + failures;
  return failures.empty() ? pass(detail) : fail(detail);
}

Outcome frequency_limit() {
  const auto* s = series_for(2024);
  if (s == nullptr) return skip(missing({"intervals_2024.csv"}));
  const sensitivity::FreqLimitSpec spec{0.40, 0.19};
  const auto& arm = registry().setup("gridka_arm");
  const auto back = sensitivity::freq_limited_emission(*s, arm, registry().workload("backfilling"), spec);
  const auto medium = sensitivity::freq_limited_emission(*s, arm, registry().workload("medium"), spec);
  const bool ok = back.ratio >= 0.75 && back.ratio <= 0.85 && medium.ratio > 1.0;
  const std::string detail =
      "backfilling ratio " + fmt("%.3f", back.ratio) + " (want [0.75, 0.85]), medium " + fmt("%.3f", medium.ratio) +
      " (want > 1)";
  return ok ? pass(detail) : fail(detail);
}

Outcome cost_properties() {
  const auto* s = series_for(2024);
  if (s == nullptr) return skip(missing({"intervals_2024.csv"}));
  const dispatch::QuantileIndex index(*s, energy::Metric::price);
  std::string detail;
  bool ok = true;
  for (const auto* setup : {"baf_default", "baf_modern"}) {
    for (const auto& w : registry().workload_names()) {
      const auto r = dispatch::optimise(index, registry().setup(setup), registry().workload(w), Objective::cost,
                                        &registry().tariff());
      const bool rel_ok = r.relative_objective() >= 0.99;
      const bool u_ok = w == "backfilling" || r.u_opt() > 0.98;
      ok = ok && rel_ok && u_ok;
      detail += std::string(" ") + setup + "/" + w + " " + fmt("%.3f", r.u_opt()) + "/" +
                fmt("%.3f", r.relative_objective()) + (rel_ok && u_ok ? "" : " (!)") + ";";
    }
  }
  return ok ? pass("u_opt/relative cost:" + detail) : fail("u_opt/relative cost:" + detail);
}

Outcome switching() {
  const auto* s = series_for(2024);
  if (s == nullptr) return skip(missing({"intervals_2024.csv"}));
  const dispatch::QuantileIndex index(*s, energy::Metric::intensity);
  const auto r = dispatch::optimise(index, registry().setup("baf_modern"), registry().workload("backfilling"),
                                    Objective::emission);
  const auto pauses = dispatch::switching_count(index.policy(r.best().run_count, r.u_opt()));
  const std::string detail = std::to_string(pauses) + " pause events (want [180, 280])";
  return pauses >= 180 && pauses <= 280 ? pass(detail) : fail(detail);
}

// Compact property checks over every module; the unit tests hold the long form.
Outcome invariants() {
  std::mt19937_64 rng(9);
  std::vector<std::string> failed;
  std::size_t checked = 0;
  auto check = [&](const std::string& name, bool ok) {
    ++checked;
    if (!ok && (failed.empty() || failed.back() != name)) failed.push_back(name);
  };
  const cluster::TariffModel tariff{100.0};
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const auto s = testing::random_series(rng, 48);
    const auto setup = testing::random_setup(rng);
    const auto work = testing::random_workload(rng);
    double longest = 0.0;
    for (const double d : s.durations()) longest = std::max(longest, d);

    // quantile / CDF inverse consistency
    const double u = std::max(unit(rng), longest / s.t_total());
    const double x = validation::matching_threshold(s, u);
    check("quantile-cdf inverse", std::abs(validation::achieved_utilisation(s, x) - u) <= longest / s.t_total() + 1e-12);

    // breakdown additivity, term signs, relative objective <= 1, u = 1 point
    const auto r = dispatch::optimise(s, setup, work, Objective::emission);
    const auto c = dispatch::optimise(s, setup, work, Objective::cost, &tariff);
    for (const auto& p : r.curve) {
      check("breakdown additivity", p.total == (p.hardware + p.operation) + p.idle);
      check("non-negative emission terms", p.hardware >= 0 && p.operation >= 0 && p.idle >= 0);
    }
    for (const auto& p : c.curve) check("breakdown additivity", p.total == ((p.hardware + p.demand) + p.operation) + p.idle);
    check("relative objective <= 1", r.relative_objective() <= 1.0 && c.relative_objective() <= 1.0);
    check("u = 1 has no idle term", r.constant_operation().idle == 0.0 && r.constant_operation().u == 1.0);

    // mask / threshold consistency
    const dispatch::QuantileIndex index(s, energy::Metric::intensity);
    const auto policy = index.policy(r.best().run_count, r.u_opt());
    const auto m = dispatch::emission_from_mask(s, setup, work, policy.run_mask);
    check("mask consistency", testing::relative_difference(m.total, r.best().total) < 1e-12);

    // monotone term structure
    for (std::size_t k = 1; k < r.curve.size(); ++k) {
      check("monotone terms", r.curve[k - 1].hardware >= r.curve[k].hardware &&
                                  r.curve[k - 1].operation * r.curve[k - 1].u <= r.curve[k].operation * r.curve[k].u * (1 + 1e-12));
    }

    // scaling invariance without embedded emissions
    auto no_emb = setup;
    no_emb.embedded_kg_per_core_hour = 0.0;
    check("argmin scaling invariance",
          dispatch::optimise(s, no_emb, work, Objective::emission).u_opt() ==
              dispatch::optimise(s.scaled(energy::Metric::intensity, 8.0), no_emb, work, Objective::emission).u_opt());

    // monotonicity in the idle ratio and in the embedded factor
    if (trial % 4 == 0) {
      sensitivity::SweepSpec spec;
      spec.parameter = sensitivity::SweepParameter::idle_ratio;
      spec.values = sensitivity::linspace(0.0, 1.0, 11);
      spec.setup = setup;
      spec.workload = work;
      const auto rows = sensitivity::sweep(spec, s);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        check("monotone in idle ratio", rows[i].relative_objective >= rows[i - 1].relative_objective - 1e-12);
      }
      check("idle ratio 1 gives 1", rows.back().relative_objective == 1.0 && rows.back().u_opt == 1.0);
      const auto emb = sensitivity::embedded_variation(s, setup, work, sensitivity::linspace(0.1, 3.0, 11));
      for (std::size_t i = 1; i < emb.size(); ++i) check("monotone in embedded factor", emb[i].u_opt >= emb[i - 1].u_opt);
    }

    // round-trip through the canonical interval file
    std::stringstream buf;
    energy::write_series(buf, s);
    check("interval round trip", energy::read_series(buf) == s);

    // average power bounds
    const double p = cluster::average_power(setup, work);
    check("average power bounds", p >= setup.p_idle_w && p <= setup.p_max_w);
  }

  // blend bounds and rescaling invariance
  std::uniform_real_distribution<double> gen(0.0, 400.0), ef(0.0, 1200.0);
  const std::vector<std::string> sources{"solar", "wind_offshore", "lignite", "hard_coal", "gas", "biomass"};
  for (int trial = 0; trial < 100; ++trial) {
    energy::EmissionFactors factors;
    std::map<std::string, double> table;
    for (const auto& name : sources) table[name] = ef(rng);
    factors.add({0, table});
    std::vector<energy::GenerationRecord> rec, scaled;
    std::vector<energy::PriceRecord> prices;
    for (int i = 0; i < 8; ++i) {
      energy::GenerationRecord g{testing::t0() + std::chrono::minutes(15 * i), 0.25, {}};
      for (const auto& name : sources) g.per_source_mwh[name] = rng() % 3 == 0 ? 0.0 : gen(rng);
      g.per_source_mwh["gas"] += 0.5;
      auto h = g;
      for (auto& [_, v] : h.per_source_mwh) v *= 37.5;
      rec.push_back(g);
      scaled.push_back(h);
      prices.push_back({g.start_utc, 0.25, 40.0});
    }
    const auto a = energy::blend_intensity(rec, factors, prices);
    const auto b = energy::blend_intensity(scaled, factors, prices);
    for (std::size_t i = 0; i < a.size(); ++i) {
      double lo = 1e300, hi = -1e300;
      for (const auto& [name, v] : rec[i].per_source_mwh) {
        if (v > 0) {
          lo = std::min(lo, table[name]);
          hi = std::max(hi, table[name]);
        }
      }
      check("blend bounds", a.intensities()[i] >= lo * (1 - 1e-12) && a.intensities()[i] <= hi * (1 + 1e-12));
      check("blend rescaling invariance", testing::relative_difference(a.intensities()[i], b.intensities()[i]) < 1e-12);
    }
  }

  // extrapolation linearity and composition
  validation::ShareRegression reg;
  reg.slope = -5.4;
  for (int i = 0; i < 100; ++i) {
    const double a = unit(rng) * 100, b = unit(rng) * 100, c = unit(rng) * 100;
    const double two = validation::extrapolate_threshold(validation::extrapolate_threshold(450, a, b, reg), b, c, reg);
    check("extrapolation composition",
          testing::relative_difference(two, validation::extrapolate_threshold(450, a, c, reg)) < 1e-12);
  }

  std::string detail = std::to_string(checked) + " checks";
  if (failed.empty()) return pass(detail);
  for (const auto& f : failed) detail += "; failed: " + f;
  return fail(detail);
}

Outcome share_regression() {
  const auto* shares = share_table();
  if (shares == nullptr) return skip(missing({"shares.csv"}));
  const auto r = validation::fit_share_regression(*shares);
  const bool years_ok = r.first_year <= 2002 && r.last_year >= 2025;
  const bool ok = years_ok && r.slope >= -6.0 && r.slope <= -4.8;
  const std::string detail = "slope " + fmt("%.2f", r.slope) + " +- " + fmt("%.2f", r.slope_std) + " over " +
                             std::to_string(r.first_year) + "-" + std::to_string(r.last_year) + " (want [-6.0, -4.8]" +
                             (years_ok ? ")" : ", years 2002-2025 required)");
  return ok ? pass(detail) : fail(detail);
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "emission table, 2024", table_emission},
      {3, "embedded-emission variation", table_embedded},
      {4, "threshold validation 2023/2025", threshold_validation},
      {5, "idle-ratio sweep properties", idle_ratio_sweep},
      {6, "clock-limit comparison", frequency_limit},
      {7, "cost optimisation properties", cost_properties},
      {8, "switching count", switching},
      {9, "invariant suite", invariants},
      {10, "renewable-share regression", share_regression},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  bool any_fail = false;
  bool any_skip = false;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("error: ") + e.what());
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    std::printf("[%s] %2d %s: %s\n", tag, c.id, c.name, o.detail.c_str());
    any_fail |= o.status == Status::fail;
    any_skip |= o.status == Status::skip;
  }
  std::fflush(stdout);
  if (any_fail) return 1;
  return any_skip ? kSkipCode : 0;
}
