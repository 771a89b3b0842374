#pragma once

/**
 * @file energy_data.hpp
 * @brief Ingestion of public electricity data into a validated interval series.
 *
 * Raw inputs are generation by source, per-source emission factors and spot
 * prices. They are blended into one IntervalSeries carrying, per interval,
 * the carbon intensity (kg CO2/MWh) and the price (EUR/MWh).
 */

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridflex/timeutil.hpp"

namespace gridflex::energy {

enum class DataFormat { csv, json };

/// How generation values are expressed in the raw file.
enum class GenerationUnit {
  energy_mwh,  ///< energy delivered within the interval
  power_mw,    ///< average power over the interval; multiplied by the duration on ingest
};

enum class Metric { intensity, price };

[[nodiscard]] std::string_view metric_name(Metric m) noexcept;

struct GenerationRecord {
  TimePoint start_utc{};
  double duration_h = 0.25;
  std::map<std::string, double> per_source_mwh;  ///< canonical source name -> MWh
};

/// Maps a raw column / series name to its canonical lowercase source name.
/// Returns nullopt for series that are not generation (load, residual load,
/// cross-border trading, share columns).
[[nodiscard]] std::optional<std::string> canonical_source_name(std::string_view raw);

/// Storage sources may report negative generation (charging).
[[nodiscard]] bool is_storage_source(std::string_view canonical);

[[nodiscard]] bool is_renewable_source(std::string_view canonical);

struct EmissionFactorTable {
  int year = 0;  ///< 0: applies to every year without a dedicated table
  std::map<std::string, double> per_source_factor;
};

/// Emission-factor tables keyed by year.
class EmissionFactors {
 public:
  void add(EmissionFactorTable table);

  /// Table for `year`, falling back to the year-independent table.
  /// Throws InputError when neither exists.
  [[nodiscard]] const EmissionFactorTable& for_year(int year) const;

  [[nodiscard]] bool empty() const noexcept { return tables_.empty(); }
  [[nodiscard]] const std::map<int, EmissionFactorTable>& tables() const noexcept { return tables_; }

 private:
  std::map<int, EmissionFactorTable> tables_;
};

struct PriceRecord {
  TimePoint start_utc{};
  double duration_h = 0.25;
  double price = 0.0;  ///< EUR/MWh, may be negative
};

struct Interval {
  TimePoint start_utc{};
  double duration_h = 0.0;
  double intensity = 0.0;  ///< kg CO2/MWh
  double price = 0.0;      ///< EUR/MWh
};

/// Chronological series of intervals, stored column-wise.
class IntervalSeries {
 public:
  IntervalSeries() = default;

  /// Validates ordering, positive durations, finite values and non-negative
  /// intensity; throws DataQualityError on violation.
  explicit IntervalSeries(std::span<const Interval> intervals);

  [[nodiscard]] std::size_t size() const noexcept { return starts_.size(); }
  [[nodiscard]] bool empty() const noexcept { return starts_.empty(); }
  [[nodiscard]] double t_total() const noexcept { return t_total_; }

  [[nodiscard]] Interval at(std::size_t i) const;
  [[nodiscard]] std::span<const TimePoint> starts() const noexcept { return starts_; }
  [[nodiscard]] std::span<const double> durations() const noexcept { return durations_; }
  [[nodiscard]] std::span<const double> intensities() const noexcept { return intensity_; }
  [[nodiscard]] std::span<const double> prices() const noexcept { return price_; }
  [[nodiscard]] std::span<const double> metric(Metric m) const noexcept {
    return m == Metric::intensity ? intensities() : prices();
  }

  /// Copy with the selected metric multiplied by `factor`.
  [[nodiscard]] IntervalSeries scaled(Metric m, double factor) const;

  /// Intervals whose start falls in [from, to).
  [[nodiscard]] IntervalSeries slice(TimePoint from, TimePoint to) const;

  friend bool operator==(const IntervalSeries&, const IntervalSeries&) = default;

 private:
  std::vector<TimePoint> starts_;
  std::vector<double> durations_;
  std::vector<double> intensity_;
  std::vector<double> price_;
  double t_total_ = 0.0;
};

// --- parsing -----------------------------------------------------------------

/// Generation by source. CSV: first column is the interval start with an
/// explicit UTC offset, an optional `duration_h` column, one column per
/// source. JSON: `{"unix_seconds": [...], "production_types": [{"name", "data"}]}`.
/// Records come back sorted by start.
[[nodiscard]] std::vector<GenerationRecord> parse_generation(std::istream& in, DataFormat format,
                                                             GenerationUnit unit = GenerationUnit::energy_mwh);

/// Spot prices. CSV: `start,price[,duration_h]`. JSON: `{"unix_seconds", "price"}`.
[[nodiscard]] std::vector<PriceRecord> parse_prices(std::istream& in, DataFormat format);

/// `source,kg_per_mwh` or `year,source,kg_per_mwh`.
[[nodiscard]] EmissionFactors parse_emission_factors(std::istream& in);

// --- blending ----------------------------------------------------------------

struct BlendOptions {
  /// Offset used to pick the calendar year of an interval for factor lookup.
  std::chrono::minutes calendar_offset{0};
  /// Holes strictly shorter than this are filled by linear interpolation.
  double max_gap_h = 1.0;
};

/// Per-interval intensity = sum(gen*factor) / sum(gen) over non-negative
/// generation; prices aligned onto the generation grid (coarser price
/// intervals are split). Short gaps are interpolated, longer gaps abort.
[[nodiscard]] IntervalSeries blend_intensity(std::span<const GenerationRecord> records, const EmissionFactors& factors,
                                             std::span<const PriceRecord> prices, const BlendOptions& options = {});

// --- canonical exchange format -------------------------------------------------

inline constexpr std::string_view kSeriesHeader = "start_utc,duration_h,intensity_kg_per_mwh,price_eur_per_mwh";

void write_series(std::ostream& out, const IntervalSeries& series);
[[nodiscard]] IntervalSeries read_series(std::istream& in);

// --- yearly aggregates -------------------------------------------------------

struct YearSummary {
  int year = 0;
  double renewable_share = 0.0;  ///< percent of net generation
  double mean_intensity = 0.0;   ///< energy-weighted, kg CO2/MWh
  double coverage = 1.0;         ///< observed / expected hours

  friend bool operator==(const YearSummary&, const YearSummary&) = default;
};

/// Validated yearly table: sorted, contiguous years, shares in [0, 100].
class RenewableShareTable {
 public:
  RenewableShareTable() = default;
  explicit RenewableShareTable(std::vector<YearSummary> rows);

  [[nodiscard]] const std::vector<YearSummary>& rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
  [[nodiscard]] const YearSummary& year(int y) const;

 private:
  std::vector<YearSummary> rows_;
};

struct SummaryOptions {
  std::chrono::minutes calendar_offset{0};
  bool allow_partial = false;
  double min_coverage = 0.95;
};

/// One row per calendar year present in `generation`. Intensity weights are
/// the interval's non-negative generation; the series must contain every
/// generation interval.
[[nodiscard]] std::vector<YearSummary> yearly_summary(const IntervalSeries& series,
                                                      std::span<const GenerationRecord> generation,
                                                      const SummaryOptions& options = {});

inline constexpr std::string_view kSharesHeader = "year,renewable_share_pct,mean_intensity_kg_per_mwh";

/// Rows only; contiguity is checked when a RenewableShareTable is built.
[[nodiscard]] std::vector<YearSummary> read_share_rows(std::istream& in);
void write_share_rows(std::ostream& out, std::span<const YearSummary> rows);

/// Replaces rows with the same year, keeps the result sorted.
[[nodiscard]] std::vector<YearSummary> merge_share_rows(std::vector<YearSummary> existing,
                                                        std::span<const YearSummary> update);

}  // namespace gridflex::energy
