#include <algorithm>
#include <map>

#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"

namespace gridflex::energy {
namespace {

struct YearAccumulator {
  double renewable = 0.0;
  double generation = 0.0;
  double weighted_intensity = 0.0;
  double hours = 0.0;
};

}  // namespace

std::vector<YearSummary> yearly_summary(const IntervalSeries& series, std::span<const GenerationRecord> generation,
                                        const SummaryOptions& options) {
  if (generation.empty()) throw InputError("energy_data", "yearly summary needs generation records");
  const auto starts = series.starts();
  const auto intensity = series.intensities();

  std::map<int, YearAccumulator> years;
  for (const auto& rec : generation) {
    const auto it = std::lower_bound(starts.begin(), starts.end(), rec.start_utc);
    if (it == starts.end() || *it != rec.start_utc) {
      throw InputError("energy_data", "series has no interval for generation record " + format_utc(rec.start_utc));
    }
    const double mean = intensity[static_cast<std::size_t>(it - starts.begin())];
    auto& acc = years[calendar_year(rec.start_utc, options.calendar_offset)];
    double total = 0.0;
    double renewable = 0.0;
    for (const auto& [source, mwh] : rec.per_source_mwh) {
      if (mwh <= 0.0) continue;
      total += mwh;
      if (is_renewable_source(source)) renewable += mwh;
    }
    acc.generation += total;
    acc.renewable += renewable;
    acc.weighted_intensity += mean * total;
  }
  const auto durations = series.durations();
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (auto it = years.find(calendar_year(starts[i], options.calendar_offset)); it != years.end()) {
      it->second.hours += durations[i];
    }
  }

  std::vector<YearSummary> out;
  for (const auto& [year, acc] : years) {
    const double coverage = acc.hours / hours_in_year(year);
    if (coverage < options.min_coverage && !options.allow_partial) {
      throw DataQualityError("energy_data", "year " + std::to_string(year) + " covers only " +
                                                std::to_string(coverage * 100.0) + " % of its intervals");
    }
    if (!(acc.generation > 0.0)) {
      throw DataQualityError("energy_data", "year " + std::to_string(year) + " has no generation");
    }
    out.push_back({year, acc.renewable / acc.generation * 100.0, acc.weighted_intensity / acc.generation, coverage});
  }
  return out;
}

}  // namespace gridflex::energy
