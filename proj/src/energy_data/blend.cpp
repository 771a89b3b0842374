#include <algorithm>
#include <cmath>
#include <set>

#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"
#include "gridflex/kernels.hpp"

namespace gridflex::energy {
namespace {

constexpr const char* kModule = "energy_data";

// Price of the record covering [start, start + duration), if any.
std::vector<std::optional<double>> align_prices(std::span<const GenerationRecord> records,
                                                std::span<const PriceRecord> prices) {
  std::vector<std::optional<double>> aligned(records.size());
  std::size_t p = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& g = records[i];
    while (p < prices.size() &&
           hours_between(prices[p].start_utc, g.start_utc) >= prices[p].duration_h - 1e-9) {
      ++p;
    }
    if (p == prices.size() || prices[p].start_utc > g.start_utc) continue;
    const double offset = hours_between(prices[p].start_utc, g.start_utc);
    if (offset + g.duration_h <= prices[p].duration_h + 1e-9) aligned[i] = prices[p].price;
  }
  return aligned;
}

}  // namespace

IntervalSeries blend_intensity(std::span<const GenerationRecord> records, const EmissionFactors& factors,
                               std::span<const PriceRecord> prices, const BlendOptions& options) {
  if (records.empty()) throw InputError(kModule, "no generation records");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].start_utc <= records[i - 1].start_utc) {
      throw InputError(kModule, "generation records must be sorted and unique");
    }
  }

  const auto aligned = align_prices(records, prices);
  std::vector<std::string> unmatched;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!aligned[i]) unmatched.push_back(format_utc(records[i].start_utc));
  }
  if (!unmatched.empty()) {
    std::string list;
    for (std::size_t i = 0; i < unmatched.size() && i < 10; ++i) list += (i ? ", " : "") + unmatched[i];
    if (unmatched.size() > 10) list += ", ... (" + std::to_string(unmatched.size()) + " total)";
    throw InputError(kModule, "no matching price interval for " + list);
  }

  std::set<std::string> sources;
  for (const auto& r : records) {
    for (const auto& [s, v] : r.per_source_mwh) sources.insert(s);
  }

  const std::size_t n = records.size();
  std::vector<double> weighted(n, 0.0);
  std::vector<double> total(n, 0.0);
  std::vector<double> column(n);
  const auto& kernels = kernels::active();

  // Factor tables are per calendar year; blend one year-chunk at a time.
  std::size_t begin = 0;
  while (begin < n) {
    const int year = calendar_year(records[begin].start_utc, options.calendar_offset);
    std::size_t end = begin;
    while (end < n && calendar_year(records[end].start_utc, options.calendar_offset) == year) ++end;
    const auto& table = factors.for_year(year);
    const std::size_t len = end - begin;
    for (const auto& source : sources) {
      bool positive = false;
      for (std::size_t i = begin; i < end; ++i) {
        const auto it = records[i].per_source_mwh.find(source);
        column[i] = it == records[i].per_source_mwh.end() ? 0.0 : it->second;
        positive = positive || column[i] > 0.0;
      }
      if (!positive) continue;
      const auto f = table.per_source_factor.find(source);
      if (f == table.per_source_factor.end()) {
        throw InputError(kModule, "no emission factor for source '" + source + "' in year " + std::to_string(year));
      }
      kernels.accumulate_source(std::span<const double>(column).subspan(begin, len), f->second,
                                std::span<double>(weighted).subspan(begin, len),
                                std::span<double>(total).subspan(begin, len));
    }
    begin = end;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!(total[i] > 0.0)) {
      throw DataQualityError(kModule, "interval " + format_utc(records[i].start_utc) + " has zero total generation");
    }
  }
  std::vector<double> intensity(n);
  kernels.divide(weighted, total, intensity);

  std::vector<Interval> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const auto& prev = records[i - 1];
      const auto& cur = records[i];
      const double step = prev.duration_h;
      const double missing = hours_between(prev.start_utc, cur.start_utc) - step;
      if (missing < -1e-9) {
        throw DataQualityError(kModule, "interval " + format_utc(cur.start_utc) + " overlaps its predecessor");
      }
      if (missing > 1e-9) {
        if (missing >= options.max_gap_h - 1e-9) {
          throw DataQualityError(kModule, "gap of " + std::to_string(missing) + " h after " +
                                              format_utc(prev.start_utc) + " exceeds the interpolation limit");
        }
        const double fill_steps = missing / step;
        if (std::abs(fill_steps - std::round(fill_steps)) > 1e-6) {
          throw DataQualityError(kModule, "gap after " + format_utc(prev.start_utc) + " is not a whole number of intervals");
        }
        const double span_h = hours_between(prev.start_utc, cur.start_utc);
        const auto fills = static_cast<std::size_t>(std::llround(fill_steps));
        for (std::size_t k = 1; k <= fills; ++k) {
          const auto start = prev.start_utc + std::chrono::seconds(std::llround(static_cast<double>(k) * step * 3600.0));
          const double frac = hours_between(prev.start_utc, start) / span_h;
          out.push_back({start, step, intensity[i - 1] + frac * (intensity[i] - intensity[i - 1]),
                         *aligned[i - 1] + frac * (*aligned[i] - *aligned[i - 1])});
        }
      }
    }
    out.push_back({records[i].start_utc, records[i].duration_h, intensity[i], *aligned[i]});
  }
  return IntervalSeries(out);
}

}  // namespace gridflex::energy
