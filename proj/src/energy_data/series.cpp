#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "gridflex/csv.hpp"
#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"

namespace gridflex::energy {

IntervalSeries::IntervalSeries(std::span<const Interval> intervals) {
  starts_.reserve(intervals.size());
  durations_.reserve(intervals.size());
  intensity_.reserve(intervals.size());
  price_.reserve(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    const auto where = "interval " + format_utc(iv.start_utc);
    if (!(iv.duration_h > 0.0) || !std::isfinite(iv.duration_h)) {
      throw DataQualityError("energy_data", where + ": duration must be positive");
    }
    if (!std::isfinite(iv.intensity) || iv.intensity < 0.0) {
      throw DataQualityError("energy_data", where + ": intensity must be finite and >= 0");
    }
    if (!std::isfinite(iv.price)) throw DataQualityError("energy_data", where + ": price must be finite");
    if (i > 0) {
      const Interval& prev = intervals[i - 1];
      if (iv.start_utc <= prev.start_utc) throw DataQualityError("energy_data", where + ": start times not increasing");
      if (hours_between(prev.start_utc, iv.start_utc) < prev.duration_h - 1e-9) {
        throw DataQualityError("energy_data", where + ": overlaps the previous interval");
      }
    }
    starts_.push_back(iv.start_utc);
    durations_.push_back(iv.duration_h);
    intensity_.push_back(iv.intensity);
    price_.push_back(iv.price);
    t_total_ += iv.duration_h;
  }
}

Interval IntervalSeries::at(std::size_t i) const {
  return {starts_.at(i), durations_[i], intensity_[i], price_[i]};
}

IntervalSeries IntervalSeries::scaled(Metric m, double factor) const {
  if (m == Metric::intensity && factor < 0.0) {
    throw InputError("energy_data", "intensity scale factor must be >= 0");
  }
  IntervalSeries copy = *this;
  auto& values = m == Metric::intensity ? copy.intensity_ : copy.price_;
  for (double& v : values) v *= factor;
  return copy;
}

IntervalSeries IntervalSeries::slice(TimePoint from, TimePoint to) const {
  std::vector<Interval> picked;
  for (std::size_t i = 0; i < size(); ++i) {
    if (starts_[i] >= from && starts_[i] < to) picked.push_back(at(i));
  }
  return IntervalSeries(picked);
}

void write_series(std::ostream& out, const IntervalSeries& series) {
  out << kSeriesHeader << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Interval iv = series.at(i);
    out << format_utc(iv.start_utc) << ',' << csv::format_double(iv.duration_h) << ','
        << csv::format_double(iv.intensity) << ',' << csv::format_double(iv.price) << '\n';
  }
}

IntervalSeries read_series(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty() || csv::split_line(kSeriesHeader) != rows.front().fields) {
    throw InputError("energy_data", "interval file must start with header '" + std::string(kSeriesHeader) + "'");
  }
  std::vector<Interval> intervals;
  intervals.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const auto where = "interval row " + std::to_string(rows[r].line);
    if (f.size() != 4) throw InputError("energy_data", where + ": expected 4 fields");
    const auto start = parse_timestamp(f[0]);
    const auto duration = csv::parse_double(f[1]);
    const auto intensity = csv::parse_double(f[2]);
    const auto price = csv::parse_double(f[3]);
    if (!start || !duration || !intensity || !price) throw InputError("energy_data", where + ": malformed value");
    intervals.push_back({*start, *duration, *intensity, *price});
  }
  return IntervalSeries(intervals);
}

RenewableShareTable::RenewableShareTable(std::vector<YearSummary> rows) : rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!(r.renewable_share >= 0.0 && r.renewable_share <= 100.0)) {
      throw DataQualityError("energy_data", "year " + std::to_string(r.year) + ": renewable share outside [0, 100]");
    }
    if (!std::isfinite(r.mean_intensity) || r.mean_intensity < 0.0) {
      throw DataQualityError("energy_data", "year " + std::to_string(r.year) + ": invalid mean intensity");
    }
    if (i > 0 && r.year != rows_[i - 1].year + 1) {
      throw DataQualityError("energy_data", "renewable share table years are not contiguous at " +
                                                std::to_string(rows_[i - 1].year) + " -> " + std::to_string(r.year));
    }
  }
}

const YearSummary& RenewableShareTable::year(int y) const {
  for (const auto& r : rows_) {
    if (r.year == y) return r;
  }
  throw InputError("energy_data", "renewable share table has no row for " + std::to_string(y));
}

std::vector<YearSummary> read_share_rows(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty() || csv::split_line(kSharesHeader) != rows.front().fields) {
    throw InputError("energy_data", "share file must start with header '" + std::string(kSharesHeader) + "'");
  }
  std::vector<YearSummary> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const auto where = "share row " + std::to_string(rows[r].line);
    if (f.size() != 3) throw InputError("energy_data", where + ": expected 3 fields");
    const auto year = csv::parse_double(f[0]);
    const auto share = csv::parse_double(f[1]);
    const auto mean = csv::parse_double(f[2]);
    if (!year || !share || !mean || *year != std::floor(*year)) throw InputError("energy_data", where + ": malformed value");
    out.push_back({static_cast<int>(*year), *share, *mean, 1.0});
  }
  return out;
}

void write_share_rows(std::ostream& out, std::span<const YearSummary> rows) {
  out << kSharesHeader << '\n';
  for (const auto& r : rows) {
    out << r.year << ',' << csv::format_double(r.renewable_share) << ',' << csv::format_double(r.mean_intensity) << '\n';
  }
}

std::vector<YearSummary> merge_share_rows(std::vector<YearSummary> existing, std::span<const YearSummary> update) {
  for (const auto& row : update) {
    auto it = std::find_if(existing.begin(), existing.end(), [&](const auto& r) { return r.year == row.year; });
    if (it != existing.end()) {
      *it = row;
    } else {
      existing.push_back(row);
    }
  }
  std::sort(existing.begin(), existing.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
  return existing;
}

}  // namespace gridflex::energy
