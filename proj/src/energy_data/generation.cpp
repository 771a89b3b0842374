#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "gridflex/csv.hpp"
#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"
#include "json.hpp"
#include "parse_common.hpp"

namespace gridflex::energy {
namespace {

constexpr const char* kModule = "energy_data";

struct Column {
  std::string source;
  bool skipped = false;
};

void check_value(const std::string& source, double value, std::size_t row) {
  if (value < 0.0 && !is_storage_source(source)) {
    throw InputError(kModule, "row " + std::to_string(row) + ": negative generation for non-storage source '" +
                                  source + "'");
  }
}

std::vector<GenerationRecord> parse_generation_csv(std::istream& in, GenerationUnit unit) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw InputError(kModule, "generation file is empty");

  const auto& header = rows.front().fields;
  if (header.size() < 2) throw InputError(kModule, "generation header needs a time column and at least one source");
  std::vector<Column> columns(header.size());
  std::optional<std::size_t> duration_col;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "duration_h") {
      duration_col = c;
      columns[c].skipped = true;
      continue;
    }
    auto canonical = canonical_source_name(header[c]);
    if (!canonical) {
      columns[c].skipped = true;
      continue;
    }
    columns[c].source = *canonical;
  }
  {
    std::map<std::string, int> seen;
    for (const auto& col : columns) {
      if (!col.skipped && !col.source.empty() && ++seen[col.source] > 1) {
        throw InputError(kModule, "source '" + col.source + "' appears in more than one column");
      }
    }
  }

  std::vector<GenerationRecord> records;
  std::vector<std::optional<double>> durations;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.empty() || row.fields.front().empty()) {
      // unit row of the energy-charts export ("", "Power (MW)", ...)
      if (r == 1) continue;
      throw InputError(kModule, "row " + std::to_string(row.line) + ": missing timestamp");
    }
    if (row.fields.size() != header.size()) {
      throw InputError(kModule, "row " + std::to_string(row.line) + ": expected " + std::to_string(header.size()) +
                                    " fields, got " + std::to_string(row.fields.size()));
    }
    const auto start = parse_timestamp(row.fields.front());
    if (!start) {
      throw InputError(kModule, "row " + std::to_string(row.line) + ": malformed timestamp '" + row.fields.front() + "'");
    }
    GenerationRecord rec;
    rec.start_utc = *start;
    std::optional<double> duration;
    for (std::size_t c = 1; c < row.fields.size(); ++c) {
      if (duration_col && c == *duration_col) {
        duration = csv::parse_double(row.fields[c]);
        if (!duration || *duration <= 0.0) {
          throw InputError(kModule, "row " + std::to_string(row.line) + ": invalid duration '" + row.fields[c] + "'");
        }
        continue;
      }
      if (columns[c].skipped) continue;
      const auto value = csv::parse_double(row.fields[c]);
      if (!value) {
        throw InputError(kModule, "row " + std::to_string(row.line) + ": empty or malformed generation value for '" +
                                      columns[c].source + "'");
      }
      check_value(columns[c].source, *value, row.line);
      rec.per_source_mwh[columns[c].source] = *value;
    }
    records.push_back(std::move(rec));
    durations.push_back(duration);
  }
  detail::finish_records(records, durations, unit == GenerationUnit::power_mw);
  return records;
}

std::vector<GenerationRecord> parse_generation_json(std::istream& in, GenerationUnit unit) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(kModule, std::string("generation JSON: ") + e.what());
  }
  if (!doc.contains("unix_seconds") || !doc.contains("production_types")) {
    throw InputError(kModule, "generation JSON needs 'unix_seconds' and 'production_types'");
  }
  const auto& stamps = doc.at("unix_seconds");
  std::vector<GenerationRecord> records(stamps.size());
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    if (!stamps[i].is_number_integer()) {
      throw InputError(kModule, "row " + std::to_string(i) + ": malformed unix timestamp");
    }
    records[i].start_utc = TimePoint{std::chrono::seconds{stamps[i].get<std::int64_t>()}};
  }
  std::set<std::string> seen;
  for (const auto& series : doc.at("production_types")) {
    const auto name = series.value("name", std::string{});
    const auto canonical = canonical_source_name(name);
    if (!canonical) continue;
    if (!seen.insert(*canonical).second) {
      throw InputError(kModule, "source '" + *canonical + "' appears in more than one series");
    }
    const auto& data = series.at("data");
    if (data.size() != records.size()) {
      throw InputError(kModule, "series '" + name + "' has " + std::to_string(data.size()) + " values, expected " +
                                    std::to_string(records.size()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      // null: the source did not report this interval
      if (data[i].is_null()) continue;
      if (!data[i].is_number()) {
        throw InputError(kModule, "row " + std::to_string(i) + ": malformed generation value for '" + *canonical + "'");
      }
      const double value = data[i].get<double>();
      check_value(*canonical, value, i);
      records[i].per_source_mwh[*canonical] = value;
    }
  }
  // Timestamps with no reported source at all are gaps, left to gap handling.
  std::erase_if(records, [](const GenerationRecord& r) { return r.per_source_mwh.empty(); });
  std::vector<std::optional<double>> durations(records.size());
  detail::finish_records(records, durations, unit == GenerationUnit::power_mw);
  return records;
}

}  // namespace

namespace detail {

double infer_step_hours(std::vector<TimePoint> starts) {
  std::sort(starts.begin(), starts.end());
  std::map<std::int64_t, std::size_t> counts;
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const auto diff = (starts[i] - starts[i - 1]).count();
    if (diff > 0) ++counts[diff];
  }
  if (counts.empty()) return 0.25;
  const auto mode = std::max_element(counts.begin(), counts.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  return static_cast<double>(mode->first) / 3600.0;
}

void finish_records(std::vector<GenerationRecord>& records, const std::vector<std::optional<double>>& durations,
                    bool power_values) {
  std::vector<TimePoint> starts;
  starts.reserve(records.size());
  for (const auto& r : records) starts.push_back(r.start_utc);
  const double step = infer_step_hours(starts);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].duration_h = durations[i].value_or(step);
    if (power_values) {
      for (auto& [source, value] : records[i].per_source_mwh) value *= records[i].duration_h;
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const GenerationRecord& a, const GenerationRecord& b) { return a.start_utc < b.start_utc; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].start_utc == records[i - 1].start_utc) {
      throw InputError(kModule, "duplicate timestamp " + format_utc(records[i].start_utc));
    }
  }
}

}  // namespace detail

std::vector<GenerationRecord> parse_generation(std::istream& in, DataFormat format, GenerationUnit unit) {
  return format == DataFormat::csv ? parse_generation_csv(in, unit) : parse_generation_json(in, unit);
}

}  // namespace gridflex::energy
