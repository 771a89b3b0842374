#include <algorithm>
#include <istream>

#include "gridflex/csv.hpp"
#include "gridflex/energy_data.hpp"
#include "gridflex/errors.hpp"
#include "json.hpp"
#include "parse_common.hpp"

namespace gridflex::energy {
namespace {

constexpr const char* kModule = "energy_data";

void finish_prices(std::vector<PriceRecord>& records, const std::vector<std::optional<double>>& durations) {
  std::vector<TimePoint> starts;
  starts.reserve(records.size());
  for (const auto& r : records) starts.push_back(r.start_utc);
  const double step = detail::infer_step_hours(starts);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].duration_h = durations[i].value_or(step);
  std::stable_sort(records.begin(), records.end(),
                   [](const PriceRecord& a, const PriceRecord& b) { return a.start_utc < b.start_utc; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].start_utc == records[i - 1].start_utc) {
      throw InputError(kModule, "duplicate price timestamp " + format_utc(records[i].start_utc));
    }
  }
}

std::vector<PriceRecord> parse_prices_csv(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw InputError(kModule, "price file is empty");
  const auto& header = rows.front().fields;
  std::optional<std::size_t> duration_col;
  std::optional<std::size_t> price_col;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "duration_h") {
      duration_col = c;
    } else if (!price_col) {
      price_col = c;
    }
  }
  if (!price_col) throw InputError(kModule, "price header needs a time column and a price column");

  std::vector<PriceRecord> records;
  std::vector<std::optional<double>> durations;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.empty() || row.fields.front().empty()) {
      if (r == 1) continue;
      throw InputError(kModule, "price row " + std::to_string(row.line) + ": missing timestamp");
    }
    if (row.fields.size() != header.size()) {
      throw InputError(kModule, "price row " + std::to_string(row.line) + ": wrong field count");
    }
    const auto start = parse_timestamp(row.fields.front());
    if (!start) {
      throw InputError(kModule, "price row " + std::to_string(row.line) + ": malformed timestamp '" +
                                    row.fields.front() + "'");
    }
    const auto price = csv::parse_double(row.fields[*price_col]);
    if (!price) {
      throw InputError(kModule, "price row " + std::to_string(row.line) + ": empty or malformed price");
    }
    std::optional<double> duration;
    if (duration_col) {
      duration = csv::parse_double(row.fields[*duration_col]);
      if (!duration || *duration <= 0.0) {
        throw InputError(kModule, "price row " + std::to_string(row.line) + ": invalid duration");
      }
    }
    records.push_back({*start, 0.0, *price});
    durations.push_back(duration);
  }
  finish_prices(records, durations);
  return records;
}

std::vector<PriceRecord> parse_prices_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(kModule, std::string("price JSON: ") + e.what());
  }
  if (!doc.contains("unix_seconds") || !doc.contains("price")) {
    throw InputError(kModule, "price JSON needs 'unix_seconds' and 'price'");
  }
  const auto& stamps = doc.at("unix_seconds");
  const auto& values = doc.at("price");
  if (stamps.size() != values.size()) throw InputError(kModule, "price JSON arrays differ in length");
  std::vector<PriceRecord> records;
  records.reserve(stamps.size());
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    if (!stamps[i].is_number_integer() || !values[i].is_number()) {
      throw InputError(kModule, "price row " + std::to_string(i) + ": missing or malformed value");
    }
    records.push_back({TimePoint{std::chrono::seconds{stamps[i].get<std::int64_t>()}}, 0.0, values[i].get<double>()});
  }
  std::vector<std::optional<double>> durations(records.size());
  finish_prices(records, durations);
  return records;
}

}  // namespace

std::vector<PriceRecord> parse_prices(std::istream& in, DataFormat format) {
  return format == DataFormat::csv ? parse_prices_csv(in) : parse_prices_json(in);
}

}  // namespace gridflex::energy
