#include "gridflex/timeutil.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "gridflex/errors.hpp"

namespace gridflex {
namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc{} && ptr == text.data() + pos + len;
}

std::optional<std::chrono::minutes> read_offset(std::string_view zone) {
  if (zone == "Z" || zone == "z") return std::chrono::minutes{0};
  if (zone.size() < 3 || (zone[0] != '+' && zone[0] != '-')) return std::nullopt;
  const int sign = zone[0] == '-' ? -1 : 1;
  int hh = 0;
  int mm = 0;
  if (!read_int(zone, 1, 2, hh)) return std::nullopt;
  if (zone.size() == 3) {
    // +HH
  } else if (zone.size() == 6 && zone[3] == ':') {
    if (!read_int(zone, 4, 2, mm)) return std::nullopt;
  } else if (zone.size() == 5) {
    if (!read_int(zone, 3, 2, mm)) return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (hh > 14 || mm > 59) return std::nullopt;
  return std::chrono::minutes{sign * (hh * 60 + mm)};
}

}  // namespace

std::optional<TimePoint> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

  int y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
  if (!read_int(text, 0, 4, y) || text.size() < 16 || text[4] != '-' || !read_int(text, 5, 2, mo) ||
      text[7] != '-' || !read_int(text, 8, 2, d) || (text[10] != 'T' && text[10] != ' ') ||
      !read_int(text, 11, 2, hh) || text[13] != ':' || !read_int(text, 14, 2, mi)) {
    return std::nullopt;
  }
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!read_int(text, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mi > 59 || ss > 60) return std::nullopt;

  const std::string_view zone = text.substr(pos);
  if (zone.empty()) {
    throw InputError("energy_data", "timestamp '" + std::string(text) + "' has no UTC offset");
  }
  const auto offset = read_offset(zone);
  if (!offset) {
    throw InputError("energy_data", "timestamp '" + std::string(text) + "' has unknown zone '" +
                                        std::string(zone) + "'");
  }
  const sys_seconds local{sys_days{ymd}.time_since_epoch() + hours{hh} + minutes{mi} + seconds{ss}};
  return local - *offset;
}

std::string format_utc(TimePoint t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

int calendar_year(TimePoint t, std::chrono::minutes offset) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(t + offset)};
  return static_cast<int>(ymd.year());
}

double hours_in_year(int y) {
  using namespace std::chrono;
  return year{y}.is_leap() ? 8784.0 : 8760.0;
}

std::chrono::minutes parse_utc_offset(std::string_view text) {
  if (auto off = read_offset(text)) return *off;
  throw InputError("energy_data", "invalid UTC offset '" + std::string(text) + "'");
}

}  // namespace gridflex
