#include "fetch.hpp"

#include "gridflex/errors.hpp"
#include "httplib.h"
#include "outputs.hpp"

namespace gridflex::cli {
namespace {

constexpr const char* kModule = "energy_data";

std::string get(httplib::Client& client, const std::string& path) {
  auto res = client.Get(path);
  if (!res) {
    throw DataQualityError(kModule, "request " + path + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw DataQualityError(kModule, "request " + path + " returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace

std::vector<std::filesystem::path> fetch_year(const FetchOptions& options) {
  if (options.year < 2000 || options.year > 2100) throw InputError(kModule, "fetch year out of range");
  httplib::Client client(options.base_url);
  client.set_connection_timeout(10);
  client.set_read_timeout(120);
  client.set_follow_location(true);

  const std::string y = std::to_string(options.year);
  const std::string range = "&start=" + y + "-01-01T00%3A00%2B01%3A00&end=" + y + "-12-31T23%3A45%2B01%3A00";
  const std::vector<std::pair<std::string, std::string>> requests{
      {"public_power_" + y + ".json", "/public_power?country=" + options.country + range},
      {"price_" + y + ".json", "/price?bzn=" + options.bidding_zone + range},
  };
  // Download everything before writing so a failure leaves no partial set.
  std::vector<std::string> bodies;
  for (const auto& [file, path] : requests) bodies.push_back(get(client, path));

  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto target = options.out_dir / requests[i].first;
    write_file(target, [&](std::ostream& out) { out << bodies[i]; });
    written.push_back(target);
  }
  return written;
}

}  // namespace gridflex::cli
