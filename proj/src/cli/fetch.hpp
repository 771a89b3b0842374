#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gridflex::cli {

struct FetchOptions {
  int year = 0;
  std::filesystem::path out_dir;
  std::string base_url = "https://api.energy-charts.info";
  std::string country = "de";
  std::string bidding_zone = "DE-LU";
};

/// Downloads one calendar year of public net generation and day-ahead prices
/// as the raw JSON documents the ingest command reads. Returns written paths.
std::vector<std::filesystem::path> fetch_year(const FetchOptions& options);

}  // namespace gridflex::cli
