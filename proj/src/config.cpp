#include "gridflex/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <string>

#include "gridflex/csv.hpp"
#include "gridflex/errors.hpp"

namespace gridflex::cluster {
namespace {

constexpr const char* kModule = "cluster_model";

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return csv::trim(pos == std::string::npos ? line : line.substr(0, pos));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

double number(const std::string& text, std::size_t line) {
  const auto v = csv::parse_double(text);
  if (!v) throw InputError(kModule, "config line " + std::to_string(line) + ": expected a number, got '" + text + "'");
  return *v;
}

// [[a, b], [c, d]]
std::vector<LoadMode> parse_modes(const std::string& text, std::size_t line) {
  std::vector<LoadMode> modes;
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw InputError(kModule, "config line " + std::to_string(line) + ": modes must be [[load, fraction], ...]");
  }
  s = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == ',') {
      ++pos;
      continue;
    }
    if (s[pos] != '[') throw InputError(kModule, "config line " + std::to_string(line) + ": malformed modes");
    const auto close = s.find(']', pos);
    if (close == std::string::npos) throw InputError(kModule, "config line " + std::to_string(line) + ": unclosed '['");
    const auto pair = csv::split_line(s.substr(pos + 1, close - pos - 1));
    if (pair.size() != 2) throw InputError(kModule, "config line " + std::to_string(line) + ": mode needs [load, fraction]");
    modes.push_back({number(pair[0], line), number(pair[1], line)});
    pos = close + 1;
  }
  return modes;
}

}  // namespace

void load_config(std::istream& in, Registry& registry) {
  struct Section {
    std::string kind;
    std::string name;
    std::map<std::string, std::pair<std::string, std::size_t>> values;
  };
  std::vector<Section> sections;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(kModule, "config line " + std::to_string(line_no) + ": bad section header");
      const std::string header = csv::trim(line.substr(1, line.size() - 2));
      Section section;
      const auto dot = header.find('.');
      section.kind = header.substr(0, dot);
      if (dot != std::string::npos) section.name = unquote(header.substr(dot + 1));
      if (section.kind != "setup" && section.kind != "workload" && section.kind != "tariff") {
        throw InputError(kModule, "config line " + std::to_string(line_no) + ": unknown section '" + header + "'");
      }
      if (section.kind != "tariff" && section.name.empty()) {
        throw InputError(kModule, "config line " + std::to_string(line_no) + ": section needs a name");
      }
      sections.push_back(std::move(section));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || sections.empty()) {
      throw InputError(kModule, "config line " + std::to_string(line_no) + ": expected key = value inside a section");
    }
    sections.back().values[csv::trim(line.substr(0, eq))] = {csv::trim(line.substr(eq + 1)), line_no};
  }

  for (auto& section : sections) {
    auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
      auto it = section.values.find(key);
      if (it == section.values.end()) return std::nullopt;
      auto v = it->second;
      section.values.erase(it);
      return v;
    };
    if (section.kind == "setup") {
      ClusterSetup setup;
      const auto names = registry.setup_names();
      if (std::find(names.begin(), names.end(), section.name) != names.end()) {
        setup = registry.setup(section.name);
      } else {
        for (const char* key : {"n_cores", "p_max_w", "p_idle_w", "e_embedded_kg_per_core_hour"}) {
          if (section.values.count(key) == 0) {
            throw InputError(kModule, "new setup '" + section.name + "' needs " + key);
          }
        }
      }
      setup.name = section.name;
      if (auto v = take("n_cores")) setup.n_cores = number(v->first, v->second);
      if (auto v = take("p_max_w")) setup.p_max_w = number(v->first, v->second);
      if (auto v = take("p_idle_w")) setup.p_idle_w = number(v->first, v->second);
      if (auto v = take("e_embedded_kg_per_core_hour")) setup.embedded_kg_per_core_hour = number(v->first, v->second);
      if (auto v = take("c_acq_eur_per_core_hour")) setup.acq_eur_per_core_hour = number(v->first, v->second);
      registry.add_setup(std::move(setup));
    } else if (section.kind == "workload") {
      WorkloadScenario workload{section.name, {}};
      auto v = take("modes");
      if (!v) throw InputError(kModule, "workload '" + section.name + "' needs modes");
      workload.modes = parse_modes(v->first, v->second);
      registry.add_workload(std::move(workload));
    } else {
      TariffModel tariff = registry.tariff();
      if (auto v = take("c_yearly_demand_eur_per_kw")) tariff.yearly_demand_eur_per_kw = number(v->first, v->second);
      registry.set_tariff(tariff);
    }
    if (!section.values.empty()) {
      const auto& [key, value] = *section.values.begin();
      throw InputError(kModule, "config line " + std::to_string(value.second) + ": unknown key '" + key + "'");
    }
  }
}

void load_config(const std::filesystem::path& path, Registry& registry) {
  std::ifstream in(path);
  if (!in) throw InputError(kModule, "cannot read config file " + path.string());
  load_config(in, registry);
}

}  // namespace gridflex::cluster
