#include <random>
#include <sstream>

#include "doctest.h"
#include "gridflex/cluster_model.hpp"
#include "gridflex/config.hpp"
#include "gridflex/errors.hpp"
#include "../support/synthetic.hpp"

using namespace gridflex;
using namespace gridflex::cluster;

TEST_CASE("power at load, BAF modern") {
  const auto reg = Registry::builtin();
  const auto& s = reg.setup("baf_modern");
  CHECK(power_at_load(s, 0.0) == 1.1);
  CHECK(power_at_load(s, 1.0) == 7.6);
  CHECK(power_at_load(s, 0.5) == doctest::Approx(4.35).epsilon(1e-12));
  CHECK_THROWS_AS((void)power_at_load(s, 1.01), InputError);
  CHECK_THROWS_AS((void)power_at_load(s, -0.1), InputError);
}

TEST_CASE("average power of the built-in workloads") {
  const auto reg = Registry::builtin();
  const auto& s = reg.setup("baf_modern");
  CHECK(average_power(s, reg.workload("backfilling")) == doctest::Approx(0.05 * 1.1 + 0.95 * 7.6).epsilon(1e-12));
  CHECK(average_power(s, reg.workload("backfilling")) == doctest::Approx(7.275).epsilon(1e-12));
  CHECK(average_power(s, reg.workload("medium")) == doctest::Approx(3.0825).epsilon(1e-12));
  CHECK(average_power(s, testing::constant_load(0.0)) == s.p_idle_w);
}

TEST_CASE("built-in registry") {
  const auto reg = Registry::builtin();
  CHECK(reg.setup_names() == std::vector<std::string>{"baf_default", "baf_modern", "deep_cm", "deep_dam", "gridka_arm"});
  CHECK(reg.workload_names() == std::vector<std::string>{"medium", "heavy", "backfilling"});
  CHECK(reg.setup("deep_dam").idle_ratio() == doctest::Approx(3.3 / 6.9));
  CHECK(reg.setup("baf_default").acq_eur_per_core_hour.has_value());
  CHECK_FALSE(reg.setup("gridka_arm").acq_eur_per_core_hour.has_value());
  CHECK(reg.tariff().yearly_demand_eur_per_kw == 100.0);
  CHECK_THROWS_AS((void)reg.setup("nope"), InputError);
  for (const auto& w : reg.workload_names()) CHECK_NOTHROW(reg.workload(w).validate());
  for (const auto& n : reg.setup_names()) CHECK_NOTHROW(reg.setup(n).validate());
}

TEST_CASE("setup and workload invariants") {
  ClusterSetup s{"x", 10, 5, 6, 0, std::nullopt};
  CHECK_THROWS_AS(s.validate(), InputError);
  s = {"x", 0.5, 5, 1, 0, std::nullopt};
  CHECK_THROWS_AS(s.validate(), InputError);
  s = {"x", 10, 5, 1, -1, std::nullopt};
  CHECK_THROWS_AS(s.validate(), InputError);

  WorkloadScenario w{"w", {{0.0, 0.5}, {1.0, 0.4}}};
  CHECK_THROWS_AS(w.validate(), InputError);
  w = {"w", {{0.5, 0.5}, {0.5, 0.5}}};
  CHECK_THROWS_AS(w.validate(), InputError);
}

TEST_CASE("average power properties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = testing::random_setup(rng);
    const auto w = testing::random_workload(rng);
    const double p = average_power(s, w);
    CHECK(p >= s.p_idle_w);
    CHECK(p <= s.p_max_w);

    // Moving time from the lowest to the highest load never lowers the mean.
    auto shifted = w;
    const double moved = shifted.modes.front().time_fraction / 2;
    shifted.modes.front().time_fraction -= moved;
    shifted.modes.back().time_fraction += moved;
    CHECK(average_power(s, shifted) >= p);

    // Raising one load never lowers the mean.
    auto heavier = w;
    heavier.modes[1].load = 0.3;
    CHECK(average_power(s, heavier) >= p);

    s.p_idle_w = s.p_max_w;
    CHECK(average_power(s, w) == doctest::Approx(s.p_max_w).epsilon(1e-14));
  }
}

TEST_CASE("embedded rate per core hour") {
  EmbeddedEstimate e{4092.0, 256.0, 10.0, std::nullopt};
  CHECK(embedded_rate(e) == doctest::Approx(4092.0 / (256.0 * 10.0 * 8760.0)).epsilon(1e-14));
  CHECK(embedded_rate(e) == doctest::Approx(1.8247e-4).epsilon(1e-3));
  CHECK(embedded_rate({0.0, 256.0, 10.0, std::nullopt}) == 0.0);

  // Exact inverse scaling in lifetime and cores per server.
  const double base = embedded_rate(e);
  CHECK(embedded_rate({4092.0, 512.0, 10.0, std::nullopt}) == doctest::Approx(base / 2).epsilon(1e-15));
  CHECK(embedded_rate({4092.0, 256.0, 5.0, std::nullopt}) == doctest::Approx(base * 2).epsilon(1e-15));
}

TEST_CASE("storage substitution reaching the BAF default rate") {
  EmbeddedEstimate e{4092.0, 256.0, 10.0, StorageSubstitution{}};
  const double capacity = substitution_capacity_for_rate(e, 1.5e-5);
  CHECK(capacity == doctest::Approx((4092.0 - 1.5e-5 * 256 * 10 * 8760) / 0.14).epsilon(1e-12));
  CHECK(capacity == doctest::Approx(26826).epsilon(1e-4));
  e.storage->capacity_gb = capacity;
  CHECK(embedded_rate(e) == doctest::Approx(1.5e-5).epsilon(1e-12));

  e.storage->capacity_gb = 1e6;
  CHECK_THROWS_AS((void)embedded_rate(e), InputError);
}

TEST_CASE("config overrides and additions") {
  auto reg = Registry::builtin();
  std::istringstream in(R"(# site overrides
[setup.baf_modern]
p_idle_w = 1.3

[setup.lab]
n_cores = 64
p_max_w = 10
p_idle_w = 2.5
e_embedded_kg_per_core_hour = 2e-4
c_acq_eur_per_core_hour = 1e-3

[workload.burst]
modes = [[0.0, 0.5], [1.0, 0.5]]

[tariff]
c_yearly_demand_eur_per_kw = 120
)");
  load_config(in, reg);
  CHECK(reg.setup("baf_modern").p_idle_w == 1.3);
  CHECK(reg.setup("baf_modern").p_max_w == 7.6);
  CHECK(reg.setup("lab").n_cores == 64);
  CHECK(*reg.setup("lab").acq_eur_per_core_hour == 1e-3);
  CHECK(reg.workload("burst").modes.size() == 2);
  CHECK(reg.tariff().yearly_demand_eur_per_kw == 120);
  CHECK(reg.setup_names().back() == "lab");

  auto fresh = Registry::builtin();
  std::istringstream unknown("[setup.x]\nwatts = 3\n");
  CHECK_THROWS_AS(load_config(unknown, fresh), InputError);
  std::istringstream missing("[setup.y]\nn_cores = 3\n");
  CHECK_THROWS_AS(load_config(missing, fresh), InputError);
  std::istringstream section("[cooling]\npue = 1.2\n");
  CHECK_THROWS_AS(load_config(section, fresh), InputError);
}
