#include <cstring>
#include <random>

#include "doctest.h"
#include "gridflex/kernels.hpp"

using namespace gridflex::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("active kernel table") {
  const auto& a = active();
  CHECK(a.accumulate_source != nullptr);
  CHECK(a.objective_grid != nullptr);
  MESSAGE("active kernels: " << isa_name(a.isa));
  if (simd_table() == nullptr) MESSAGE("no SIMD kernels on this machine; equivalence checks compare scalar to itself");
}

TEST_CASE("SIMD kernels match the scalar reference bit for bit") {
  const KernelTable& ref = scalar_table();
  const KernelTable& simd = simd_table() != nullptr ? *simd_table() : scalar_table();
  std::mt19937_64 rng(2024);

  // Lengths cover the vector body, the tail and the empty case.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 100u, 1027u}) {
    CAPTURE(n);
    {
      auto gen = random_values(rng, n, -50.0, 500.0);
      if (n > 2) gen[1] = -0.0;
      const double factor = 437.25;
      auto w1 = random_values(rng, n, 0.0, 1e5), t1 = random_values(rng, n, 0.0, 1e3);
      auto w2 = w1, t2 = t1;
      ref.accumulate_source(gen, factor, w1, t1);
      simd.accumulate_source(gen, factor, w2, t2);
      CHECK(same_bits(w1, w2));
      CHECK(same_bits(t1, t2));
    }
    {
      const auto num = random_values(rng, n, 0.0, 1e6), den = random_values(rng, n, 1e-3, 1e3);
      std::vector<double> o1(n), o2(n);
      ref.divide(num, den, o1);
      simd.divide(num, den, o2);
      CHECK(same_bits(o1, o2));
      ref.multiply(num, den, o1);
      simd.multiply(num, den, o2);
      CHECK(same_bits(o1, o2));
    }
    {
      auto cumulative = random_values(rng, n, 0.0, 1.0);
      std::sort(cumulative.begin(), cumulative.end());
      for (auto& c : cumulative) c = c * 8760.0 + 0.25;
      std::vector<double> u1(n), s1(n), u2(n), s2(n);
      ref.utilisation_scale(cumulative, 8760.25, 2816.0, u1, s1);
      simd.utilisation_scale(cumulative, 8760.25, 2816.0, u2, s2);
      CHECK(same_bits(u1, u2));
      CHECK(same_bits(s1, s2));

      const auto run = random_values(rng, n, -1e6, 1e7), idle = random_values(rng, n, -1e6, 1e7);
      std::vector<std::vector<double>> o1(5, std::vector<double>(n)), o2 = o1;
      const GridInputs in{s1, 1.8e-4 * 8760.25, 0.76 * 100.0, 7.275e-6, run, 1.1e-6, idle};
      ref.objective_grid(in, {o1[0], o1[1], o1[2], o1[3], o1[4]});
      simd.objective_grid(in, {o2[0], o2[1], o2[2], o2[3], o2[4]});
      for (int k = 0; k < 5; ++k) CHECK(same_bits(o1[k], o2[k]));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(o1[4][i] == ((o1[0][i] + o1[1][i]) + o1[2][i]) + o1[3][i]);
      }
    }
    {
      auto metric = random_values(rng, n, -100.0, 100.0);
      if (n > 3) metric[3] = 12.5;
      std::vector<std::uint8_t> m1(n), m2(n);
      ref.threshold_mask(metric, 12.5, m1);
      simd.threshold_mask(metric, 12.5, m2);
      CHECK(m1 == m2);
      for (std::size_t i = 0; i < n; ++i) CHECK(m1[i] == (metric[i] <= 12.5 ? 1 : 0));
    }
  }
}

TEST_CASE("scalar reference values") {
  const auto& k = scalar_table();
  std::vector<double> gen{10.0, -3.0, 0.0}, w{0, 0, 0}, t{0, 0, 0};
  k.accumulate_source(gen, 950.0, w, t);
  CHECK(w == std::vector<double>{9500.0, 0.0, 0.0});
  CHECK(t == std::vector<double>{10.0, 0.0, 0.0});
}
