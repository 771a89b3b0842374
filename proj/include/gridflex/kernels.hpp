#pragma once

// Elementwise arithmetic kernels behind the energy blend and the dispatch
// objective. Each kernel has a scalar reference and optional AVX2 / NEON
// variants; the variant is picked once at startup from CPU features.
//
// All kernels are elementwise (no reductions), perform the same IEEE
// operations in the same order per element, and therefore produce results
// bit-identical to the scalar reference. Reductions are done by callers in
// plain left-to-right order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace gridflex::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

/// Inputs of the objective on the utilisation grid. Element k describes the
/// policy that runs the k+1 cheapest intervals.
struct GridInputs {
  std::span<const double> scale;     ///< n_cores / u_k
  double fixed_a = 0.0;              ///< per-core hardware term (embedded or acquisition)
  double fixed_b = 0.0;              ///< per-core demand term (0 for emissions)
  double run_power = 0.0;            ///< P_avg in MW
  std::span<const double> run_sum;   ///< sum of metric*t over the run set
  double idle_power = 0.0;           ///< P_idle in MW
  std::span<const double> idle_sum;  ///< sum of metric*t over the idle set
};

struct GridOutputs {
  std::span<double> term_a;
  std::span<double> term_b;
  std::span<double> operation;
  std::span<double> idle;
  std::span<double> total;
};

struct KernelTable {
  Isa isa;

  /// weighted[i] += max(gen[i], 0) * factor;  total[i] += max(gen[i], 0)
  void (*accumulate_source)(std::span<const double> gen, double factor, std::span<double> weighted,
                            std::span<double> total);

  /// out[i] = num[i] / den[i]
  void (*divide)(std::span<const double> num, std::span<const double> den, std::span<double> out);

  /// out[i] = a[i] * b[i]
  void (*multiply)(std::span<const double> a, std::span<const double> b, std::span<double> out);

  /// u[k] = cumulative[k] / t_total;  scale[k] = n_cores / u[k]
  void (*utilisation_scale)(std::span<const double> cumulative, double t_total, double n_cores,
                            std::span<double> u, std::span<double> scale);

  /// term_a = s*a; term_b = s*b; operation = s*(P_run*run); idle = s*(P_idle*idle);
  /// total = ((term_a + term_b) + operation) + idle
  void (*objective_grid)(const GridInputs& in, const GridOutputs& out);

  /// mask[i] = metric[i] <= threshold
  void (*threshold_mask)(std::span<const double> metric, double threshold, std::span<std::uint8_t> mask);
};

[[nodiscard]] const KernelTable& scalar_table() noexcept;

/// SIMD table compiled in and supported by this CPU, or nullptr.
[[nodiscard]] const KernelTable* simd_table() noexcept;

/// Table used by the library. SIMD when available unless the environment
/// variable GRIDFLEX_FORCE_SCALAR is set to a non-empty value other than "0".
[[nodiscard]] const KernelTable& active() noexcept;

}  // namespace gridflex::kernels
