#include "gridflex/kernels.hpp"

namespace gridflex::kernels {
namespace {

void accumulate_source(std::span<const double> gen, double factor, std::span<double> weighted,
                       std::span<double> total) {
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const double g = gen[i] > 0.0 ? gen[i] : 0.0;
    weighted[i] += g * factor;
    total[i] += g;
  }
}

void divide(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  for (std::size_t i = 0; i < num.size(); ++i) out[i] = num[i] / den[i];
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

void utilisation_scale(std::span<const double> cumulative, double t_total, double n_cores, std::span<double> u,
                       std::span<double> scale) {
  for (std::size_t k = 0; k < cumulative.size(); ++k) {
    u[k] = cumulative[k] / t_total;
    scale[k] = n_cores / u[k];
  }
}

void objective_grid(const GridInputs& in, const GridOutputs& out) {
  for (std::size_t k = 0; k < in.scale.size(); ++k) {
    const double s = in.scale[k];
    out.term_a[k] = s * in.fixed_a;
    out.term_b[k] = s * in.fixed_b;
    out.operation[k] = s * (in.run_power * in.run_sum[k]);
    out.idle[k] = s * (in.idle_power * in.idle_sum[k]);
    out.total[k] = ((out.term_a[k] + out.term_b[k]) + out.operation[k]) + out.idle[k];
  }
}

void threshold_mask(std::span<const double> metric, double threshold, std::span<std::uint8_t> mask) {
  for (std::size_t i = 0; i < metric.size(); ++i) mask[i] = metric[i] <= threshold ? 1 : 0;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Isa::scalar, accumulate_source, divide, multiply,
                                 utilisation_scale, objective_grid, threshold_mask};
  return table;
}

}  // namespace gridflex::kernels
