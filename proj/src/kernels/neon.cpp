// NEON (AArch64) variants, two double lanes. Same per-element operation
// order as the scalar reference; no fused multiply-add.

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace gridflex::kernels {
namespace {

constexpr std::size_t kLanes = 2;

void accumulate_source(std::span<const double> gen, double factor, std::span<double> weighted,
                       std::span<double> total) {
  const std::size_t n = gen.size();
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t f = vdupq_n_f64(factor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t raw = vld1q_f64(gen.data() + i);
    const float64x2_t g = vbslq_f64(vcgtq_f64(raw, zero), raw, zero);
    vst1q_f64(weighted.data() + i, vaddq_f64(vld1q_f64(weighted.data() + i), vmulq_f64(g, f)));
    vst1q_f64(total.data() + i, vaddq_f64(vld1q_f64(total.data() + i), g));
  }
  for (; i < n; ++i) {
    const double g = gen[i] > 0.0 ? gen[i] : 0.0;
    weighted[i] += g * factor;
    total[i] += g;
  }
}

void divide(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  const std::size_t n = num.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out.data() + i, vdivq_f64(vld1q_f64(num.data() + i), vld1q_f64(den.data() + i)));
  }
  for (; i < n; ++i) out[i] = num[i] / den[i];
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out.data() + i, vmulq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void utilisation_scale(std::span<const double> cumulative, double t_total, double n_cores, std::span<double> u,
                       std::span<double> scale) {
  const std::size_t n = cumulative.size();
  const float64x2_t total = vdupq_n_f64(t_total);
  const float64x2_t cores = vdupq_n_f64(n_cores);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t uk = vdivq_f64(vld1q_f64(cumulative.data() + k), total);
    vst1q_f64(u.data() + k, uk);
    vst1q_f64(scale.data() + k, vdivq_f64(cores, uk));
  }
  for (; k < n; ++k) {
    u[k] = cumulative[k] / t_total;
    scale[k] = n_cores / u[k];
  }
}

void objective_grid(const GridInputs& in, const GridOutputs& out) {
  const std::size_t n = in.scale.size();
  const float64x2_t a = vdupq_n_f64(in.fixed_a);
  const float64x2_t b = vdupq_n_f64(in.fixed_b);
  const float64x2_t p_run = vdupq_n_f64(in.run_power);
  const float64x2_t p_idle = vdupq_n_f64(in.idle_power);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const float64x2_t s = vld1q_f64(in.scale.data() + k);
    const float64x2_t ta = vmulq_f64(s, a);
    const float64x2_t tb = vmulq_f64(s, b);
    const float64x2_t op = vmulq_f64(s, vmulq_f64(p_run, vld1q_f64(in.run_sum.data() + k)));
    const float64x2_t id = vmulq_f64(s, vmulq_f64(p_idle, vld1q_f64(in.idle_sum.data() + k)));
    vst1q_f64(out.term_a.data() + k, ta);
    vst1q_f64(out.term_b.data() + k, tb);
    vst1q_f64(out.operation.data() + k, op);
    vst1q_f64(out.idle.data() + k, id);
    vst1q_f64(out.total.data() + k, vaddq_f64(vaddq_f64(vaddq_f64(ta, tb), op), id));
  }
  for (; k < n; ++k) {
    const double s = in.scale[k];
    out.term_a[k] = s * in.fixed_a;
    out.term_b[k] = s * in.fixed_b;
    out.operation[k] = s * (in.run_power * in.run_sum[k]);
    out.idle[k] = s * (in.idle_power * in.idle_sum[k]);
    out.total[k] = ((out.term_a[k] + out.term_b[k]) + out.operation[k]) + out.idle[k];
  }
}

void threshold_mask(std::span<const double> metric, double threshold, std::span<std::uint8_t> mask) {
  const std::size_t n = metric.size();
  const float64x2_t x = vdupq_n_f64(threshold);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const uint64x2_t le = vcleq_f64(vld1q_f64(metric.data() + i), x);
    mask[i] = static_cast<std::uint8_t>(vgetq_lane_u64(le, 0) & 1);
    mask[i + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(le, 1) & 1);
  }
  for (; i < n; ++i) mask[i] = metric[i] <= threshold ? 1 : 0;
}

}  // namespace

namespace detail {
const KernelTable& neon_table() noexcept {
  static const KernelTable table{Isa::neon, accumulate_source, divide, multiply,
                                 utilisation_scale, objective_grid, threshold_mask};
  return table;
}
}  // namespace detail

}  // namespace gridflex::kernels
