// AVX2 variants. This translation unit is compiled with -mavx2 and only
// entered after a runtime CPU check. No FMA: results must match scalar.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace gridflex::kernels {
namespace {

constexpr std::size_t kLanes = 4;

void accumulate_source(std::span<const double> gen, double factor, std::span<double> weighted,
                       std::span<double> total) {
  const std::size_t n = gen.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    // max_pd(a, 0) returns a where a > 0, else +0.0, as the scalar path does
    const __m256d g = _mm256_max_pd(_mm256_loadu_pd(gen.data() + i), zero);
    _mm256_storeu_pd(weighted.data() + i, _mm256_add_pd(_mm256_loadu_pd(weighted.data() + i), _mm256_mul_pd(g, f)));
    _mm256_storeu_pd(total.data() + i, _mm256_add_pd(_mm256_loadu_pd(total.data() + i), g));
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
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_loadu_pd(num.data() + i), _mm256_loadu_pd(den.data() + i)));
  }
  for (; i < n; ++i) out[i] = num[i] / den[i];
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void utilisation_scale(std::span<const double> cumulative, double t_total, double n_cores, std::span<double> u,
                       std::span<double> scale) {
  const std::size_t n = cumulative.size();
  const __m256d total = _mm256_set1_pd(t_total);
  const __m256d cores = _mm256_set1_pd(n_cores);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d uk = _mm256_div_pd(_mm256_loadu_pd(cumulative.data() + k), total);
    _mm256_storeu_pd(u.data() + k, uk);
    _mm256_storeu_pd(scale.data() + k, _mm256_div_pd(cores, uk));
  }
  for (; k < n; ++k) {
    u[k] = cumulative[k] / t_total;
    scale[k] = n_cores / u[k];
  }
}

void objective_grid(const GridInputs& in, const GridOutputs& out) {
  const std::size_t n = in.scale.size();
  const __m256d a = _mm256_set1_pd(in.fixed_a);
  const __m256d b = _mm256_set1_pd(in.fixed_b);
  const __m256d p_run = _mm256_set1_pd(in.run_power);
  const __m256d p_idle = _mm256_set1_pd(in.idle_power);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    const __m256d s = _mm256_loadu_pd(in.scale.data() + k);
    const __m256d ta = _mm256_mul_pd(s, a);
    const __m256d tb = _mm256_mul_pd(s, b);
    const __m256d op = _mm256_mul_pd(s, _mm256_mul_pd(p_run, _mm256_loadu_pd(in.run_sum.data() + k)));
    const __m256d id = _mm256_mul_pd(s, _mm256_mul_pd(p_idle, _mm256_loadu_pd(in.idle_sum.data() + k)));
    _mm256_storeu_pd(out.term_a.data() + k, ta);
    _mm256_storeu_pd(out.term_b.data() + k, tb);
    _mm256_storeu_pd(out.operation.data() + k, op);
    _mm256_storeu_pd(out.idle.data() + k, id);
    _mm256_storeu_pd(out.total.data() + k, _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(ta, tb), op), id));
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
  const __m256d x = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(metric.data() + i), x, _CMP_LE_OQ));
    for (std::size_t lane = 0; lane < kLanes; ++lane) mask[i + lane] = static_cast<std::uint8_t>((bits >> lane) & 1);
  }
  for (; i < n; ++i) mask[i] = metric[i] <= threshold ? 1 : 0;
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() noexcept {
  static const KernelTable table{Isa::avx2, accumulate_source, divide, multiply,
                                 utilisation_scale, objective_grid, threshold_mask};
  return table;
}
}  // namespace detail

}  // namespace gridflex::kernels
