#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace gridflex::kernels {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* simd_table() noexcept {
#if defined(GRIDFLEX_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &detail::avx2_table() : nullptr;
#elif defined(GRIDFLEX_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* force = std::getenv("GRIDFLEX_FORCE_SCALAR");
    const bool forced = force != nullptr && *force != '\0' && std::string_view(force) != "0";
    const KernelTable* simd = forced ? nullptr : simd_table();
    return simd != nullptr ? *simd : scalar_table();
  }();
  return table;
}

}  // namespace gridflex::kernels
