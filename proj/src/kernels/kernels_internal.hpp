#pragma once

#include "gridflex/kernels.hpp"

namespace gridflex::kernels::detail {

#if defined(GRIDFLEX_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(GRIDFLEX_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif

}  // namespace gridflex::kernels::detail
