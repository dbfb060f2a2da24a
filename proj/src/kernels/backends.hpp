#pragma once

#include "semid/kernels.hpp"

namespace semid::kernels::detail {

// Table compiled in the -mavx2 translation unit; nullptr when that TU was
// built without AVX2 support. Callers must still check the CPU at runtime.
const Backend* avx2_table();

}  // namespace semid::kernels::detail
