#include <cstdlib>
#include <cstring>

#include "backends.hpp"

namespace semid::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Backend* select() {
  const Backend* avx = avx2();
  const char* req = std::getenv("SEMID_KERNELS");
  if (req != nullptr) {
    if (std::strcmp(req, "scalar") == 0) return &scalar();
    if (std::strcmp(req, "avx2") == 0 && avx != nullptr) return avx;
    // unknown or unavailable request: scalar
    return &scalar();
  }
  return avx != nullptr ? avx : &scalar();
}

}  // namespace

const Backend* avx2() {
  static const Backend* table =
      cpu_has_avx2() ? detail::avx2_table() : nullptr;
  return table;
}

const Backend& active() {
  static const Backend* chosen = select();
  return *chosen;
}

}  // namespace semid::kernels
