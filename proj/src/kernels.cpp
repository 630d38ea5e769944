#include "tkgibbs/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace tkgibbs::kernels {

const Ops* avx2_ops_impl();

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(__i386__)
  static const Ops* ops = [] {
    const Ops* impl = avx2_ops_impl();
    if (impl == nullptr) return static_cast<const Ops*>(nullptr);
    return (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) ? impl : nullptr;
  }();
  return ops;
#else
  return avx2_ops_impl();
#endif
}

const Ops& active_ops() {
  static const Ops& ops = [sel = std::getenv("TKGIBBS_KERNEL")]() -> const Ops& {
    if (sel != nullptr) {
      if (std::strcmp(sel, "scalar") == 0) return scalar_ops();
      if (std::strcmp(sel, "avx2") == 0 && avx2_ops() != nullptr) return *avx2_ops();
    }
    return avx2_ops() != nullptr ? *avx2_ops() : scalar_ops();
  }();
  return ops;
}

}  // namespace tkgibbs::kernels
