#include "heterocut/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace heterocut::kernels {

const Ops& active_ops() {
  static const Ops& selected = []() -> const Ops& {
    if (const char* env = std::getenv("HETEROCUT_KERNELS")) {
      const std::string_view want(env);
      if (want == "scalar") return scalar_ops();
      if (want == "avx2") {
        const Ops* ops = avx2_ops();
        if (!ops) throw std::runtime_error("HETEROCUT_KERNELS=avx2 but AVX2 is unavailable");
        return *ops;
      }
      throw std::runtime_error("unknown HETEROCUT_KERNELS value (use scalar or avx2)");
    }
    const Ops* ops = avx2_ops();
    return ops ? *ops : scalar_ops();
  }();
  return selected;
}

}  // namespace heterocut::kernels
