#include "saddlesim/kernels.hpp"

#include "saddlesim/errors.hpp"

namespace saddlesim::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_impl();

const Ops* avx2_ops() {
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  return avx2_ops_impl();
}
#else
const Ops* avx2_ops() { return nullptr; }
#endif

namespace {
const Ops* g_active = nullptr;

const Ops* best() {
  if (const Ops* simd = avx2_ops()) return simd;
  return &scalar_ops();
}
}  // namespace

const Ops& active() {
  if (!g_active) g_active = best();
  return *g_active;
}

void select(const std::string& which) {
  if (which == "auto") {
    g_active = best();
  } else if (which == "scalar") {
    g_active = &scalar_ops();
  } else {
    throw ConfigError("unknown kernels selection: " + which);
  }
}

}  // namespace saddlesim::kernels
