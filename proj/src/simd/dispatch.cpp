#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "oseen/simd/kernels.hpp"

namespace oseen::simd {

#ifdef OSEEN_HAVE_AVX2
const KernelTable& avx2_kernel_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(OSEEN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("OSEEN_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2") {
      if (best == nullptr) throw std::runtime_error("OSEEN_SIMD=avx2 requested but unavailable");
      return best;
    }
    throw std::runtime_error("OSEEN_SIMD: unknown level '" + want + "'");
  }
  return best != nullptr ? best : &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_table() {
#ifdef OSEEN_HAVE_AVX2
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

Level active_level() { return active().level; }

void force_level(Level level) {
  const KernelTable* table = level == Level::kScalar ? &scalar_table() : avx2_table();
  if (table == nullptr) throw std::runtime_error("SIMD level unavailable on this CPU/build");
  current().store(table, std::memory_order_release);
}

}  // namespace oseen::simd
