#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "openteam/simd/kernels.hpp"

namespace openteam::simd {

#ifdef OPENTEAM_HAVE_AVX2
const KernelTable& avx2_table();
#endif

bool cpu_supports_avx2() {
#if defined(OPENTEAM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported;
#else
  return false;
#endif
}

const KernelTable* avx2_kernels() {
#ifdef OPENTEAM_HAVE_AVX2
  if (cpu_supports_avx2()) return &avx2_table();
#endif
  return nullptr;
}

namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("OPENTEAM_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_kernels();
  if (choice == "avx2") {
    if (const KernelTable* t = avx2_kernels()) return t;
    throw std::runtime_error("OPENTEAM_SIMD=avx2 requested but AVX2/FMA kernels are unavailable");
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& kernels() { return *active_slot().load(std::memory_order_acquire); }

void select_isa(Isa isa) {
  const KernelTable* table = nullptr;
  switch (isa) {
    case Isa::scalar:
      table = &scalar_kernels();
      break;
    case Isa::avx2:
      table = avx2_kernels();
      break;
  }
  if (!table) throw std::runtime_error("requested kernel variant is not available on this CPU");
  active_slot().store(table, std::memory_order_release);
}

}  // namespace openteam::simd
