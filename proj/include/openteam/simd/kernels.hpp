#pragma once

// Dense double-precision kernels used by the tensor engine and the optimizers.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into its own translation unit and selected at runtime
// when the CPU supports it. Both variants are exercised by the equivalence
// tests; results agree up to floating-point reassociation.

#include <cstddef>
#include <string_view>

namespace openteam::simd {

enum class Isa { scalar, avx2 };

struct AdamCoeffs {
  double lr;
  double beta1;
  double beta2;
  double eps;
  double bias1;  // 1 - beta1^t
  double bias2;  // 1 - beta2^t
};

struct KernelTable {
  std::string_view name;
  Isa isa;

  // c[m,n] += a[m,k] * b[k,n]
  void (*gemm)(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
               std::size_t n);
  // c[m,k] += a[m,n] * b[k,n]^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m, std::size_t n,
                  std::size_t k);
  // c[k,n] += a[m,k]^T * b[m,n]
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                  std::size_t n);

  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*add)(const double* x, const double* y, double* out, std::size_t n);
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  void (*scale)(const double* x, double s, double* out, std::size_t n);

  // In-place bias-corrected Adam update of params/moments from gradient g.
  void (*adam)(double* params, double* m, double* v, const double* g, std::size_t n,
               const AdamCoeffs& coeffs);
  // target = (1 - alpha) * target + alpha * source
  void (*lerp)(double* target, const double* source, double alpha, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();

// The active table. Chosen once from the OPENTEAM_SIMD environment variable
// ("scalar", "avx2", "auto"; default auto) and the CPU's capabilities.
const KernelTable& kernels();

// Overrides the active table for the rest of the process. Throws
// std::runtime_error when the requested variant is unavailable.
void select_isa(Isa isa);

}  // namespace openteam::simd
