#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

namespace iset::kernels {

using cplx = std::complex<double>;

// Hot inner loops shared by the state-vector propagator and the bit-set
// graph code. One scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on AArch64) selected once at runtime; every
// variant is equivalence-tested against the scalar kernels.
//
// SIMD variants may reassociate floating-point sums, so reductions agree
// with scalar only to rounding, not bit-for-bit. Integer kernels are exact.
struct Kernels {
    const char* name;

    // y[i] += a * x[i]
    void (*caxpy)(cplx* y, const cplx* x, cplx a, std::size_t n);
    // x[i] *= a
    void (*cscale)(cplx* x, cplx a, std::size_t n);
    // sum_i |x[i]|^2
    double (*norm_sq)(const cplx* x, std::size_t n);
    // sum_i conj(x[i]) * y[i]
    cplx (*cdot)(const cplx* x, const cplx* y, std::size_t n);
    // y[i] += d[i] * x[i], d real (diagonal Hamiltonian term)
    void (*diag_mul_add)(cplx* y, const cplx* x, const double* d, std::size_t n);
    // dst[i] = s * a[i] + b[i] (per-step diagonal assembly)
    void (*scale_add)(double* dst, const double* a, const double* b, double s, std::size_t n);

    std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t nwords);
    std::uint64_t (*popcount_and)(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords);
};

const Kernels& scalar();

// Null when the backend is not compiled in or the CPU lacks support.
const Kernels* avx2();
const Kernels* neon();

// Runtime-selected backend. Honours ISET_KERNELS=scalar|avx2|neon (anything
// else, or unset, means auto). Selection is sticky after first use except
// through force_backend.
const Kernels& active();

// Test hook: "scalar", "avx2", "neon", or "auto". Throws InputError for an
// unavailable backend.
void force_backend(const char* name);

} // namespace iset::kernels
