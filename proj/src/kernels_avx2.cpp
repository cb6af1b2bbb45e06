// AVX2+FMA kernel variants. This translation unit is the only one built
// with -mavx2; nothing here may be inlined into baseline code, so all
// entry points go through the Kernels function table.

#include "iset/kernels.hpp"

#if (defined(__x86_64__) || defined(__i386__)) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <bit>

namespace iset::kernels {
namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void caxpy_avx2(cplx* y, const cplx* x, cplx a, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0b0101); // swap re/im in each pair
        __m256d t = _mm256_mul_pd(xs, ai);
        __m256d prod = _mm256_fmaddsub_pd(xv, ar, t);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void cscale_avx2(cplx* x, cplx a, std::size_t n) {
    auto* xd = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0b0101);
        __m256d t = _mm256_mul_pd(xs, ai);
        _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(xv, ar, t));
    }
    for (; i < n; ++i) x[i] *= a;
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

cplx cdot_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    const __m256d odd_neg = _mm256_castsi256_pd(
        _mm256_set_epi64x(0x8000000000000000ll, 0, 0x8000000000000000ll, 0));
    __m256d re_acc = _mm256_setzero_pd();
    __m256d im_acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        re_acc = _mm256_fmadd_pd(xv, yv, re_acc);
        __m256d ys = _mm256_permute_pd(yv, 0b0101);
        __m256d t = _mm256_mul_pd(xv, ys); // [xr*yi, xi*yr, ...]
        im_acc = _mm256_add_pd(im_acc, _mm256_xor_pd(t, odd_neg));
    }
    double re = hsum(re_acc);
    double im = hsum(im_acc);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void diag_mul_add_avx2(cplx* y, const cplx* x, const double* d, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d dv = _mm256_permute4x64_pd(
            _mm256_castpd128_pd256(_mm_loadu_pd(d + i)), 0x50); // [d0 d0 d1 d1]
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmadd_pd(dv, xv, yv));
    }
    for (; i < n; ++i) y[i] += d[i] * x[i];
}

void scale_add_avx2(double* dst, const double* a, const double* b, double s, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d av = _mm256_loadu_pd(a + i);
        __m256d bv = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(av, sv, bv));
    }
    for (; i < n; ++i) dst[i] = s * a[i] + b[i];
}

// Nibble-lookup popcount (Mula); profitable for long rows, scalar popcnt tail.
__m256i popcount_epi8(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi32(v, 4), low_mask);
    return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t nwords) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= nwords; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_epi8(v), _mm256_setzero_si256()));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < nwords; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i]));
    return c;
}

std::uint64_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= nwords; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i v = _mm256_and_si256(va, vb);
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_epi8(v), _mm256_setzero_si256()));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < nwords; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return c;
}

} // namespace

const Kernels* avx2() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
    static const Kernels k{
        "avx2",
        caxpy_avx2,
        cscale_avx2,
        norm_sq_avx2,
        cdot_avx2,
        diag_mul_add_avx2,
        scale_add_avx2,
        popcount_avx2,
        popcount_and_avx2,
    };
    return &k;
}

} // namespace iset::kernels

#else

namespace iset::kernels {
const Kernels* avx2() { return nullptr; }
} // namespace iset::kernels

#endif
