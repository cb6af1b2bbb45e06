// NEON kernel variants (AArch64, where 128-bit NEON is baseline).

#include "iset/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <bit>

namespace iset::kernels {
namespace {

void caxpy_neon(cplx* y, const cplx* x, cplx a, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    const float64x2_t ar = vdupq_n_f64(a.real());
    const float64x2_t ai = vdupq_n_f64(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2x2_t xv = vld2q_f64(xd + 2 * i); // val[0]=re, val[1]=im
        float64x2x2_t yv = vld2q_f64(yd + 2 * i);
        yv.val[0] = vfmaq_f64(yv.val[0], ar, xv.val[0]);
        yv.val[0] = vfmsq_f64(yv.val[0], ai, xv.val[1]);
        yv.val[1] = vfmaq_f64(yv.val[1], ar, xv.val[1]);
        yv.val[1] = vfmaq_f64(yv.val[1], ai, xv.val[0]);
        vst2q_f64(yd + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void cscale_neon(cplx* x, cplx a, std::size_t n) {
    auto* xd = reinterpret_cast<double*>(x);
    const float64x2_t ar = vdupq_n_f64(a.real());
    const float64x2_t ai = vdupq_n_f64(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2x2_t xv = vld2q_f64(xd + 2 * i);
        float64x2_t re = vmulq_f64(ar, xv.val[0]);
        re = vfmsq_f64(re, ai, xv.val[1]);
        float64x2_t im = vmulq_f64(ar, xv.val[1]);
        im = vfmaq_f64(im, ai, xv.val[0]);
        float64x2x2_t out{re, im};
        vst2q_f64(xd + 2 * i, out);
    }
    for (; i < n; ++i) x[i] *= a;
}

double norm_sq_neon(const cplx* x, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 1 <= n; i += 1) {
        float64x2_t v = vld1q_f64(xd + 2 * i);
        acc = vfmaq_f64(acc, v, v);
    }
    return vaddvq_f64(acc);
}

cplx cdot_neon(const cplx* x, const cplx* y, std::size_t n) {
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    float64x2_t re_acc = vdupq_n_f64(0.0);
    float64x2_t im_acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2x2_t xv = vld2q_f64(xd + 2 * i);
        float64x2x2_t yv = vld2q_f64(yd + 2 * i);
        re_acc = vfmaq_f64(re_acc, xv.val[0], yv.val[0]);
        re_acc = vfmaq_f64(re_acc, xv.val[1], yv.val[1]);
        im_acc = vfmaq_f64(im_acc, xv.val[0], yv.val[1]);
        im_acc = vfmsq_f64(im_acc, xv.val[1], yv.val[0]);
    }
    double re = vaddvq_f64(re_acc);
    double im = vaddvq_f64(im_acc);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void diag_mul_add_neon(cplx* y, const cplx* x, const double* d, std::size_t n) {
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t dv = vld1q_f64(d + i);
        float64x2x2_t xv = vld2q_f64(xd + 2 * i);
        float64x2x2_t yv = vld2q_f64(yd + 2 * i);
        yv.val[0] = vfmaq_f64(yv.val[0], dv, xv.val[0]);
        yv.val[1] = vfmaq_f64(yv.val[1], dv, xv.val[1]);
        vst2q_f64(yd + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += d[i] * x[i];
}

void scale_add_neon(double* dst, const double* a, const double* b, double s, std::size_t n) {
    const float64x2_t sv = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t av = vld1q_f64(a + i);
        float64x2_t bv = vld1q_f64(b + i);
        vst1q_f64(dst + i, vfmaq_f64(bv, sv, av));
    }
    for (; i < n; ++i) dst[i] = s * a[i] + b[i];
}

std::uint64_t popcount_neon(const std::uint64_t* a, std::size_t nwords) {
    std::uint64_t c = 0;
    std::size_t i = 0;
    for (; i + 2 <= nwords; i += 2) {
        uint8x16_t v = vreinterpretq_u8_u64(vld1q_u64(a + i));
        c += vaddvq_u8(vcntq_u8(v));
    }
    for (; i < nwords; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i]));
    return c;
}

std::uint64_t popcount_and_neon(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    std::uint64_t c = 0;
    std::size_t i = 0;
    for (; i + 2 <= nwords; i += 2) {
        uint64x2_t v = vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i));
        c += vaddvq_u8(vcntq_u8(vreinterpretq_u8_u64(v)));
    }
    for (; i < nwords; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return c;
}

} // namespace

const Kernels* neon() {
    static const Kernels k{
        "neon",
        caxpy_neon,
        cscale_neon,
        norm_sq_neon,
        cdot_neon,
        diag_mul_add_neon,
        scale_add_neon,
        popcount_neon,
        popcount_and_neon,
    };
    return &k;
}

} // namespace iset::kernels

#else

namespace iset::kernels {
const Kernels* neon() { return nullptr; }
} // namespace iset::kernels

#endif
