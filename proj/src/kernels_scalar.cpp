#include "iset/kernels.hpp"

#include <bit>

namespace iset::kernels {
namespace {

void caxpy_scalar(cplx* y, const cplx* x, cplx a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void cscale_scalar(cplx* x, cplx a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

cplx cdot_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void diag_mul_add_scalar(cplx* y, const cplx* x, const double* d, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += d[i] * x[i];
}

void scale_add_scalar(double* dst, const double* a, const double* b, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = s * a[i] + b[i];
}

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t nwords) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < nwords; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i]));
    return c;
}

std::uint64_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < nwords; ++i) c += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return c;
}

} // namespace

const Kernels& scalar() {
    static const Kernels k{
        "scalar",
        caxpy_scalar,
        cscale_scalar,
        norm_sq_scalar,
        cdot_scalar,
        diag_mul_add_scalar,
        scale_add_scalar,
        popcount_scalar,
        popcount_and_scalar,
    };
    return k;
}

} // namespace iset::kernels
