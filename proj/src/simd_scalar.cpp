#include "qcsam/simd.hpp"

namespace qcsam::simd {

namespace {

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double pr = alpha.real(), pi = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(pr * xr - pi * xi, pr * xi + pi * xr);
    }
}

void cscale_scalar(cplx alpha, cplx* x, std::size_t n) {
    const double pr = alpha.real(), pi = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx(pr * xr - pi * xi, pr * xi + pi * xr);
    }
}

void rscale_scalar(double s, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

double norm2_scalar(const cplx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    }
    return acc;
}

void mat2_scalar(const cplx u[4], cplx* p0, cplx* p1, std::size_t n) {
    const cplx u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = p0[i], b = p1[i];
        p0[i] = u00 * a + u01 * b;
        p1[i] = u10 * a + u11 * b;
    }
}

} // namespace

const Kernels scalar_kernels = {
    dot_scalar, axpy_scalar, cscale_scalar, rscale_scalar, norm2_scalar, mat2_scalar,
};

} // namespace qcsam::simd
