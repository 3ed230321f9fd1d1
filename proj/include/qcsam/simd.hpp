#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace qcsam::simd {

using cplx = std::complex<double>;

// Kernel table for the dense inner loops of the statevector engine. The
// scalar implementations are the reference semantics; vector backends must
// agree with them to within reassociation rounding (see test_simd).
struct Kernels {
    // sum_i conj(a[i]) * b[i]
    cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
    // x[i] *= alpha
    void (*cscale)(cplx alpha, cplx* x, std::size_t n);
    // x[i] *= s
    void (*rscale)(double s, cplx* x, std::size_t n);
    // sum_i |x[i]|^2
    double (*norm2)(const cplx* x, std::size_t n);
    // In-place 2x2 complex matrix on k-th pair (p0[k], p1[k]), row-major u.
    void (*mat2)(const cplx u[4], cplx* p0, cplx* p1, std::size_t n);
};

enum class Backend { Scalar, Avx2 };

extern const Kernels scalar_kernels;
extern const Kernels avx2_kernels; // valid only where avx2_supported()

bool avx2_supported();

// Active table, resolved once at startup (cpuid). force_backend() is for
// equivalence tests; it throws if the requested backend is unsupported.
const Kernels& active();
Backend active_backend();
void force_backend(Backend b);
std::string backend_name();

} // namespace qcsam::simd
