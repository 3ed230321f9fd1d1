#include "qcsam/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace qcsam::simd {

namespace {

// One __m256d holds two interleaved complex doubles: [re0, im0, re1, im1].

inline __m256d cmul(__m256d re_bcast, __m256d im_bcast, __m256d x) {
    // (r + i*j) * x, with r/j broadcast across lanes.
    __m256d x_swap = _mm256_permute_pd(x, 0x5); // [im0, re0, im1, re1]
    return _mm256_fmaddsub_pd(re_bcast, x, _mm256_mul_pd(im_bcast, x_swap));
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d racc = _mm256_setzero_pd();
    __m256d iacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        racc = _mm256_fmadd_pd(va, vb, racc);                           // [ar*br, ai*bi]x2
        iacc = _mm256_fmadd_pd(_mm256_permute_pd(va, 0x5), vb, iacc);   // [ai*br, ar*bi]x2
    }
    alignas(32) double r[4], m[4];
    _mm256_store_pd(r, racc);
    _mm256_store_pd(m, iacc);
    double re = r[0] + r[1] + r[2] + r[3];
    double im = (m[1] + m[3]) - (m[0] + m[2]);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    const __m256d re = _mm256_set1_pd(alpha.real());
    const __m256d im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        __m256d vy = _mm256_loadu_pd(py + 2 * i);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(re, im, vx)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void cscale_avx2(cplx alpha, cplx* x, std::size_t n) {
    double* px = reinterpret_cast<double*>(x);
    const __m256d re = _mm256_set1_pd(alpha.real());
    const __m256d im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        _mm256_storeu_pd(px + 2 * i, cmul(re, im, vx));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

void rscale_avx2(double s, cplx* x, std::size_t n) {
    double* px = reinterpret_cast<double*>(x);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(px + 2 * i, _mm256_mul_pd(vs, _mm256_loadu_pd(px + 2 * i)));
    }
    for (; i < n; ++i) x[i] *= s;
}

double norm2_avx2(const cplx* x, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        acc = _mm256_fmadd_pd(vx, vx, acc);
    }
    alignas(32) double r[4];
    _mm256_store_pd(r, acc);
    double s = r[0] + r[1] + r[2] + r[3];
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void mat2_avx2(const cplx u[4], cplx* p0, cplx* p1, std::size_t n) {
    double* q0 = reinterpret_cast<double*>(p0);
    double* q1 = reinterpret_cast<double*>(p1);
    const __m256d u00r = _mm256_set1_pd(u[0].real()), u00i = _mm256_set1_pd(u[0].imag());
    const __m256d u01r = _mm256_set1_pd(u[1].real()), u01i = _mm256_set1_pd(u[1].imag());
    const __m256d u10r = _mm256_set1_pd(u[2].real()), u10i = _mm256_set1_pd(u[2].imag());
    const __m256d u11r = _mm256_set1_pd(u[3].real()), u11i = _mm256_set1_pd(u[3].imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d a = _mm256_loadu_pd(q0 + 2 * i);
        __m256d b = _mm256_loadu_pd(q1 + 2 * i);
        __m256d r0 = _mm256_add_pd(cmul(u00r, u00i, a), cmul(u01r, u01i, b));
        __m256d r1 = _mm256_add_pd(cmul(u10r, u10i, a), cmul(u11r, u11i, b));
        _mm256_storeu_pd(q0 + 2 * i, r0);
        _mm256_storeu_pd(q1 + 2 * i, r1);
    }
    for (; i < n; ++i) {
        const cplx a = p0[i], b = p1[i];
        p0[i] = u[0] * a + u[1] * b;
        p1[i] = u[2] * a + u[3] * b;
    }
}

} // namespace

const Kernels avx2_kernels = {
    dot_avx2, axpy_avx2, cscale_avx2, rscale_avx2, norm2_avx2, mat2_avx2,
};

} // namespace qcsam::simd

#else // non-x86: table exists but is never selected (avx2_supported() is false)

namespace qcsam::simd {
const Kernels avx2_kernels = scalar_kernels;
} // namespace qcsam::simd

#endif
