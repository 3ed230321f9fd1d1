#include "qcsam/simd.hpp"

#include <stdexcept>

namespace qcsam::simd {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Kernels* table_for(Backend b) {
    return b == Backend::Avx2 ? &avx2_kernels : &scalar_kernels;
}

// Function-local statics: resolved on first use, after cpuid model init.
Backend& backend_ref() {
    static Backend b = avx2_supported() ? Backend::Avx2 : Backend::Scalar;
    return b;
}

const Kernels*& active_ref() {
    static const Kernels* p = table_for(backend_ref());
    return p;
}

} // namespace

const Kernels& active() { return *active_ref(); }

Backend active_backend() { return backend_ref(); }

void force_backend(Backend b) {
    if (b == Backend::Avx2 && !avx2_supported()) {
        throw std::runtime_error("avx2 backend not supported on this cpu");
    }
    backend_ref() = b;
    active_ref() = table_for(b);
}

std::string backend_name() {
    return backend_ref() == Backend::Avx2 ? "avx2" : "scalar";
}

} // namespace qcsam::simd
