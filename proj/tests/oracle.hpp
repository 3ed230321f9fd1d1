#pragma once

// Test-only dense-matrix oracle. Builds full 2^n x 2^n gate matrices by
// explicit tensor embedding and multiplies them out; deliberately independent
// of the strided kernels in the library so the two paths can check each other.

#include <complex>
#include <vector>

#include "qcsam/circuit.hpp"

namespace oracle {

using qcsam::cplx;
using Mat = std::vector<cplx>; // row-major, dim x dim

inline int bit_of(std::size_t index, int qubit, int n) {
    return static_cast<int>((index >> (n - 1 - qubit)) & 1u);
}

inline Mat dense_gate(const qcsam::GateOp& g, int n) {
    using qcsam::GateKind;
    const std::size_t dim = std::size_t{1} << n;
    Mat m(dim * dim, cplx{0.0, 0.0});

    // Small matrix over the target qubits (1, 2 or 0 of them).
    std::vector<cplx> u;
    int nt = static_cast<int>(g.targets.size());
    switch (g.kind) {
        case GateKind::ZZ: {
            const cplx same = std::polar(1.0, -0.5 * g.angle);
            const cplx diff = std::polar(1.0, +0.5 * g.angle);
            u = {same, 0, 0, 0, 0, diff, 0, 0, 0, 0, diff, 0, 0, 0, 0, same};
            break;
        }
        case GateKind::CNOT:
            u = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
            break;
        case GateKind::GPhase:
            u = {std::polar(1.0, g.angle)};
            break;
        default: {
            const auto a = qcsam::gate_matrix(g.kind, g.angle);
            u.assign(a.begin(), a.end());
            break;
        }
    }

    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            bool spectator_ok = true;
            for (int q = 0; q < n && spectator_ok; ++q) {
                bool involved = false;
                for (int t : g.targets) involved |= t == q;
                for (int t : g.controls) involved |= t == q;
                if (!involved && bit_of(i, q, n) != bit_of(j, q, n)) spectator_ok = false;
            }
            if (!spectator_ok) continue;

            bool controls_equal = true, controls_ones = true;
            for (int q : g.controls) {
                if (bit_of(i, q, n) != bit_of(j, q, n)) controls_equal = false;
                if (bit_of(i, q, n) != 1) controls_ones = false;
            }
            if (!controls_equal) continue;

            if (!controls_ones) {
                // identity on the inactive branch
                bool targets_equal = true;
                for (int t : g.targets) {
                    if (bit_of(i, t, n) != bit_of(j, t, n)) targets_equal = false;
                }
                if (targets_equal) m[i * dim + j] = 1.0;
                continue;
            }

            std::size_t r = 0, c = 0;
            for (int t = 0; t < nt; ++t) {
                r = (r << 1) | static_cast<std::size_t>(bit_of(i, g.targets[t], n));
                c = (c << 1) | static_cast<std::size_t>(bit_of(j, g.targets[t], n));
            }
            m[i * dim + j] = u[r * (std::size_t{1} << nt) + c];
        }
    }
    return m;
}

inline Mat matmul(const Mat& a, const Mat& b, std::size_t dim) {
    Mat c(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            const cplx aik = a[i * dim + k];
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < dim; ++j) c[i * dim + j] += aik * b[k * dim + j];
        }
    }
    return c;
}

inline Mat dense_circuit(const std::vector<qcsam::GateOp>& gates, int n) {
    const std::size_t dim = std::size_t{1} << n;
    Mat m(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
    for (const auto& g : gates) m = matmul(dense_gate(g, n), m, dim);
    return m;
}

inline std::vector<cplx> matvec(const Mat& m, const std::vector<cplx>& x) {
    const std::size_t dim = x.size();
    std::vector<cplx> y(dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) y[i] += m[i * dim + j] * x[j];
    }
    return y;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace oracle
