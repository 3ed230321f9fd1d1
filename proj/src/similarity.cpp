#include "qcsam/similarity.hpp"

#include <cmath>

#include "qcsam/simd.hpp"

namespace qcsam::similarity {

ComplexWeight ComplexWeight::checked(cplx v) {
    if (std::abs(v) > 1.0 + 1e-9) {
        throw InconsistencyError("attention weight magnitude " + std::to_string(std::abs(v)) +
                                 " exceeds 1");
    }
    return {v};
}

ComplexWeight attention_weight_analytic(const BoundCircuit& uq, const BoundCircuit& uk) {
    if (uq.n_qubits != uk.n_qubits) {
        throw ShapeError("query/key circuit widths differ");
    }
    const Statevector zero = zero_state(uq.n_qubits);
    const Statevector q = run(uq, zero);
    const Statevector k = run(uk, zero);
    return ComplexWeight::checked(inner_product(k, q));
}

HadamardTestReadout hadamard_test(const BoundCircuit& uq, const BoundCircuit& uk) {
    if (uq.n_qubits != uk.n_qubits) {
        throw ShapeError("query/key circuit widths differ");
    }
    const int n = uq.n_qubits;
    Statevector full = zero_state(n + 2);

    apply_gate_inplace(full.amps, full.n_qubits, GateOp::h(0));
    apply_gate_inplace(full.amps, full.n_qubits, GateOp::h(1));

    // Controlled Uk^dagger Uq on the working register, control q1. Every gate
    // is controlled individually; no dense matrices are formed.
    for (const auto& g : uq.gates) {
        apply_gate_inplace(full.amps, full.n_qubits, controlled_on(shift_qubits(g, 2), {1}));
    }
    for (const auto& g : dagger_circuit(uk.gates)) {
        apply_gate_inplace(full.amps, full.n_qubits, controlled_on(shift_qubits(g, 2), {1}));
    }

    // Conditional i on the selection branch.
    apply_gate_inplace(full.amps, full.n_qubits, controlled_on(GateOp::s(1), {0}));
    apply_gate_inplace(full.amps, full.n_qubits, GateOp::h(1));

    // q0 and q1 are the two index MSBs: block [0, 2^n) is (q0,q1) = (0,0) and
    // block [2*2^n, 3*2^n) is (1,0).
    const std::size_t dim = std::size_t{1} << n;
    const auto& k = simd::active();
    HadamardTestReadout r;
    r.p0_real_branch = k.norm2(full.amps.data(), dim);
    r.p0_imag_branch = k.norm2(full.amps.data() + 2 * dim, dim);
    return r;
}

ComplexWeight weight_from_readout(const HadamardTestReadout& r) {
    if (r.p0_real_branch < -1e-12 || r.p0_real_branch > 0.5 + 1e-9 ||
        r.p0_imag_branch < -1e-12 || r.p0_imag_branch > 0.5 + 1e-9) {
        throw InconsistencyError("hadamard-test branch probability out of range");
    }
    cplx v{4.0 * r.p0_real_branch - 1.0, 1.0 - 4.0 * r.p0_imag_branch};
    const double mag = std::abs(v);
    if (mag > 1.0 + 1e-6) {
        throw InconsistencyError("recovered weight magnitude " + std::to_string(mag) +
                                 " exceeds 1 beyond tolerance");
    }
    if (mag > 1.0) v /= mag;
    return {v};
}

} // namespace qcsam::similarity
