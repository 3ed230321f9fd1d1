#include "qcsam/statevector.hpp"

#include <cmath>

#include "qcsam/simd.hpp"

namespace qcsam {

double Statevector::norm() const {
    return std::sqrt(simd::active().norm2(amps.data(), amps.size()));
}

Statevector Statevector::zero(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw SizeError("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                        "], got " + std::to_string(n));
    }
    Statevector s;
    s.n_qubits = n;
    s.amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    s.amps[0] = 1.0;
    return s;
}

Statevector Statevector::from_amps(int n, std::vector<cplx> a) {
    if (n < 1 || n > kMaxQubits) throw SizeError("qubit count out of range");
    if (a.size() != (std::size_t{1} << n)) {
        throw ShapeError("amplitude count " + std::to_string(a.size()) +
                         " is not 2^" + std::to_string(n));
    }
    Statevector s = raw(n, std::move(a));
    if (std::abs(s.norm() - 1.0) > 1e-9) {
        throw DomainError("state norm deviates from 1 beyond 1e-9");
    }
    return s;
}

Statevector zero_state(int n) { return Statevector::zero(n); }

cplx inner_product(const Statevector& bra, const Statevector& ket) {
    if (bra.n_qubits != ket.n_qubits) {
        throw ShapeError("inner product width mismatch: " + std::to_string(bra.n_qubits) +
                         " vs " + std::to_string(ket.n_qubits));
    }
    return simd::active().dot(bra.amps.data(), ket.amps.data(), bra.amps.size());
}

std::pair<Statevector, double> project(const Statevector& state,
                                       const std::vector<int>& qubits,
                                       const std::string& outcome) {
    if (qubits.size() != outcome.size()) {
        throw ShapeError("outcome bitstring length does not match qubit set");
    }
    std::uint64_t mask = 0, want = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        int q = qubits[i];
        if (q < 0 || q >= state.n_qubits) throw IndexError("projection qubit out of range");
        std::uint64_t m = qubit_mask(state.n_qubits, q);
        if (mask & m) throw IndexError("duplicate projection qubit");
        mask |= m;
        if (outcome[i] == '1') {
            want |= m;
        } else if (outcome[i] != '0') {
            throw DomainError("outcome bitstring must contain only '0'/'1'");
        }
    }

    double prob = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        if ((i & mask) == want) prob += std::norm(state.amps[i]);
    }
    if (prob <= 1e-12) {
        throw PostSelectionError("post-selection branch probability " + std::to_string(prob) +
                                 " below 1e-12");
    }

    std::vector<cplx> out(state.amps.size(), cplx{0.0, 0.0});
    const double inv = 1.0 / std::sqrt(prob);
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        if ((i & mask) == want) out[i] = state.amps[i] * inv;
    }
    return {Statevector::raw(state.n_qubits, std::move(out)), prob};
}

std::pair<Statevector, double> take_low_register(const Statevector& state, int n_high) {
    if (n_high < 0 || n_high >= state.n_qubits) {
        throw ShapeError("invalid ancilla count for register split");
    }
    if (n_high == 0) return {state, 1.0};
    const int n_low = state.n_qubits - n_high;
    const std::size_t dim = std::size_t{1} << n_low;
    // High qubits are index MSBs, so the |0...0> ancilla block is the prefix.
    double prob = simd::active().norm2(state.amps.data(), dim);
    if (prob <= 1e-12) {
        throw PostSelectionError("ancilla |0..0> branch probability below 1e-12");
    }
    std::vector<cplx> out(state.amps.begin(), state.amps.begin() + dim);
    simd::active().rscale(1.0 / std::sqrt(prob), out.data(), out.size());
    return {Statevector::raw(n_low, std::move(out)), prob};
}

} // namespace qcsam
