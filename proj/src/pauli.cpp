#include "qcsam/pauli.hpp"

#include <bit>
#include <cmath>

#include "qcsam/simd.hpp"

namespace qcsam {

PauliString PauliString::from_label(int n, const std::string& label, int sign) {
    if (static_cast<int>(label.size()) != n) {
        throw ShapeError("pauli label length does not match qubit count");
    }
    PauliString p;
    p.n_qubits = n;
    p.sign = sign;
    p.factors.reserve(n);
    for (char c : label) {
        switch (c) {
            case 'I': p.factors.push_back(PauliFactor::I); break;
            case 'X': p.factors.push_back(PauliFactor::X); break;
            case 'Y': p.factors.push_back(PauliFactor::Y); break;
            case 'Z': p.factors.push_back(PauliFactor::Z); break;
            default: throw DomainError("pauli label characters must be I/X/Y/Z");
        }
    }
    return p;
}

PauliString PauliString::single(int n, int qubit, PauliFactor f, int sign) {
    if (qubit < 0 || qubit >= n) throw IndexError("pauli qubit out of range");
    PauliString p;
    p.n_qubits = n;
    p.sign = sign;
    p.factors.assign(n, PauliFactor::I);
    p.factors[qubit] = f;
    return p;
}

std::string PauliString::label() const {
    std::string s;
    for (auto f : factors) s.push_back(static_cast<char>(f));
    return s;
}

void pauli_apply_inplace(const PauliString& p, const std::vector<cplx>& in,
                         std::vector<cplx>& out, int n_qubits) {
    if (p.n_qubits != n_qubits || static_cast<int>(p.factors.size()) != n_qubits) {
        throw ShapeError("pauli width mismatch");
    }
    std::uint64_t xmask = 0, ymask = 0, zmask = 0;
    for (int q = 0; q < n_qubits; ++q) {
        const std::uint64_t m = qubit_mask(n_qubits, q);
        switch (p.factors[q]) {
            case PauliFactor::X: xmask |= m; break;
            case PauliFactor::Y: xmask |= m; ymask |= m; break;
            case PauliFactor::Z: zmask |= m; break;
            case PauliFactor::I: break;
        }
    }
    const std::size_t N = in.size();
    out.assign(N, cplx{0.0, 0.0});
    const int y_count = static_cast<int>(std::popcount(ymask));
    // Each Y contributes i^{1-2b} on a source bit b: i on |0>, -i on |1>.
    // Collected per index below via popcounts.
    for (std::size_t j = 0; j < N; ++j) {
        const std::size_t dst = j ^ xmask;
        // Z factors: (-1) per set bit under zmask (Y's Z-part folded into ymask phase).
        int neg = std::popcount(j & zmask);
        // Y factors: product over set Y positions of (i if bit==0 else -i)
        //          = i^{y_count} * (-1)^{popcount(j & ymask)}.
        neg += std::popcount(j & ymask);
        cplx phase = (neg & 1) ? cplx{-1.0, 0.0} : cplx{1.0, 0.0};
        switch (y_count & 3) {
            case 1: phase *= cplx{0.0, 1.0}; break;
            case 2: phase *= cplx{-1.0, 0.0}; break;
            case 3: phase *= cplx{0.0, -1.0}; break;
            default: break;
        }
        out[dst] = phase * in[j];
    }
}

Statevector pauli_apply(const PauliString& p, const Statevector& state) {
    std::vector<cplx> out;
    pauli_apply_inplace(p, state.amps, out, state.n_qubits);
    return Statevector::raw(state.n_qubits, std::move(out));
}

double expectation(const Statevector& state, const PauliString& p) {
    std::vector<cplx> tmp;
    pauli_apply_inplace(p, state.amps, tmp, state.n_qubits);
    const cplx v = simd::active().dot(state.amps.data(), tmp.data(), tmp.size());
    if (std::abs(v.imag()) > 1e-9) {
        throw InconsistencyError("pauli expectation has imaginary residue " +
                                 std::to_string(v.imag()));
    }
    return p.sign * v.real();
}

} // namespace qcsam
