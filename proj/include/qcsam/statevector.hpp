#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcsam/errors.hpp"

namespace qcsam {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24; // dense-simulation guard

// Dense complex amplitude vector over n qubits.
//
// Bit convention: qubit 0 is the MOST significant bit of the amplitude index,
// matching top-down circuit diagrams. For an n-qubit register,
//   index(b_0 b_1 ... b_{n-1}) = sum_q b_q << (n - 1 - q).
// Treat instances as immutable values; the free functions below are pure.
struct Statevector {
    int n_qubits = 0;
    std::vector<cplx> amps;

    std::size_t dim() const { return amps.size(); }
    double norm() const;

    // |0...0>
    static Statevector zero(int n);
    // Validates the 2^n length and unit norm (1e-9).
    static Statevector from_amps(int n, std::vector<cplx> a);
    // Unchecked: for internal construction of known-normalized data.
    static Statevector raw(int n, std::vector<cplx> a) {
        Statevector s;
        s.n_qubits = n;
        s.amps = std::move(a);
        return s;
    }
};

inline int bitpos(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }
inline std::uint64_t qubit_mask(int n_qubits, int qubit) {
    return std::uint64_t{1} << bitpos(n_qubits, qubit);
}

Statevector zero_state(int n);

// <bra|ket> = sum_k conj(bra_k) ket_k
cplx inner_product(const Statevector& bra, const Statevector& ket);

// Post-select the given qubits onto the outcome bitstring ('0'/'1' chars,
// outcome[i] is the required result for qubits[i]). Returns the renormalized
// projected state (same register width) and the pre-projection probability.
std::pair<Statevector, double> project(const Statevector& state,
                                       const std::vector<int>& qubits,
                                       const std::string& outcome);

// Slice of the amplitudes with the first `n_high` qubits fixed to |0...0>,
// renormalized to a state on the remaining qubits, plus the slice probability.
// This is how ancilla registers are discarded after post-selection.
std::pair<Statevector, double> take_low_register(const Statevector& state, int n_high);

} // namespace qcsam
