#pragma once

#include <string>
#include <vector>

#include "qcsam/statevector.hpp"

namespace qcsam {

enum class PauliFactor : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

// Signed tensor product of single-qubit Paulis, used as a readout observable.
// The sign lets a single operator family express the +/- pairing of the
// two-class readout.
struct PauliString {
    int n_qubits = 0;
    std::vector<PauliFactor> factors;
    int sign = +1;

    // e.g. from_label(3, "XYI") puts X on qubit 0, Y on qubit 1.
    static PauliString from_label(int n, const std::string& label, int sign = +1);
    // Identity everywhere except `factor` on `qubit`.
    static PauliString single(int n, int qubit, PauliFactor f, int sign = +1);

    std::string label() const;
};

// P|psi> (sign excluded; it only scales the expectation).
Statevector pauli_apply(const PauliString& p, const Statevector& state);
void pauli_apply_inplace(const PauliString& p, const std::vector<cplx>& in,
                         std::vector<cplx>& out, int n_qubits);

// sign * <psi|P|psi>, guaranteed real; throws InconsistencyError if the
// imaginary residue exceeds 1e-9 (cannot happen for valid inputs).
double expectation(const Statevector& state, const PauliString& p);

} // namespace qcsam
