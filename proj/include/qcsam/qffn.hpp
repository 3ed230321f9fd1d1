#pragma once

#include "qcsam/circuit.hpp"

namespace qcsam {

// Hardware-efficient feed-forward block: per layer, an Rz-Ry-Rz triplet on
// every qubit followed by a CNOT chain q -> q+1, closed into a ring with
// CNOT(n-1 -> 0) when n >= 3.
//
// Trainable slots: 3 * n * L. No data slots.
struct QffnSpec {
    int n_qubits = 0;
    int n_layers = 1;
};

ParamCircuit build_qffn(const QffnSpec& spec);

} // namespace qcsam
