#pragma once

#include "qcsam/circuit.hpp"

namespace qcsam {

// Quantum feature mapping: per layer, Rx data encoding on every qubit, then
// trainable ZZ on each nearest-neighbor pair, then trainable Ry on every
// qubit; a final Rx data-encoding layer closes the circuit. The same n data
// slots feed every layer and the final layer (data re-uploading).
//
// Trainable slots: L * (2n - 1). Data slots: n.
struct QfmSpec {
    int n_qubits = 0;
    int n_layers = 1;
};

ParamCircuit build_qfm(const QfmSpec& spec);

} // namespace qcsam
