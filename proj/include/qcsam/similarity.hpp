#pragma once

#include "qcsam/circuit.hpp"

namespace qcsam::similarity {

// Complex attention weight <K|Q>; Cauchy-Schwarz bounds |value| by 1 on unit
// vectors, enforced with a 1e-9 slack at construction.
struct ComplexWeight {
    cplx value;

    static ComplexWeight checked(cplx v);
};

// Exact joint outcome probabilities of the two-branch Hadamard test:
//   p0_real_branch = P(selection=0, auxiliary=0) = (1 + Re<K|Q>)/4
//   p0_imag_branch = P(selection=1, auxiliary=0) = (1 - Im<K|Q>)/4
struct HadamardTestReadout {
    double p0_real_branch = 0.0;
    double p0_imag_branch = 0.0;
};

// <0|Uk^dagger Uq|0>, evaluated as an inner product of the two simulated states.
ComplexWeight attention_weight_analytic(const BoundCircuit& uq, const BoundCircuit& uk);

// Simulates the three-register circuit exactly: a selection qubit q0 choosing
// the real or imaginary branch, an auxiliary qubit q1 carrying the
// interference readout, and the working register. The conditional factor i on
// the selection branch is realized as controlled-S from q0 onto q1 between
// the auxiliary Hadamards.
HadamardTestReadout hadamard_test(const BoundCircuit& uq, const BoundCircuit& uk);

// Algebraic inversion: Re = 4*p_re - 1, Im = 1 - 4*p_im. A recovered
// magnitude above 1 + 1e-6 signals a broken circuit (InconsistencyError);
// smaller excesses are clamped back to the unit disk.
ComplexWeight weight_from_readout(const HadamardTestReadout& r);

} // namespace qcsam::similarity
