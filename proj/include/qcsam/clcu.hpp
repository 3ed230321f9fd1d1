#pragma once

#include <optional>
#include <vector>

#include "qcsam/circuit.hpp"

namespace qcsam::clcu {

// Complex coefficient set for a linear combination of unitaries.
// omega is the preparation-state normalizer sqrt(sum_j |alpha_j|): the state
// prepared over the ancillas has amplitudes sqrt(|alpha_j|) e^{i arg(alpha_j)/2},
// and unitarity forces exactly this constant. The post-selection success
// probability then obeys success = (omega' / omega^2)^2 with omega' the norm
// of the combination.
struct ClcuCoefficients {
    std::vector<cplx> alphas;
    double omega = 0.0;
    int n_ancilla = 0;

    static ClcuCoefficients make(std::vector<cplx> alphas);
};

// Polar split of a complex scalar; phase is the four-quadrant angle in
// (-pi, pi], zeroed when the magnitude is below 1e-15.
struct MagPhase {
    double magnitude = 0.0;
    double phase = 0.0;
};

MagPhase to_mag_phase(cplx c);

// Rotation-angle form of a complex weight vector: theta_j = arccos of the
// scaled magnitude (in [0, pi/2]), phi_j the phase. `scale` is the factor the
// weights were divided by so that every magnitude is <= 1.
struct WeightEncoding {
    std::vector<double> thetas;
    std::vector<double> phis;
    int n_work = 0;
    double scale = 1.0;

    static WeightEncoding make(const std::vector<cplx>& weights);
};

// A synthesized preparation circuit. The gate list realizes the intended
// state up to the recorded global phase: circuit|0...0> = e^{i*global_phase} * target.
struct PrepCircuit {
    BoundCircuit circuit;
    double global_phase = 0.0;
};

// U_PREP on n_ancilla qubits, built from multi-controlled Ry/Rz only, so its
// gate-level transpose is itself a gate circuit.
PrepCircuit build_prep(const ClcuCoefficients& c);

// Gate-level transpose of build_prep: reversed order, Ry(t) -> Ry(-t),
// Rz/controls unchanged. Its matrix equals the elementwise transpose of the
// build_prep matrix.
PrepCircuit build_prep_transpose(const ClcuCoefficients& c);

// Arbitrary-state synthesis (unit-norm amplitude vector of length 2^n). The
// trailing GPhase gate makes the preparation globally exact.
BoundCircuit state_prep_exact(const std::vector<cplx>& amps);

struct ClcuResult {
    Statevector state;
    double success_prob = 0.0;
};

// Full PREP -> SELECT -> PREP^T -> ancilla |0..0> post-selection pipeline.
// Returns the renormalized working-register state, equal to
// (sum_j alpha_j U_j |psi>)/norm up to a global phase, and the post-selection
// probability. Coefficient lists that are not a power of two are padded with
// zero coefficients and identity unitaries.
ClcuResult clcu_apply_circuit(const ClcuCoefficients& c, const std::vector<BoundCircuit>& us,
                              const Statevector& psi);

// Direct normalized combination sum_j alphas[j] * states[j]. If requested,
// *combination_norm receives the pre-normalization norm (Omega').
Statevector clcu_apply_analytic(const std::vector<cplx>& alphas,
                                const std::vector<Statevector>& states,
                                double* combination_norm = nullptr);

struct BlockEncodeResult {
    Statevector state;
    double success_prob = 0.0;
    double scale = 1.0; // weights were divided by this before encoding
};

// Diagonal block encoding of a complex weight vector (length 2^m): Hadamards
// on the work register, one multi-controlled Ry(2*theta_j) + Rz(-2*phi_j)
// pair on the flag per basis index, then post-selection of the flag on |0>.
// The surviving amplitudes are proportional to the input weights themselves
// (the Rz sign is calibrated for w_j, not conj(w_j)).
BlockEncodeResult block_encode_weights(const std::vector<cplx>& weights);

// Multi-controlled rotation cascade equivalent to a uniformly controlled
// rotation: `angles[p]` is the rotation angle when the control qubits (listed
// most-significant first) spell the bit pattern p. Exposed for reuse by the
// block encoder and tests.
void emit_uniformly_controlled(GateKind kind, int target, const std::vector<int>& controls,
                               std::vector<double> angles, std::vector<GateOp>& out);

} // namespace qcsam::clcu
