#pragma once

#include <array>
#include <vector>

#include "qcsam/statevector.hpp"

namespace qcsam {

// Gate alphabet. GPhase multiplies the whole state by e^{i*angle}; it exists
// so that synthesized state-preparation circuits can be globally exact, and
// its controlled form is an ordinary multi-controlled phase.
enum class GateKind { H, X, S, Sdg, Rx, Ry, Rz, ZZ, CNOT, GPhase };

struct GateOp {
    GateKind kind;
    std::vector<int> targets;  // 1 qubit; 2 for ZZ and CNOT (control, target); 0 for GPhase
    std::vector<int> controls; // extra controls, all conditioned on |1>
    double angle = 0.0;        // rotations and GPhase only

    static GateOp h(int q) { return {GateKind::H, {q}, {}, 0.0}; }
    static GateOp x(int q) { return {GateKind::X, {q}, {}, 0.0}; }
    static GateOp s(int q) { return {GateKind::S, {q}, {}, 0.0}; }
    static GateOp sdg(int q) { return {GateKind::Sdg, {q}, {}, 0.0}; }
    static GateOp rx(int q, double t) { return {GateKind::Rx, {q}, {}, t}; }
    static GateOp ry(int q, double t) { return {GateKind::Ry, {q}, {}, t}; }
    static GateOp rz(int q, double t) { return {GateKind::Rz, {q}, {}, t}; }
    static GateOp zz(int a, int b, double t) { return {GateKind::ZZ, {a, b}, {}, t}; }
    static GateOp cnot(int c, int t) { return {GateKind::CNOT, {c, t}, {}, 0.0}; }
    static GateOp gphase(double t) { return {GateKind::GPhase, {}, {}, t}; }
};

bool is_rotation(GateKind k);
const char* kind_name(GateKind k);

// Throws IndexError / DomainError if the gate is malformed for an n-qubit register.
void validate_gate(const GateOp& g, int n_qubits);

// 2x2 matrix of a single-qubit kind (row-major). DomainError for 2-qubit kinds.
std::array<cplx, 4> gate_matrix(GateKind k, double angle);

void apply_gate_inplace(std::vector<cplx>& amps, int n_qubits, const GateOp& g);
Statevector apply_gate(const Statevector& state, const GateOp& g);

// Conjugate transpose / plain transpose of a single gate.
GateOp dagger(const GateOp& g);
GateOp transpose(const GateOp& g);

// U^dagger / U^T of a whole gate list (reversed order, per-gate mapping).
std::vector<GateOp> dagger_circuit(const std::vector<GateOp>& gates);
std::vector<GateOp> transpose_circuit(const std::vector<GateOp>& gates);

// Add controls / relocate a gate inside a larger register.
GateOp controlled_on(GateOp g, const std::vector<int>& extra_controls);
GateOp shift_qubits(GateOp g, int offset);

} // namespace qcsam
