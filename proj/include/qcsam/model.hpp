#pragma once

#include <span>
#include <vector>

#include "qcsam/circuit.hpp"
#include "qcsam/pauli.hpp"
#include "qcsam/qffn.hpp"
#include "qcsam/qfm.hpp"
#include "qcsam/rng.hpp"

namespace qcsam::model {

enum class AttentionMode { Complex, RealOverlap };

// One attention head: a patch grid and the QFM acting on each patch's
// feature vector.
struct HeadSpec {
    int grid_rows = 2;
    int grid_cols = 2;
    QfmSpec qfm;

    int n_patches() const { return grid_rows * grid_cols; }
};

struct ModelSpec {
    std::vector<HeadSpec> heads;
    QffnSpec qffn;
    int n_classes = 2;
    AttentionMode mode = AttentionMode::Complex;

    int n_qubits() const { return qffn.n_qubits; }
    void validate() const;
};

// Trainable parameters of one head. The same role parameters are shared by
// every patch of that head; beta are the trainable complex patch weights.
struct HeadParams {
    std::vector<double> qfm_q, qfm_k, qfm_v;
    std::vector<cplx> beta;
};

struct ModelParams {
    std::vector<HeadParams> heads;
    std::vector<cplx> gamma;
    std::vector<double> qffn;
};

// M x M complex grid; entry (k, j) = <K_j | Q_k> (query index k selects the
// row that weights the values for S_k).
struct AttentionMatrix {
    int m = 0;
    std::vector<cplx> entries; // row-major

    cplx& at(int k, int j) { return entries[static_cast<std::size_t>(k) * m + j]; }
    const cplx& at(int k, int j) const { return entries[static_cast<std::size_t>(k) * m + j]; }
};

struct ClassDistribution {
    std::vector<double> probs;
};

// Per-head patch features for one input: head_features[h][j] has length
// n_qubits with entries in [0, pi].
struct Sample {
    std::vector<std::vector<std::vector<double>>> head_features;
    int label = 0;
};

// --- operations -----------------------------------------------------------

std::vector<Statevector> encode_patches(const std::vector<std::vector<double>>& features,
                                        std::span<const double> role_params,
                                        const QfmSpec& qfm);

AttentionMatrix attention_matrix(const std::vector<Statevector>& qs,
                                 const std::vector<Statevector>& ks,
                                 AttentionMode mode = AttentionMode::Complex);

// Circuit-level variant: each weight measured by the Hadamard-test pipeline.
AttentionMatrix attention_matrix_circuit(const std::vector<BoundCircuit>& q_circs,
                                         const std::vector<BoundCircuit>& k_circs,
                                         AttentionMode mode = AttentionMode::Complex);

// |S_k> = normalize(sum_j A[k,j] |V_j>), then |G> = normalize(sum_k beta_k |S_k>).
Statevector attention_output(const AttentionMatrix& a, const std::vector<Statevector>& vs,
                             const std::vector<cplx>& beta);

Statevector multi_head_combine(const std::vector<Statevector>& gs,
                               const std::vector<cplx>& gamma);

// Readout operator families:
//   C=2 -> [+Z0, -Z0], C=3 -> [X0, Y0, Z0], C=4 -> [X0X1, Y0X1, Z0X1, X0Y1].
std::vector<PauliString> measurement_ops(int n_classes, int n_qubits);

// y_k = (1 + <M_k>) / sum_j (1 + <M_j>).
ClassDistribution class_probs(const Statevector& psi, const std::vector<PauliString>& ms);

double cross_entropy(const ClassDistribution& yhat, int label);

struct ForwardResult {
    ClassDistribution probs;
    Statevector final_state;
};

ForwardResult forward(const Sample& sample, const ModelSpec& spec, const ModelParams& params);

// Fully circuit-realized forward: Hadamard-test weights, CLCU circuits with
// post-selection at every combination stage, synthesized preparations between
// stages, and the bound QFFN circuit. Intended for verification at small
// sizes; must agree with forward() on the class distribution.
ForwardResult forward_circuit(const Sample& sample, const ModelSpec& spec,
                              const ModelParams& params);

// --- parameter plumbing ----------------------------------------------------

// Near-identity start: angles uniform in [-0.1, 0.1], complex weights
// 1 + Gaussian(0, 0.1) per component.
ModelParams init_params(const ModelSpec& spec, Rng& rng);

std::size_t param_count(const ModelSpec& spec);
std::vector<double> flatten(const ModelSpec& spec, const ModelParams& params);
ModelParams unflatten(const ModelSpec& spec, std::span<const double> flat);

} // namespace qcsam::model
