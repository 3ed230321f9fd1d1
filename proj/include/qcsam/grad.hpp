#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qcsam/model.hpp"

namespace qcsam::train {

// Reverse-mode (adjoint) gradient of the cross-entropy loss with respect to
// the canonical flattening of ModelParams. State cotangents are carried in
// the d/d(conj) convention: a real loss L satisfies dL = 2 Re <c, d psi>.
//
// Walks each circuit backward gate by gate; rotation-parameter gradients use
// dU/dt = -(i/2) G U, i.e. dL/dt = Im(<lambda, G psi_after>).

// Loss of one sample, gradient accumulated (+=) into `grad` (length
// param_count(spec)). Throws CancellationError on degenerate samples.
double loss_and_grad_sample(const model::Sample& sample, const model::ModelSpec& spec,
                            const model::ModelParams& params, std::span<double> grad);

// Batch mean loss and mean gradient. Per-sample work is distributed over
// n_threads; the reduction runs in sample order so results do not depend on
// the thread count. Degenerate-sample errors carry the sample index.
std::pair<double, std::vector<double>> loss_and_grad(std::span<const model::Sample> batch,
                                                     const model::ModelSpec& spec,
                                                     const model::ModelParams& params,
                                                     int n_threads = 1);

// Central finite differences of the mean batch loss (step 1e-5); the
// independent oracle for the adjoint path.
std::vector<double> finite_diff_grad(std::span<const model::Sample> batch,
                                     const model::ModelSpec& spec,
                                     const model::ModelParams& params, double step = 1e-5);

// Mean forward loss of a batch (no gradient).
double batch_loss(std::span<const model::Sample> batch, const model::ModelSpec& spec,
                  const model::ModelParams& params);

// Backward walk over a bound circuit: `state` enters as the amplitudes after
// the circuit and leaves as the input amplitudes; `lambda` is transformed the
// same way; trainable-slot gradients are accumulated into grad_train.
void circuit_backward(const ParamCircuit& circ, std::span<const double> data,
                      std::span<const double> params, int n_qubits, std::vector<cplx>& state,
                      std::vector<cplx>& lambda, std::span<double> grad_train);

} // namespace qcsam::train
