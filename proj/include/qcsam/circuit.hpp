#pragma once

#include <span>
#include <string>
#include <vector>

#include "qcsam/gates.hpp"

namespace qcsam {

// Fully concrete gate list, ready to run.
struct BoundCircuit {
    int n_qubits = 0;
    std::vector<GateOp> gates;
};

enum class SlotFamily { Fixed, Data, Train };

// A gate whose angle may come from one of two disjoint slot families:
// data slots (classical input features, re-used freely across gates) and
// trainable slots.
struct CircuitOp {
    GateOp gate;
    SlotFamily family = SlotFamily::Fixed;
    int slot = -1;
};

struct ParamCircuit {
    int n_qubits = 0;
    std::vector<CircuitOp> ops;
    int n_train = 0;
    int n_data = 0;

    void push_fixed(GateOp g) { ops.push_back({std::move(g), SlotFamily::Fixed, -1}); }
    void push_data(GateOp g, int slot) { ops.push_back({std::move(g), SlotFamily::Data, slot}); }
    void push_train(GateOp g, int slot) { ops.push_back({std::move(g), SlotFamily::Train, slot}); }

    // Checks slot indices < family sizes and gate well-formedness.
    void validate() const;

    BoundCircuit bind(std::span<const double> data, std::span<const double> params) const;
};

Statevector run(const BoundCircuit& circ, const Statevector& input);
void run_inplace(const BoundCircuit& circ, std::vector<cplx>& amps, int n_qubits);

Statevector bind_and_run(const ParamCircuit& circ, std::span<const double> data,
                         std::span<const double> params, const Statevector& input);

// One gate per line: kind, targets, (controls), angle/slot. Debugging aid,
// not a stability contract.
std::string dump(const BoundCircuit& circ);
std::string dump(const ParamCircuit& circ);

} // namespace qcsam
