#include "qcsam/circuit.hpp"

#include <sstream>

namespace qcsam {

void ParamCircuit::validate() const {
    for (const auto& op : ops) {
        validate_gate(op.gate, n_qubits);
        switch (op.family) {
            case SlotFamily::Fixed:
                break;
            case SlotFamily::Data:
                if (op.slot < 0 || op.slot >= n_data) {
                    throw BindingError("data slot index out of range");
                }
                if (!is_rotation(op.gate.kind)) {
                    throw DomainError("only rotation gates may carry slots");
                }
                break;
            case SlotFamily::Train:
                if (op.slot < 0 || op.slot >= n_train) {
                    throw BindingError("trainable slot index out of range");
                }
                if (!is_rotation(op.gate.kind)) {
                    throw DomainError("only rotation gates may carry slots");
                }
                break;
        }
    }
}

BoundCircuit ParamCircuit::bind(std::span<const double> data,
                                std::span<const double> params) const {
    if (static_cast<int>(data.size()) != n_data) {
        throw BindingError("data vector length " + std::to_string(data.size()) +
                           " does not match " + std::to_string(n_data) + " data slots");
    }
    if (static_cast<int>(params.size()) != n_train) {
        throw BindingError("parameter vector length " + std::to_string(params.size()) +
                           " does not match " + std::to_string(n_train) + " trainable slots");
    }
    BoundCircuit out;
    out.n_qubits = n_qubits;
    out.gates.reserve(ops.size());
    for (const auto& op : ops) {
        GateOp g = op.gate;
        if (op.family == SlotFamily::Data) g.angle = data[op.slot];
        if (op.family == SlotFamily::Train) g.angle = params[op.slot];
        out.gates.push_back(std::move(g));
    }
    return out;
}

Statevector run(const BoundCircuit& circ, const Statevector& input) {
    if (circ.n_qubits != input.n_qubits) {
        throw ShapeError("circuit width does not match state width");
    }
    Statevector out = input;
    run_inplace(circ, out.amps, out.n_qubits);
    return out;
}

void run_inplace(const BoundCircuit& circ, std::vector<cplx>& amps, int n_qubits) {
    for (const auto& g : circ.gates) apply_gate_inplace(amps, n_qubits, g);
}

Statevector bind_and_run(const ParamCircuit& circ, std::span<const double> data,
                         std::span<const double> params, const Statevector& input) {
    return run(circ.bind(data, params), input);
}

namespace {

void dump_gate(std::ostringstream& os, const GateOp& g) {
    os << kind_name(g.kind);
    for (int q : g.targets) os << ' ' << q;
    if (!g.controls.empty()) {
        os << " c[";
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            if (i) os << ' ';
            os << g.controls[i];
        }
        os << ']';
    }
}

} // namespace

std::string dump(const BoundCircuit& circ) {
    std::ostringstream os;
    for (const auto& g : circ.gates) {
        dump_gate(os, g);
        if (is_rotation(g.kind) || g.kind == GateKind::GPhase) os << ' ' << g.angle;
        os << '\n';
    }
    return os.str();
}

std::string dump(const ParamCircuit& circ) {
    std::ostringstream os;
    for (const auto& op : circ.ops) {
        dump_gate(os, op.gate);
        switch (op.family) {
            case SlotFamily::Fixed:
                if (is_rotation(op.gate.kind) || op.gate.kind == GateKind::GPhase) {
                    os << ' ' << op.gate.angle;
                }
                break;
            case SlotFamily::Data: os << " x[" << op.slot << ']'; break;
            case SlotFamily::Train: os << " t[" << op.slot << ']'; break;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace qcsam
