#include "qcsam/qffn.hpp"

namespace qcsam {

ParamCircuit build_qffn(const QffnSpec& spec) {
    const int n = spec.n_qubits;
    const int L = spec.n_layers;
    if (n < 1 || n > kMaxQubits) throw SizeError("qffn qubit count out of range");
    if (L < 1) throw DomainError("qffn layer count must be >= 1");

    ParamCircuit c;
    c.n_qubits = n;
    c.n_data = 0;
    c.n_train = 3 * n * L;

    int t = 0;
    for (int l = 0; l < L; ++l) {
        for (int q = 0; q < n; ++q) {
            c.push_train(GateOp::rz(q, 0.0), t++);
            c.push_train(GateOp::ry(q, 0.0), t++);
            c.push_train(GateOp::rz(q, 0.0), t++);
        }
        for (int q = 0; q + 1 < n; ++q) c.push_fixed(GateOp::cnot(q, q + 1));
        if (n >= 3) c.push_fixed(GateOp::cnot(n - 1, 0));
    }

    c.validate();
    return c;
}

} // namespace qcsam
