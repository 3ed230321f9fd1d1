#include "qcsam/qfm.hpp"

namespace qcsam {

ParamCircuit build_qfm(const QfmSpec& spec) {
    const int n = spec.n_qubits;
    const int L = spec.n_layers;
    if (n < 1 || n > kMaxQubits) throw SizeError("qfm qubit count out of range");
    if (L < 1) throw DomainError("qfm layer count must be >= 1");

    ParamCircuit c;
    c.n_qubits = n;
    c.n_data = n;
    c.n_train = L * (2 * n - 1);

    int t = 0;
    for (int l = 0; l < L; ++l) {
        for (int q = 0; q < n; ++q) c.push_data(GateOp::rx(q, 0.0), q);
        for (int q = 0; q + 1 < n; ++q) c.push_train(GateOp::zz(q, q + 1, 0.0), t++);
        for (int q = 0; q < n; ++q) c.push_train(GateOp::ry(q, 0.0), t++);
    }
    for (int q = 0; q < n; ++q) c.push_data(GateOp::rx(q, 0.0), q);

    c.validate();
    return c;
}

} // namespace qcsam
