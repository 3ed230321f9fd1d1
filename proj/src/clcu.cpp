#include "qcsam/clcu.hpp"

#include <algorithm>
#include <cmath>

#include "qcsam/simd.hpp"

namespace qcsam::clcu {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

int ceil_log2(std::size_t n) {
    int a = 0;
    while ((std::size_t{1} << a) < n) ++a;
    return a;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

ClcuCoefficients ClcuCoefficients::make(std::vector<cplx> alphas) {
    if (alphas.empty()) throw ShapeError("coefficient list is empty");
    double mag_sum = 0.0;
    for (const cplx& a : alphas) mag_sum += std::abs(a);
    if (mag_sum <= 0.0) throw DegenerateError("all CLCU coefficients are zero");
    ClcuCoefficients c;
    c.alphas = std::move(alphas);
    c.omega = std::sqrt(mag_sum);
    c.n_ancilla = ceil_log2(c.alphas.size());
    return c;
}

MagPhase to_mag_phase(cplx c) {
    MagPhase mp;
    mp.magnitude = std::abs(c);
    if (mp.magnitude < 1e-15) {
        mp.phase = 0.0;
    } else {
        mp.phase = std::atan2(c.imag(), c.real());
        if (mp.phase <= -kPi) mp.phase = kPi; // (-pi, pi]
    }
    return mp;
}

WeightEncoding WeightEncoding::make(const std::vector<cplx>& weights) {
    if (!is_pow2(weights.size()) || weights.size() < 2) {
        throw ShapeError("weight vector length must be a power of two >= 2");
    }
    double max_mag = 0.0;
    for (const cplx& w : weights) max_mag = std::max(max_mag, std::abs(w));
    if (max_mag <= 0.0) throw DegenerateError("all weights are zero");

    WeightEncoding e;
    e.n_work = ceil_log2(weights.size());
    e.scale = max_mag;
    e.thetas.reserve(weights.size());
    e.phis.reserve(weights.size());
    for (const cplx& w : weights) {
        const MagPhase mp = to_mag_phase(w / max_mag);
        e.thetas.push_back(std::acos(std::min(1.0, mp.magnitude)));
        e.phis.push_back(mp.phase);
    }
    return e;
}

void emit_uniformly_controlled(GateKind kind, int target, const std::vector<int>& controls,
                               std::vector<double> angles, std::vector<GateOp>& out) {
    const int d = static_cast<int>(controls.size());
    if (angles.size() != (std::size_t{1} << d)) {
        throw ShapeError("uniformly controlled rotation needs 2^d angles");
    }
    if (kind != GateKind::Ry && kind != GateKind::Rz) {
        throw DomainError("uniformly controlled emission supports Ry/Rz only");
    }
    // Moebius transform over the subset lattice: after it, angles[p] is the
    // rotation applied with the all-ones control set {controls[i] : bit set}.
    // Same-axis rotations commute, so the per-pattern sums telescope back to
    // the requested angles.
    for (int bit = 0; bit < d; ++bit) {
        const std::size_t m = std::size_t{1} << bit;
        for (std::size_t p = 0; p < angles.size(); ++p) {
            if (p & m) angles[p] -= angles[p ^ m];
        }
    }
    for (std::size_t p = 0; p < angles.size(); ++p) {
        if (std::abs(angles[p]) < 1e-14) continue;
        GateOp g{kind, {target}, {}, angles[p]};
        for (int i = 0; i < d; ++i) {
            // controls[i] corresponds to pattern bit (d-1-i), MSB first.
            if (p & (std::size_t{1} << (d - 1 - i))) g.controls.push_back(controls[i]);
        }
        out.push_back(std::move(g));
    }
}

namespace {

// Shared magnitude+phase synthesis over `a` qubits (qubit 0 = index MSB).
// Returns the gate list and the residual mean phase mu: the gates map |0..0>
// to e^{-i*mu} * sum_j t_j |j>.
std::vector<GateOp> synth_prep_gates(const std::vector<cplx>& target, int a, double* mu_out) {
    const std::size_t N = std::size_t{1} << a;

    // Subtree weights W[d] has 2^d entries of squared magnitude mass.
    std::vector<std::vector<double>> w(a + 1);
    w[a].resize(N);
    for (std::size_t j = 0; j < N; ++j) w[a][j] = std::norm(target[j]);
    for (int d = a - 1; d >= 0; --d) {
        w[d].resize(std::size_t{1} << d);
        for (std::size_t b = 0; b < w[d].size(); ++b) {
            w[d][b] = w[d + 1][2 * b] + w[d + 1][2 * b + 1];
        }
    }

    std::vector<GateOp> gates;
    std::vector<int> controls;
    for (int d = 0; d < a; ++d) {
        std::vector<double> angles(std::size_t{1} << d, 0.0);
        for (std::size_t b = 0; b < angles.size(); ++b) {
            const double w0 = w[d + 1][2 * b], w1 = w[d + 1][2 * b + 1];
            if (w0 + w1 > 0.0) angles[b] = 2.0 * std::atan2(std::sqrt(w1), std::sqrt(w0));
        }
        emit_uniformly_controlled(GateKind::Ry, d, controls, std::move(angles), gates);
        controls.push_back(d);
    }

    // Diagonal phases, peeled from the last qubit upward; each level leaves
    // the pairwise mean for the level above, so only the overall mean escapes
    // as a global phase.
    std::vector<double> lam(N);
    for (std::size_t j = 0; j < N; ++j) {
        lam[j] = (std::abs(target[j]) < 1e-15) ? 0.0 : std::arg(target[j]);
    }
    for (int d = a - 1; d >= 0; --d) {
        std::vector<double> omega(std::size_t{1} << d);
        std::vector<double> mean(std::size_t{1} << d);
        for (std::size_t b = 0; b < omega.size(); ++b) {
            omega[b] = lam[2 * b + 1] - lam[2 * b];
            mean[b] = 0.5 * (lam[2 * b] + lam[2 * b + 1]);
        }
        std::vector<int> ctrl(controls.begin(), controls.begin() + d);
        emit_uniformly_controlled(GateKind::Rz, d, ctrl, std::move(omega), gates);
        lam = std::move(mean);
    }
    *mu_out = lam[0];
    return gates;
}

std::vector<cplx> prep_target(const ClcuCoefficients& c) {
    const std::size_t N = std::size_t{1} << c.n_ancilla;
    std::vector<cplx> t(N, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < c.alphas.size(); ++j) {
        const MagPhase mp = to_mag_phase(c.alphas[j]);
        t[j] = std::polar(std::sqrt(mp.magnitude) / c.omega, 0.5 * mp.phase);
    }
    return t;
}

} // namespace

PrepCircuit build_prep(const ClcuCoefficients& c) {
    if (c.alphas.empty()) throw ShapeError("coefficient list is empty");
    PrepCircuit p;
    p.circuit.n_qubits = c.n_ancilla;
    if (c.n_ancilla == 0) {
        // N = 1: the preparation is the scalar e^{i arg(alpha_0)/2}; the empty
        // circuit realizes it up to exactly that phase.
        p.global_phase = -0.5 * std::arg(c.alphas[0]);
        return p;
    }
    double mu = 0.0;
    p.circuit.gates = synth_prep_gates(prep_target(c), c.n_ancilla, &mu);
    p.global_phase = -mu;
    return p;
}

PrepCircuit build_prep_transpose(const ClcuCoefficients& c) {
    PrepCircuit p = build_prep(c);
    p.circuit.gates = transpose_circuit(p.circuit.gates);
    return p;
}

BoundCircuit state_prep_exact(const std::vector<cplx>& amps) {
    if (!is_pow2(amps.size()) || amps.size() < 2) {
        throw ShapeError("state synthesis needs a 2^n amplitude vector, n >= 1");
    }
    const int n = ceil_log2(amps.size());
    double norm2 = 0.0;
    for (const cplx& v : amps) norm2 += std::norm(v);
    if (std::abs(norm2 - 1.0) > 1e-9) throw DomainError("state synthesis input is not unit norm");

    BoundCircuit bc;
    bc.n_qubits = n;
    double mu = 0.0;
    bc.gates = synth_prep_gates(amps, n, &mu);
    if (std::abs(mu) > 1e-15) bc.gates.push_back(GateOp::gphase(mu));
    return bc;
}

ClcuResult clcu_apply_circuit(const ClcuCoefficients& c, const std::vector<BoundCircuit>& us,
                              const Statevector& psi) {
    if (us.size() != c.alphas.size()) {
        throw ShapeError("unitary count does not match coefficient count");
    }
    for (const auto& u : us) {
        if (u.n_qubits != psi.n_qubits) throw ShapeError("CLCU unitary width mismatch");
    }

    if (c.n_ancilla == 0) {
        // PREP and PREP^T each contribute the scalar e^{i arg(alpha_0)/2}, so
        // the output carries the coefficient's phase like the general path.
        Statevector out = run(us[0], psi);
        const double phase = std::arg(c.alphas[0]);
        if (std::abs(phase) > 1e-15) {
            apply_gate_inplace(out.amps, out.n_qubits, GateOp::gphase(phase));
        }
        return {std::move(out), 1.0};
    }

    const int a = c.n_ancilla;
    const int n_work = psi.n_qubits;
    const int n_total = a + n_work;
    if (n_total > kMaxQubits) throw SizeError("CLCU register exceeds dense-simulation guard");

    const std::size_t dim_w = psi.dim();
    std::vector<cplx> full(std::size_t{1} << n_total, cplx{0.0, 0.0});
    std::copy(psi.amps.begin(), psi.amps.end(), full.begin());

    const PrepCircuit prep = build_prep(c);
    for (const auto& g : prep.circuit.gates) apply_gate_inplace(full, n_total, g);

    // SELECT: every gate of U_j controlled on the ancilla pattern j; pattern
    // zeros are handled by X conjugation. Padded slots (j >= N) are identities.
    std::vector<int> all_anc(a);
    for (int q = 0; q < a; ++q) all_anc[q] = q;
    for (std::size_t j = 0; j < us.size(); ++j) {
        if (us[j].gates.empty()) continue;
        std::vector<int> flips;
        for (int q = 0; q < a; ++q) {
            const bool bit = (j >> (a - 1 - q)) & 1;
            if (!bit) flips.push_back(q);
        }
        for (int q : flips) apply_gate_inplace(full, n_total, GateOp::x(q));
        for (const auto& g : us[j].gates) {
            apply_gate_inplace(full, n_total, controlled_on(shift_qubits(g, a), all_anc));
        }
        for (int q : flips) apply_gate_inplace(full, n_total, GateOp::x(q));
    }

    const PrepCircuit prep_t = build_prep_transpose(c);
    for (const auto& g : prep_t.circuit.gates) apply_gate_inplace(full, n_total, g);

    // The synthesized PREP carries a known global phase; PREP and PREP^T each
    // contribute it once to the projected branch. Cancelling it here makes the
    // returned state equal the ideal combination exactly, not just up to phase.
    if (std::abs(prep.global_phase) > 1e-15) {
        apply_gate_inplace(full, n_total, GateOp::gphase(-2.0 * prep.global_phase));
    }

    const double prob = simd::active().norm2(full.data(), dim_w);
    if (prob < 1e-12) {
        throw CancellationError("CLCU post-selection probability " + std::to_string(prob) +
                                " below 1e-12 (destructive cancellation)");
    }
    std::vector<cplx> out(full.begin(), full.begin() + dim_w);
    simd::active().rscale(1.0 / std::sqrt(prob), out.data(), out.size());
    return {Statevector::raw(n_work, std::move(out)), prob};
}

Statevector clcu_apply_analytic(const std::vector<cplx>& alphas,
                                const std::vector<Statevector>& states,
                                double* combination_norm) {
    if (alphas.empty() || alphas.size() != states.size()) {
        throw ShapeError("coefficient/state count mismatch");
    }
    const int n = states[0].n_qubits;
    double mag_sum = 0.0;
    for (std::size_t j = 1; j < states.size(); ++j) {
        if (states[j].n_qubits != n) throw ShapeError("state width mismatch in combination");
    }
    std::vector<cplx> acc(states[0].dim(), cplx{0.0, 0.0});
    const auto& k = simd::active();
    for (std::size_t j = 0; j < states.size(); ++j) {
        mag_sum += std::abs(alphas[j]);
        if (alphas[j] != cplx{0.0, 0.0}) {
            k.axpy(alphas[j], states[j].amps.data(), acc.data(), acc.size());
        }
    }
    const double nrm = std::sqrt(k.norm2(acc.data(), acc.size()));
    if (nrm <= 1e-12 * std::max(1.0, mag_sum)) {
        throw CancellationError("complex combination cancelled to numerical zero");
    }
    if (combination_norm) *combination_norm = nrm;
    k.rscale(1.0 / nrm, acc.data(), acc.size());
    return Statevector::raw(n, std::move(acc));
}

BlockEncodeResult block_encode_weights(const std::vector<cplx>& weights) {
    const WeightEncoding enc = WeightEncoding::make(weights);
    const int m = enc.n_work;
    const int n_total = m + 1; // flag qubit on top
    if (n_total > kMaxQubits) throw SizeError("block encoding exceeds dense-simulation guard");

    Statevector full = zero_state(n_total);
    for (int q = 1; q <= m; ++q) apply_gate_inplace(full.amps, n_total, GateOp::h(q));

    std::vector<int> work(m);
    for (int i = 0; i < m; ++i) work[i] = i + 1;

    std::vector<GateOp> gates;
    std::vector<double> ry_angles(weights.size()), rz_angles(weights.size());
    for (std::size_t j = 0; j < weights.size(); ++j) {
        ry_angles[j] = 2.0 * enc.thetas[j];
        rz_angles[j] = -2.0 * enc.phis[j]; // e^{+i phi_j} lands on the flag-|0> branch
    }
    emit_uniformly_controlled(GateKind::Ry, 0, work, std::move(ry_angles), gates);
    emit_uniformly_controlled(GateKind::Rz, 0, work, std::move(rz_angles), gates);
    for (const auto& g : gates) apply_gate_inplace(full.amps, n_total, g);

    auto [state, prob] = take_low_register(full, 1);
    return {std::move(state), prob, enc.scale};
}

} // namespace qcsam::clcu
