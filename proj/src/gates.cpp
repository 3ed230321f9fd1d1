#include "qcsam/gates.hpp"

#include <algorithm>
#include <cmath>

#include "qcsam/simd.hpp"

namespace qcsam {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

int expected_targets(GateKind k) {
    switch (k) {
        case GateKind::ZZ:
        case GateKind::CNOT: return 2;
        case GateKind::GPhase: return 0;
        default: return 1;
    }
}

bool is_diagonal(GateKind k) {
    return k == GateKind::S || k == GateKind::Sdg || k == GateKind::Rz ||
           k == GateKind::ZZ || k == GateKind::GPhase;
}

} // namespace

bool is_rotation(GateKind k) {
    return k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz || k == GateKind::ZZ;
}

const char* kind_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "Sdg";
        case GateKind::Rx: return "Rx";
        case GateKind::Ry: return "Ry";
        case GateKind::Rz: return "Rz";
        case GateKind::ZZ: return "ZZ";
        case GateKind::CNOT: return "CNOT";
        case GateKind::GPhase: return "GPhase";
    }
    return "?";
}

void validate_gate(const GateOp& g, int n_qubits) {
    if (static_cast<int>(g.targets.size()) != expected_targets(g.kind)) {
        throw DomainError(std::string("gate ") + kind_name(g.kind) + " has wrong target count");
    }
    std::vector<int> seen;
    auto check = [&](int q) {
        if (q < 0 || q >= n_qubits) {
            throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                             std::to_string(n_qubits) + " qubits");
        }
        if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
            throw IndexError("duplicate qubit index in gate");
        }
        seen.push_back(q);
    };
    for (int q : g.targets) check(q);
    for (int q : g.controls) check(q);
}

std::array<cplx, 4> gate_matrix(GateKind k, double angle) {
    const double h = 0.5 * angle;
    switch (k) {
        case GateKind::H:
            return {cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0}, cplx{-kInvSqrt2, 0}};
        case GateKind::X:
            return {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
        case GateKind::S:
            return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 1}};
        case GateKind::Sdg:
            return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, -1}};
        case GateKind::Rx:
            return {cplx{std::cos(h), 0}, cplx{0, -std::sin(h)},
                    cplx{0, -std::sin(h)}, cplx{std::cos(h), 0}};
        case GateKind::Ry:
            return {cplx{std::cos(h), 0}, cplx{-std::sin(h), 0},
                    cplx{std::sin(h), 0}, cplx{std::cos(h), 0}};
        case GateKind::Rz:
            return {std::polar(1.0, -h), cplx{0, 0}, cplx{0, 0}, std::polar(1.0, h)};
        default:
            throw DomainError(std::string("no 2x2 matrix for gate ") + kind_name(k));
    }
}

namespace {

// Uncontrolled single-qubit dense 2x2, strided over the amplitude array.
void apply_mat2(std::vector<cplx>& amps, int n, int qubit, const std::array<cplx, 4>& u) {
    const std::size_t s = qubit_mask(n, qubit);
    const std::size_t N = amps.size();
    if (s >= 2) {
        const auto& k = simd::active();
        for (std::size_t base = 0; base < N; base += 2 * s) {
            k.mat2(u.data(), amps.data() + base, amps.data() + base + s, s);
        }
    } else {
        for (std::size_t i = 0; i < N; i += 2) {
            const cplx a = amps[i], b = amps[i + 1];
            amps[i] = u[0] * a + u[1] * b;
            amps[i + 1] = u[2] * a + u[3] * b;
        }
    }
}

// Uncontrolled single-qubit diagonal diag(d0, d1).
void apply_diag(std::vector<cplx>& amps, int n, int qubit, cplx d0, cplx d1) {
    const std::size_t s = qubit_mask(n, qubit);
    const std::size_t N = amps.size();
    if (s >= 2) {
        const auto& k = simd::active();
        for (std::size_t base = 0; base < N; base += 2 * s) {
            k.cscale(d0, amps.data() + base, s);
            k.cscale(d1, amps.data() + base + s, s);
        }
    } else {
        for (std::size_t i = 0; i < N; i += 2) {
            amps[i] *= d0;
            amps[i + 1] *= d1;
        }
    }
}

std::uint64_t control_mask(const GateOp& g, int n) {
    std::uint64_t m = 0;
    for (int q : g.controls) m |= qubit_mask(n, q);
    return m;
}

} // namespace

void apply_gate_inplace(std::vector<cplx>& amps, int n_qubits, const GateOp& g) {
    validate_gate(g, n_qubits);
    const std::size_t N = amps.size();
    const std::uint64_t cmask = control_mask(g, n_qubits);

    if (g.kind == GateKind::GPhase) {
        const cplx ph = std::polar(1.0, g.angle);
        if (cmask == 0) {
            simd::active().cscale(ph, amps.data(), N);
        } else {
            for (std::size_t i = 0; i < N; ++i) {
                if ((i & cmask) == cmask) amps[i] *= ph;
            }
        }
        return;
    }

    if (g.kind == GateKind::ZZ) {
        const cplx same = std::polar(1.0, -0.5 * g.angle);
        const cplx diff = std::polar(1.0, +0.5 * g.angle);
        const std::uint64_t ma = qubit_mask(n_qubits, g.targets[0]);
        const std::uint64_t mb = qubit_mask(n_qubits, g.targets[1]);
        if (cmask == 0) {
            const std::size_t run = std::min(ma, mb);
            const auto& k = simd::active();
            for (std::size_t i = 0; i < N; i += run) {
                const bool eq = ((i & ma) != 0) == ((i & mb) != 0);
                k.cscale(eq ? same : diff, amps.data() + i, run);
            }
        } else {
            for (std::size_t i = 0; i < N; ++i) {
                if ((i & cmask) != cmask) continue;
                const bool eq = ((i & ma) != 0) == ((i & mb) != 0);
                amps[i] *= eq ? same : diff;
            }
        }
        return;
    }

    if (g.kind == GateKind::CNOT) {
        const std::uint64_t mc = qubit_mask(n_qubits, g.targets[0]);
        const std::uint64_t mt = qubit_mask(n_qubits, g.targets[1]);
        const std::uint64_t need = mc | cmask;
        for (std::size_t i = 0; i < N; ++i) {
            if ((i & need) == need && (i & mt) == 0) std::swap(amps[i], amps[i | mt]);
        }
        return;
    }

    // Single-qubit kinds.
    const int q = g.targets[0];
    if (cmask == 0) {
        if (is_diagonal(g.kind)) {
            const auto u = gate_matrix(g.kind, g.angle);
            apply_diag(amps, n_qubits, q, u[0], u[3]);
        } else {
            apply_mat2(amps, n_qubits, q, gate_matrix(g.kind, g.angle));
        }
        return;
    }

    const auto u = gate_matrix(g.kind, g.angle);
    const std::uint64_t mt = qubit_mask(n_qubits, q);
    if (is_diagonal(g.kind)) {
        for (std::size_t i = 0; i < N; ++i) {
            if ((i & cmask) == cmask) amps[i] *= (i & mt) ? u[3] : u[0];
        }
    } else {
        for (std::size_t i = 0; i < N; ++i) {
            if ((i & cmask) == cmask && (i & mt) == 0) {
                const cplx a = amps[i], b = amps[i | mt];
                amps[i] = u[0] * a + u[1] * b;
                amps[i | mt] = u[2] * a + u[3] * b;
            }
        }
    }
}

Statevector apply_gate(const Statevector& state, const GateOp& g) {
    Statevector out = state;
    apply_gate_inplace(out.amps, out.n_qubits, g);
    return out;
}

GateOp dagger(const GateOp& g) {
    GateOp d = g;
    switch (g.kind) {
        case GateKind::S: d.kind = GateKind::Sdg; break;
        case GateKind::Sdg: d.kind = GateKind::S; break;
        case GateKind::Rx:
        case GateKind::Ry:
        case GateKind::Rz:
        case GateKind::ZZ:
        case GateKind::GPhase: d.angle = -g.angle; break;
        default: break; // H, X, CNOT are involutions
    }
    return d;
}

GateOp transpose(const GateOp& g) {
    GateOp t = g;
    // Diagonals and symmetric matrices transpose to themselves; Ry is the
    // only kind whose matrix is antisymmetric in the off-diagonal.
    if (g.kind == GateKind::Ry) t.angle = -g.angle;
    return t;
}

std::vector<GateOp> dagger_circuit(const std::vector<GateOp>& gates) {
    std::vector<GateOp> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.push_back(dagger(*it));
    return out;
}

std::vector<GateOp> transpose_circuit(const std::vector<GateOp>& gates) {
    std::vector<GateOp> out;
    out.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.push_back(transpose(*it));
    return out;
}

GateOp controlled_on(GateOp g, const std::vector<int>& extra_controls) {
    g.controls.insert(g.controls.end(), extra_controls.begin(), extra_controls.end());
    return g;
}

GateOp shift_qubits(GateOp g, int offset) {
    for (int& q : g.targets) q += offset;
    for (int& q : g.controls) q += offset;
    return g;
}

} // namespace qcsam
