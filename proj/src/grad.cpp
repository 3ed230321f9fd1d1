#include "qcsam/grad.hpp"

#include <cmath>
#include <exception>
#include <thread>

#include "qcsam/clcu.hpp"
#include "qcsam/simd.hpp"

namespace qcsam::train {

namespace {

using model::ModelParams;
using model::ModelSpec;
using model::Sample;

cplx vdot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return simd::active().dot(a.data(), b.data(), a.size());
}

void vaxpy(cplx alpha, const std::vector<cplx>& x, std::vector<cplx>& y) {
    simd::active().axpy(alpha, x.data(), y.data(), y.size());
}

// VJP of psi' = u / ||u||, expressed through the normalized output:
// c_u = (c' - psi' * Re<c', psi'>) / ||u||.
std::vector<cplx> normalize_backward(const std::vector<cplx>& cot,
                                     const std::vector<cplx>& normalized, double norm) {
    std::vector<cplx> out = cot;
    const double radial = vdot(cot, normalized).real();
    simd::active().axpy(cplx{-radial, 0.0}, normalized.data(), out.data(), out.size());
    simd::active().rscale(1.0 / norm, out.data(), out.size());
    return out;
}

// gen = G * state for the rotation generator of g (X, Y, Z or Z x Z).
void apply_generator(const GateOp& g, const std::vector<cplx>& in, std::vector<cplx>& gen,
                     int n_qubits) {
    const std::size_t N = in.size();
    switch (g.kind) {
        case GateKind::Rx: {
            const std::uint64_t m = qubit_mask(n_qubits, g.targets[0]);
            for (std::size_t i = 0; i < N; ++i) gen[i ^ m] = in[i];
            break;
        }
        case GateKind::Ry: {
            const std::uint64_t m = qubit_mask(n_qubits, g.targets[0]);
            for (std::size_t i = 0; i < N; ++i) {
                gen[i ^ m] = (i & m) ? cplx{0.0, -1.0} * in[i] : cplx{0.0, 1.0} * in[i];
            }
            break;
        }
        case GateKind::Rz: {
            const std::uint64_t m = qubit_mask(n_qubits, g.targets[0]);
            for (std::size_t i = 0; i < N; ++i) gen[i] = (i & m) ? -in[i] : in[i];
            break;
        }
        case GateKind::ZZ: {
            const std::uint64_t ma = qubit_mask(n_qubits, g.targets[0]);
            const std::uint64_t mb = qubit_mask(n_qubits, g.targets[1]);
            for (std::size_t i = 0; i < N; ++i) {
                const bool eq = ((i & ma) != 0) == ((i & mb) != 0);
                gen[i] = eq ? in[i] : -in[i];
            }
            break;
        }
        default:
            throw DomainError("no rotation generator for this gate kind");
    }
}

} // namespace

void circuit_backward(const ParamCircuit& circ, std::span<const double> data,
                      std::span<const double> params, int n_qubits, std::vector<cplx>& state,
                      std::vector<cplx>& lambda, std::span<double> grad_train) {
    std::vector<cplx> gen(state.size());
    for (auto it = circ.ops.rbegin(); it != circ.ops.rend(); ++it) {
        GateOp g = it->gate;
        if (it->family == SlotFamily::Data) g.angle = data[it->slot];
        if (it->family == SlotFamily::Train) {
            g.angle = params[it->slot];
            apply_generator(g, state, gen, n_qubits);
            grad_train[it->slot] += vdot(lambda, gen).imag();
        }
        const GateOp gd = dagger(g);
        apply_gate_inplace(state, n_qubits, gd);
        apply_gate_inplace(lambda, n_qubits, gd);
    }
}

namespace {

struct HeadTape {
    std::vector<Statevector> qs, ks, vs;
    std::vector<cplx> w;      // raw complex weights <K_j|Q_k>, row-major by k
    std::vector<cplx> coeff;  // coefficients used in the combination
    std::vector<Statevector> s;
    std::vector<double> s_norm;
    Statevector g;
    double g_norm = 0.0;
};

struct Tape {
    std::vector<HeadTape> heads;
    Statevector mh;
    double mh_norm = 0.0;
    Statevector out;
    std::vector<PauliString> ops;
    std::vector<double> expect;
    model::ClassDistribution probs;
    double loss = 0.0;
};

Tape forward_tape(const Sample& sample, const ModelSpec& spec, const ModelParams& params) {
    Tape t;
    std::vector<Statevector> gs;
    for (std::size_t h = 0; h < spec.heads.size(); ++h) {
        const auto& hs = spec.heads[h];
        const auto& hp = params.heads[h];
        HeadTape ht;
        ht.qs = model::encode_patches(sample.head_features[h], hp.qfm_q, hs.qfm);
        ht.ks = model::encode_patches(sample.head_features[h], hp.qfm_k, hs.qfm);
        ht.vs = model::encode_patches(sample.head_features[h], hp.qfm_v, hs.qfm);
        const int m = hs.n_patches();
        ht.w.resize(static_cast<std::size_t>(m) * m);
        ht.coeff.resize(ht.w.size());
        for (int k = 0; k < m; ++k) {
            for (int j = 0; j < m; ++j) {
                const cplx w = inner_product(ht.ks[j], ht.qs[k]);
                ht.w[static_cast<std::size_t>(k) * m + j] = w;
                ht.coeff[static_cast<std::size_t>(k) * m + j] =
                    spec.mode == model::AttentionMode::Complex ? w : cplx{std::norm(w), 0.0};
            }
        }
        ht.s.reserve(m);
        ht.s_norm.resize(m);
        for (int k = 0; k < m; ++k) {
            std::vector<cplx> row(ht.coeff.begin() + static_cast<std::size_t>(k) * m,
                                  ht.coeff.begin() + static_cast<std::size_t>(k + 1) * m);
            double nrm = 0.0;
            ht.s.push_back(clcu::clcu_apply_analytic(row, ht.vs, &nrm));
            ht.s_norm[k] = nrm;
        }
        ht.g = clcu::clcu_apply_analytic(hp.beta, ht.s, &ht.g_norm);
        gs.push_back(ht.g);
        t.heads.push_back(std::move(ht));
    }
    t.mh = clcu::clcu_apply_analytic(params.gamma, gs, &t.mh_norm);

    const ParamCircuit qffn = build_qffn(spec.qffn);
    t.out = run(qffn.bind({}, params.qffn), t.mh);
    t.ops = model::measurement_ops(spec.n_classes, spec.qffn.n_qubits);
    t.expect.resize(t.ops.size());
    double denom = 0.0;
    for (std::size_t k = 0; k < t.ops.size(); ++k) {
        t.expect[k] = expectation(t.out, t.ops[k]);
        denom += 1.0 + t.expect[k];
    }
    if (denom <= 1e-9) throw DegenerateError("readout denominator vanished");
    t.probs.probs.resize(t.ops.size());
    for (std::size_t k = 0; k < t.ops.size(); ++k) t.probs.probs[k] = (1.0 + t.expect[k]) / denom;
    t.loss = model::cross_entropy(t.probs, sample.label);
    return t;
}

// Offsets of each block inside the canonical flattening.
struct Layout {
    struct Head {
        std::size_t q, k, v, beta;
        std::size_t n_train;
    };
    std::vector<Head> heads;
    std::size_t gamma = 0;
    std::size_t qffn = 0;
};

Layout layout_of(const ModelSpec& spec) {
    Layout l;
    std::size_t i = 0;
    for (const auto& hs : spec.heads) {
        Layout::Head h;
        h.n_train = static_cast<std::size_t>(hs.qfm.n_layers) * (2 * hs.qfm.n_qubits - 1);
        h.q = i;
        i += h.n_train;
        h.k = i;
        i += h.n_train;
        h.v = i;
        i += h.n_train;
        h.beta = i;
        i += 2 * static_cast<std::size_t>(hs.n_patches());
        l.heads.push_back(h);
    }
    l.gamma = i;
    i += 2 * spec.heads.size();
    l.qffn = i;
    return l;
}

} // namespace

double loss_and_grad_sample(const Sample& sample, const ModelSpec& spec,
                            const ModelParams& params, std::span<double> grad) {
    const Tape t = forward_tape(sample, spec, params);
    const Layout lay = layout_of(spec);

    // Loss -> class probabilities -> expectation values.
    const std::size_t C = t.probs.probs.size();
    std::vector<double> g_probs(C, 0.0);
    if (t.probs.probs[sample.label] > 1e-12) {
        g_probs[sample.label] = -1.0 / t.probs.probs[sample.label];
    }
    double denom = 0.0;
    for (double e : t.expect) denom += 1.0 + e;
    double dot_py = 0.0;
    for (std::size_t k = 0; k < C; ++k) dot_py += g_probs[k] * t.probs.probs[k];
    std::vector<double> g_e(C);
    for (std::size_t k = 0; k < C; ++k) g_e[k] = (g_probs[k] - dot_py) / denom;

    // Expectations -> cotangent of the post-QFFN state.
    std::vector<cplx> c_out(t.out.dim(), cplx{0.0, 0.0});
    std::vector<cplx> scratch;
    for (std::size_t k = 0; k < C; ++k) {
        pauli_apply_inplace(t.ops[k], t.out.amps, scratch, t.out.n_qubits);
        vaxpy(cplx{g_e[k] * t.ops[k].sign, 0.0}, scratch, c_out);
    }

    // QFFN backward.
    const ParamCircuit qffn = build_qffn(spec.qffn);
    std::vector<cplx> state = t.out.amps;
    std::vector<cplx> lambda = std::move(c_out);
    circuit_backward(qffn, {}, params.qffn, spec.qffn.n_qubits, state, lambda,
                     grad.subspan(lay.qffn, params.qffn.size()));

    // Multi-head combination backward.
    std::vector<cplx> c_mh_comb = normalize_backward(lambda, t.mh.amps, t.mh_norm);
    for (std::size_t h = 0; h < spec.heads.size(); ++h) {
        const cplx cg = vdot(t.heads[h].g.amps, c_mh_comb);
        grad[lay.gamma + 2 * h] += 2.0 * cg.real();
        grad[lay.gamma + 2 * h + 1] += 2.0 * cg.imag();
    }

    for (std::size_t h = 0; h < spec.heads.size(); ++h) {
        const auto& hs = spec.heads[h];
        const auto& hp = params.heads[h];
        const HeadTape& ht = t.heads[h];
        const int m = hs.n_patches();
        const std::size_t dim = ht.g.dim();

        // c_G = conj(gamma_h) * c_mh_comb, then through the G normalization.
        std::vector<cplx> c_g(dim, cplx{0.0, 0.0});
        vaxpy(std::conj(params.gamma[h]), c_mh_comb, c_g);
        std::vector<cplx> c_g_comb = normalize_backward(c_g, ht.g.amps, ht.g_norm);

        // beta and S cotangents.
        std::vector<std::vector<cplx>> c_s(m, std::vector<cplx>(dim, cplx{0.0, 0.0}));
        for (int k = 0; k < m; ++k) {
            const cplx cb = vdot(ht.s[k].amps, c_g_comb);
            grad[lay.heads[h].beta + 2 * k] += 2.0 * cb.real();
            grad[lay.heads[h].beta + 2 * k + 1] += 2.0 * cb.imag();
            vaxpy(std::conj(hp.beta[k]), c_g_comb, c_s[k]);
        }

        // Through each S_k normalization into coefficient and value cotangents.
        std::vector<std::vector<cplx>> c_q(m, std::vector<cplx>(dim, cplx{0.0, 0.0}));
        std::vector<std::vector<cplx>> c_k(m, std::vector<cplx>(dim, cplx{0.0, 0.0}));
        std::vector<std::vector<cplx>> c_v(m, std::vector<cplx>(dim, cplx{0.0, 0.0}));
        for (int k = 0; k < m; ++k) {
            const std::vector<cplx> c_comb = normalize_backward(c_s[k], ht.s[k].amps, ht.s_norm[k]);
            for (int j = 0; j < m; ++j) {
                const std::size_t kj = static_cast<std::size_t>(k) * m + j;
                cplx c_wkj;
                const cplx ca = vdot(ht.vs[j].amps, c_comb); // coefficient cotangent
                vaxpy(std::conj(ht.coeff[kj]), c_comb, c_v[j]);
                if (spec.mode == model::AttentionMode::Complex) {
                    c_wkj = ca;
                } else {
                    // a = |w|^2 used as a (real) coefficient: dL/da = 2 Re(ca).
                    c_wkj = 2.0 * ca.real() * ht.w[kj];
                }
                // w = <K_j|Q_k>: c_Q += c_w K_j, c_K += conj(c_w) Q_k.
                vaxpy(c_wkj, ht.ks[j].amps, c_q[k]);
                vaxpy(std::conj(c_wkj), ht.qs[k].amps, c_k[j]);
            }
        }

        // QFM adjoints, accumulating into the shared role parameters.
        const ParamCircuit qfm = build_qfm(hs.qfm);
        auto back_role = [&](const std::vector<Statevector>& states,
                             std::vector<std::vector<cplx>>& cots,
                             std::span<const double> role_params, std::size_t off) {
            for (int j = 0; j < m; ++j) {
                std::vector<cplx> st = states[j].amps;
                circuit_backward(qfm, sample.head_features[h][j], role_params, hs.qfm.n_qubits,
                                 st, cots[j], grad.subspan(off, role_params.size()));
            }
        };
        back_role(ht.qs, c_q, hp.qfm_q, lay.heads[h].q);
        back_role(ht.ks, c_k, hp.qfm_k, lay.heads[h].k);
        back_role(ht.vs, c_v, hp.qfm_v, lay.heads[h].v);
    }

    return t.loss;
}

double batch_loss(std::span<const Sample> batch, const ModelSpec& spec,
                  const ModelParams& params) {
    double acc = 0.0;
    for (const auto& s : batch) acc += forward_tape(s, spec, params).loss;
    return acc / static_cast<double>(batch.size());
}

std::pair<double, std::vector<double>> loss_and_grad(std::span<const Sample> batch,
                                                     const ModelSpec& spec,
                                                     const ModelParams& params, int n_threads) {
    if (batch.empty()) throw ShapeError("empty batch");
    const std::size_t P = model::param_count(spec);
    const std::size_t B = batch.size();

    std::vector<double> losses(B, 0.0);
    std::vector<std::vector<double>> grads(B);
    std::vector<std::exception_ptr> errors(B);

    const int T = std::max(1, std::min<int>(n_threads, static_cast<int>(B)));
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                grads[i].assign(P, 0.0);
                losses[i] = loss_and_grad_sample(batch[i], spec, params, grads[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (T == 1) {
        worker(0, B);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (B + T - 1) / T;
        for (int t = 0; t < T; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(B, b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < B; ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const CancellationError& e) {
                throw CancellationError("sample " + std::to_string(i) + ": " + e.what());
            } catch (const DegenerateError& e) {
                throw DegenerateError("sample " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    // Sample-order reduction keeps results independent of the thread count.
    double loss = 0.0;
    std::vector<double> grad(P, 0.0);
    for (std::size_t i = 0; i < B; ++i) {
        loss += losses[i];
        for (std::size_t p = 0; p < P; ++p) grad[p] += grads[i][p];
    }
    const double inv = 1.0 / static_cast<double>(B);
    loss *= inv;
    for (double& gchan : grad) gchan *= inv;
    return {loss, std::move(grad)};
}

std::vector<double> finite_diff_grad(std::span<const Sample> batch, const ModelSpec& spec,
                                     const ModelParams& params, double step) {
    std::vector<double> flat = model::flatten(spec, params);
    std::vector<double> grad(flat.size());
    for (std::size_t p = 0; p < flat.size(); ++p) {
        const double keep = flat[p];
        flat[p] = keep + step;
        const double up = batch_loss(batch, spec, model::unflatten(spec, flat));
        flat[p] = keep - step;
        const double dn = batch_loss(batch, spec, model::unflatten(spec, flat));
        flat[p] = keep;
        grad[p] = (up - dn) / (2.0 * step);
    }
    return grad;
}

} // namespace qcsam::train
