#include "qcsam/model.hpp"

#include <cmath>

#include "qcsam/clcu.hpp"
#include "qcsam/similarity.hpp"

namespace qcsam::model {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

} // namespace

void ModelSpec::validate() const {
    if (heads.empty()) throw ConfigError("model needs at least one head");
    for (const auto& h : heads) {
        if (h.grid_rows < 1 || h.grid_cols < 1) throw ConfigError("invalid patch grid");
        if (h.qfm.n_qubits != qffn.n_qubits) {
            throw ConfigError("head QFM width must match the QFFN width");
        }
        if (h.qfm.n_layers < 1) throw ConfigError("QFM layer count must be >= 1");
    }
    if (qffn.n_layers < 1) throw ConfigError("QFFN layer count must be >= 1");
    if (n_classes < 2 || n_classes > 4) throw ConfigError("class count must be 2, 3 or 4");
    if (qffn.n_qubits < 2) throw ConfigError("readout needs at least 2 qubits");
}

std::vector<Statevector> encode_patches(const std::vector<std::vector<double>>& features,
                                        std::span<const double> role_params,
                                        const QfmSpec& qfm) {
    const ParamCircuit circ = build_qfm(qfm);
    const Statevector zero = zero_state(qfm.n_qubits);
    std::vector<Statevector> out;
    out.reserve(features.size());
    for (const auto& x : features) {
        if (static_cast<int>(x.size()) != qfm.n_qubits) {
            throw DomainError("patch feature length does not match qubit count");
        }
        for (double v : x) {
            if (!(v >= 0.0 && v <= kPi)) {
                throw DomainError("patch feature outside [0, pi]");
            }
        }
        out.push_back(bind_and_run(circ, x, role_params, zero));
    }
    return out;
}

AttentionMatrix attention_matrix(const std::vector<Statevector>& qs,
                                 const std::vector<Statevector>& ks,
                                 AttentionMode mode) {
    if (qs.size() != ks.size() || qs.empty()) {
        throw ShapeError("query/key counts differ or are empty");
    }
    const int m = static_cast<int>(qs.size());
    AttentionMatrix a;
    a.m = m;
    a.entries.resize(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < m; ++j) {
            const cplx w = inner_product(ks[j], qs[k]);
            a.at(k, j) = (mode == AttentionMode::Complex) ? w : cplx{std::norm(w), 0.0};
        }
    }
    return a;
}

AttentionMatrix attention_matrix_circuit(const std::vector<BoundCircuit>& q_circs,
                                         const std::vector<BoundCircuit>& k_circs,
                                         AttentionMode mode) {
    if (q_circs.size() != k_circs.size() || q_circs.empty()) {
        throw ShapeError("query/key circuit counts differ or are empty");
    }
    const int m = static_cast<int>(q_circs.size());
    AttentionMatrix a;
    a.m = m;
    a.entries.resize(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < m; ++j) {
            const auto r = similarity::hadamard_test(q_circs[k], k_circs[j]);
            const cplx w = similarity::weight_from_readout(r).value;
            a.at(k, j) = (mode == AttentionMode::Complex) ? w : cplx{std::norm(w), 0.0};
        }
    }
    return a;
}

Statevector attention_output(const AttentionMatrix& a, const std::vector<Statevector>& vs,
                             const std::vector<cplx>& beta) {
    if (static_cast<int>(vs.size()) != a.m || beta.size() != vs.size()) {
        throw ShapeError("attention output shape mismatch");
    }
    std::vector<Statevector> s;
    s.reserve(a.m);
    for (int k = 0; k < a.m; ++k) {
        std::vector<cplx> row(a.entries.begin() + static_cast<std::size_t>(k) * a.m,
                              a.entries.begin() + static_cast<std::size_t>(k + 1) * a.m);
        s.push_back(clcu::clcu_apply_analytic(row, vs));
    }
    return clcu::clcu_apply_analytic(beta, s);
}

Statevector multi_head_combine(const std::vector<Statevector>& gs,
                               const std::vector<cplx>& gamma) {
    if (gs.empty() || gs.size() != gamma.size()) {
        throw ShapeError("head count does not match gamma length");
    }
    return clcu::clcu_apply_analytic(gamma, gs);
}

std::vector<PauliString> measurement_ops(int n_classes, int n_qubits) {
    if (n_classes < 2 || n_classes > 4) {
        throw ConfigError("readout supports 2-4 classes, got " + std::to_string(n_classes));
    }
    if (n_qubits < 2) throw ConfigError("readout needs at least 2 qubits");
    std::vector<PauliString> ms;
    switch (n_classes) {
        case 2:
            ms.push_back(PauliString::single(n_qubits, 0, PauliFactor::Z, +1));
            ms.push_back(PauliString::single(n_qubits, 0, PauliFactor::Z, -1));
            break;
        case 3:
            ms.push_back(PauliString::single(n_qubits, 0, PauliFactor::X));
            ms.push_back(PauliString::single(n_qubits, 0, PauliFactor::Y));
            ms.push_back(PauliString::single(n_qubits, 0, PauliFactor::Z));
            break;
        case 4: {
            auto two = [n_qubits](PauliFactor f0, PauliFactor f1) {
                PauliString p;
                p.n_qubits = n_qubits;
                p.factors.assign(n_qubits, PauliFactor::I);
                p.factors[0] = f0;
                p.factors[1] = f1;
                return p;
            };
            ms.push_back(two(PauliFactor::X, PauliFactor::X));
            ms.push_back(two(PauliFactor::Y, PauliFactor::X));
            ms.push_back(two(PauliFactor::Z, PauliFactor::X));
            ms.push_back(two(PauliFactor::X, PauliFactor::Y));
            break;
        }
    }
    return ms;
}

ClassDistribution class_probs(const Statevector& psi, const std::vector<PauliString>& ms) {
    std::vector<double> e(ms.size());
    double denom = 0.0;
    for (std::size_t k = 0; k < ms.size(); ++k) {
        e[k] = expectation(psi, ms[k]);
        denom += 1.0 + e[k];
    }
    if (denom <= 1e-9) {
        throw DegenerateError("readout denominator vanished (sum of 1+<M_k> <= 1e-9)");
    }
    ClassDistribution d;
    d.probs.resize(ms.size());
    for (std::size_t k = 0; k < ms.size(); ++k) d.probs[k] = (1.0 + e[k]) / denom;
    return d;
}

double cross_entropy(const ClassDistribution& yhat, int label) {
    if (label < 0 || label >= static_cast<int>(yhat.probs.size())) {
        throw IndexError("label out of range");
    }
    return -std::log(std::max(yhat.probs[label], 1e-12));
}

ForwardResult forward(const Sample& sample, const ModelSpec& spec, const ModelParams& params) {
    spec.validate();
    if (sample.head_features.size() != spec.heads.size() ||
        params.heads.size() != spec.heads.size()) {
        throw ShapeError("sample/params head count does not match the model configuration");
    }
    std::vector<Statevector> gs;
    gs.reserve(spec.heads.size());
    for (std::size_t h = 0; h < spec.heads.size(); ++h) {
        const auto& hs = spec.heads[h];
        const auto& hp = params.heads[h];
        const auto& feats = sample.head_features[h];
        if (static_cast<int>(feats.size()) != hs.n_patches()) {
            throw ShapeError("patch count does not match the head grid");
        }
        const auto qs = encode_patches(feats, hp.qfm_q, hs.qfm);
        const auto ks = encode_patches(feats, hp.qfm_k, hs.qfm);
        const auto vs = encode_patches(feats, hp.qfm_v, hs.qfm);
        const AttentionMatrix a = attention_matrix(qs, ks, spec.mode);
        gs.push_back(attention_output(a, vs, hp.beta));
    }
    const Statevector mh = multi_head_combine(gs, params.gamma);
    const ParamCircuit qffn = build_qffn(spec.qffn);
    const Statevector out = run(qffn.bind({}, params.qffn), mh);
    ForwardResult r;
    r.probs = class_probs(out, measurement_ops(spec.n_classes, spec.qffn.n_qubits));
    r.final_state = out;
    return r;
}

ForwardResult forward_circuit(const Sample& sample, const ModelSpec& spec,
                              const ModelParams& params) {
    spec.validate();
    const int n = spec.n_qubits();
    const Statevector zero = zero_state(n);
    std::vector<Statevector> gs;
    gs.reserve(spec.heads.size());
    for (std::size_t h = 0; h < spec.heads.size(); ++h) {
        const auto& hs = spec.heads[h];
        const auto& hp = params.heads[h];
        const auto& feats = sample.head_features[h];
        const ParamCircuit qfm = build_qfm(hs.qfm);
        std::vector<BoundCircuit> q_circs, k_circs, v_circs;
        for (const auto& x : feats) {
            q_circs.push_back(qfm.bind(x, hp.qfm_q));
            k_circs.push_back(qfm.bind(x, hp.qfm_k));
            v_circs.push_back(qfm.bind(x, hp.qfm_v));
        }
        const AttentionMatrix a = attention_matrix_circuit(q_circs, k_circs, spec.mode);

        // S_k from a CLCU over the value circuits, then the trainable
        // combination over synthesized |S_k> preparations.
        std::vector<BoundCircuit> s_preps;
        for (int k = 0; k < a.m; ++k) {
            std::vector<cplx> row(a.entries.begin() + static_cast<std::size_t>(k) * a.m,
                                  a.entries.begin() + static_cast<std::size_t>(k + 1) * a.m);
            const auto sk = clcu::clcu_apply_circuit(clcu::ClcuCoefficients::make(row),
                                                     v_circs, zero);
            s_preps.push_back(clcu::state_prep_exact(sk.state.amps));
        }
        const auto g = clcu::clcu_apply_circuit(clcu::ClcuCoefficients::make(hp.beta),
                                                s_preps, zero);
        gs.push_back(g.state);
    }

    std::vector<BoundCircuit> g_preps;
    for (const auto& g : gs) g_preps.push_back(clcu::state_prep_exact(g.amps));
    const auto mh = clcu::clcu_apply_circuit(clcu::ClcuCoefficients::make(params.gamma),
                                             g_preps, zero);

    const ParamCircuit qffn = build_qffn(spec.qffn);
    const Statevector out = run(qffn.bind({}, params.qffn), mh.state);
    ForwardResult r;
    r.probs = class_probs(out, measurement_ops(spec.n_classes, spec.qffn.n_qubits));
    r.final_state = out;
    return r;
}

ModelParams init_params(const ModelSpec& spec, Rng& rng) {
    ModelParams p;
    for (const auto& hs : spec.heads) {
        HeadParams hp;
        const int nt = hs.qfm.n_layers * (2 * hs.qfm.n_qubits - 1);
        auto angles = [&rng](int count) {
            std::vector<double> v(count);
            for (double& x : v) x = rng.uniform(-0.1, 0.1);
            return v;
        };
        hp.qfm_q = angles(nt);
        hp.qfm_k = angles(nt);
        hp.qfm_v = angles(nt);
        hp.beta.resize(hs.n_patches());
        for (cplx& b : hp.beta) b = cplx{1.0 + 0.1 * rng.normal(), 0.1 * rng.normal()};
        p.heads.push_back(std::move(hp));
    }
    p.gamma.resize(spec.heads.size());
    for (cplx& g : p.gamma) g = cplx{1.0 + 0.1 * rng.normal(), 0.1 * rng.normal()};
    p.qffn.resize(3 * spec.qffn.n_qubits * spec.qffn.n_layers);
    for (double& x : p.qffn) x = rng.uniform(-0.1, 0.1);
    return p;
}

std::size_t param_count(const ModelSpec& spec) {
    std::size_t n = 0;
    for (const auto& hs : spec.heads) {
        n += 3 * static_cast<std::size_t>(hs.qfm.n_layers) * (2 * hs.qfm.n_qubits - 1);
        n += 2 * static_cast<std::size_t>(hs.n_patches());
    }
    n += 2 * spec.heads.size();
    n += 3 * static_cast<std::size_t>(spec.qffn.n_qubits) * spec.qffn.n_layers;
    return n;
}

std::vector<double> flatten(const ModelSpec& spec, const ModelParams& params) {
    std::vector<double> flat;
    flat.reserve(param_count(spec));
    for (const auto& hp : params.heads) {
        flat.insert(flat.end(), hp.qfm_q.begin(), hp.qfm_q.end());
        flat.insert(flat.end(), hp.qfm_k.begin(), hp.qfm_k.end());
        flat.insert(flat.end(), hp.qfm_v.begin(), hp.qfm_v.end());
        for (const cplx& b : hp.beta) {
            flat.push_back(b.real());
            flat.push_back(b.imag());
        }
    }
    for (const cplx& g : params.gamma) {
        flat.push_back(g.real());
        flat.push_back(g.imag());
    }
    flat.insert(flat.end(), params.qffn.begin(), params.qffn.end());
    if (flat.size() != param_count(spec)) throw ShapeError("parameter flattening mismatch");
    return flat;
}

ModelParams unflatten(const ModelSpec& spec, std::span<const double> flat) {
    if (flat.size() != param_count(spec)) {
        throw ShapeError("flat parameter vector has wrong length");
    }
    ModelParams p;
    std::size_t i = 0;
    for (const auto& hs : spec.heads) {
        HeadParams hp;
        const std::size_t nt =
            static_cast<std::size_t>(hs.qfm.n_layers) * (2 * hs.qfm.n_qubits - 1);
        hp.qfm_q.assign(flat.begin() + i, flat.begin() + i + nt);
        i += nt;
        hp.qfm_k.assign(flat.begin() + i, flat.begin() + i + nt);
        i += nt;
        hp.qfm_v.assign(flat.begin() + i, flat.begin() + i + nt);
        i += nt;
        hp.beta.resize(hs.n_patches());
        for (cplx& b : hp.beta) {
            b = cplx{flat[i], flat[i + 1]};
            i += 2;
        }
        p.heads.push_back(std::move(hp));
    }
    p.gamma.resize(spec.heads.size());
    for (cplx& g : p.gamma) {
        g = cplx{flat[i], flat[i + 1]};
        i += 2;
    }
    const std::size_t nf = 3 * static_cast<std::size_t>(spec.qffn.n_qubits) * spec.qffn.n_layers;
    p.qffn.assign(flat.begin() + i, flat.begin() + i + nf);
    return p;
}

} // namespace qcsam::model
