#include "qcsam/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>

#include "qcsam/clcu.hpp"
#include "qcsam/model.hpp"
#include "qcsam/rng.hpp"
#include "qcsam/similarity.hpp"
#include "qcsam/train.hpp"

namespace qcsam::verify {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

CheckResult run_check(const std::string& name, double time_budget_s,
                      const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    Timer t;
    try {
        const std::string detail = body();
        r.seconds = t.seconds();
        if (time_budget_s > 0.0 && r.seconds > time_budget_s) {
            r.status = Status::Fail;
            r.detail = detail + " [exceeded time budget of " + std::to_string(time_budget_s) +
                       " s]";
        } else {
            r.status = Status::Pass;
            r.detail = detail;
        }
    } catch (const std::exception& e) {
        r.seconds = t.seconds();
        r.status = Status::Fail;
        r.detail = e.what();
    }
    return r;
}

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// Random gate sequence over the library alphabet.
BoundCircuit random_circuit(Rng& rng, int n, int len) {
    BoundCircuit c;
    c.n_qubits = n;
    for (int i = 0; i < len; ++i) {
        const int q = static_cast<int>(rng.below(n));
        const double a = rng.uniform(-kPi, kPi);
        switch (rng.below(n >= 2 ? 8 : 6)) {
            case 0: c.gates.push_back(GateOp::h(q)); break;
            case 1: c.gates.push_back(GateOp::x(q)); break;
            case 2: c.gates.push_back(GateOp::s(q)); break;
            case 3: c.gates.push_back(GateOp::rx(q, a)); break;
            case 4: c.gates.push_back(GateOp::ry(q, a)); break;
            case 5: c.gates.push_back(GateOp::rz(q, a)); break;
            case 6: {
                const int r = (q + 1 + static_cast<int>(rng.below(n - 1))) % n;
                c.gates.push_back(GateOp::zz(q, r, a));
                break;
            }
            default: {
                const int r = (q + 1 + static_cast<int>(rng.below(n - 1))) % n;
                c.gates.push_back(GateOp::cnot(q, r));
                break;
            }
        }
    }
    return c;
}

Statevector random_state(Rng& rng, int n) {
    return run(random_circuit(rng, n, 8), zero_state(n));
}

std::vector<cplx> random_alphas(Rng& rng, int n, bool allow_zero = true) {
    std::vector<cplx> a(n);
    bool any = false;
    for (cplx& v : a) {
        if (allow_zero && rng.uniform() < 0.15) {
            v = cplx{0.0, 0.0};
        } else {
            v = cplx{rng.normal(), rng.normal()};
            any = true;
        }
    }
    if (!any) a[0] = cplx{1.0, 0.0};
    return a;
}

// Materialize the matrix of a circuit by running it on every basis state.
std::vector<std::vector<cplx>> circuit_matrix(const BoundCircuit& c) {
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    std::vector<std::vector<cplx>> cols(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        std::vector<cplx> amps(dim, cplx{0.0, 0.0});
        amps[b] = 1.0;
        run_inplace(c, amps, c.n_qubits);
        cols[b] = std::move(amps);
    }
    return cols; // cols[j][i] = U_{i,j}
}

// Independent dense Pauli expectation via explicit Kronecker products.
double dense_pauli_expectation(const Statevector& psi, const PauliString& p) {
    const std::size_t dim = psi.dim();
    std::vector<cplx> mat(dim * dim, cplx{0.0, 0.0});
    mat[0] = 1.0;
    std::size_t cur = 1;
    const cplx i1{0.0, 1.0};
    for (int q = 0; q < p.n_qubits; ++q) {
        cplx f[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
        switch (p.factors[q]) {
            case PauliFactor::X: f[0][0] = 0; f[0][1] = 1; f[1][0] = 1; f[1][1] = 0; break;
            case PauliFactor::Y: f[0][0] = 0; f[0][1] = -i1; f[1][0] = i1; f[1][1] = 0; break;
            case PauliFactor::Z: f[0][0] = 1; f[0][1] = 0; f[1][0] = 0; f[1][1] = -1; break;
            case PauliFactor::I: break;
        }
        std::vector<cplx> next(dim * dim, cplx{0.0, 0.0});
        const std::size_t nxt = cur * 2;
        for (std::size_t r = 0; r < cur; ++r) {
            for (std::size_t c = 0; c < cur; ++c) {
                const cplx base = mat[r * dim + c];
                if (base == cplx{0.0, 0.0}) continue;
                for (int fr = 0; fr < 2; ++fr) {
                    for (int fc = 0; fc < 2; ++fc) {
                        next[(r * 2 + fr) * dim + (c * 2 + fc)] = base * f[fr][fc];
                    }
                }
            }
        }
        mat = std::move(next);
        cur = nxt;
    }
    cplx acc{0.0, 0.0};
    for (std::size_t r = 0; r < dim; ++r) {
        cplx row{0.0, 0.0};
        for (std::size_t c = 0; c < dim; ++c) row += mat[r * dim + c] * psi.amps[c];
        acc += std::conj(psi.amps[r]) * row;
    }
    return p.sign * acc.real();
}

model::Sample random_sample(Rng& rng, const model::ModelSpec& spec) {
    model::Sample s;
    for (const auto& hs : spec.heads) {
        std::vector<std::vector<double>> feats;
        for (int p = 0; p < hs.n_patches(); ++p) {
            std::vector<double> x(hs.qfm.n_qubits);
            for (double& v : x) v = rng.uniform(0.0, kPi);
            feats.push_back(std::move(x));
        }
        s.head_features.push_back(std::move(feats));
    }
    s.label = static_cast<int>(rng.below(spec.n_classes));
    return s;
}

// ---- criteria 1-7 ----------------------------------------------------------

std::string check_hadamard_oracle() {
    Rng rng(20240811);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const BoundCircuit uq = random_circuit(rng, n, 8);
        const BoundCircuit uk = random_circuit(rng, n, 8);
        const cplx direct = similarity::attention_weight_analytic(uq, uk).value;
        const auto readout = similarity::hadamard_test(uq, uk);
        const cplx rec = similarity::weight_from_readout(readout).value;
        worst = std::max({worst, std::abs(rec.real() - direct.real()),
                          std::abs(rec.imag() - direct.imag())});
        if (worst > 1e-9) {
            fail("recovered weight deviates by " + fmt(worst) + " on trial " +
                 std::to_string(trial));
        }
    }
    return "500 pairs, max component error " + fmt(worst);
}

std::string check_clcu_equivalence() {
    Rng rng(777001);
    const int sizes[] = {2, 4, 8};
    double worst_fid = 0.0, worst_prob = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const int N = sizes[trial % 3];
        const int n_work = 1 + static_cast<int>(rng.below(2));
        const std::vector<cplx> alphas = random_alphas(rng, N);
        std::vector<BoundCircuit> us;
        for (int j = 0; j < N; ++j) us.push_back(random_circuit(rng, n_work, 6));
        const Statevector psi = random_state(rng, n_work);

        const auto c = clcu::ClcuCoefficients::make(alphas);
        const auto circuit_out = clcu::clcu_apply_circuit(c, us, psi);

        std::vector<cplx> acc(psi.dim(), cplx{0.0, 0.0});
        for (int j = 0; j < N; ++j) {
            const Statevector uj = run(us[j], psi);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += alphas[j] * uj.amps[i];
        }
        double omega_prime = 0.0;
        for (const cplx& v : acc) omega_prime += std::norm(v);
        omega_prime = std::sqrt(omega_prime);
        if (omega_prime < 1e-9) continue; // cancellation case, covered in unit tests

        cplx fid{0.0, 0.0};
        for (std::size_t i = 0; i < acc.size(); ++i) {
            fid += std::conj(circuit_out.state.amps[i]) * (acc[i] / omega_prime);
        }
        const double fid_err = std::abs(1.0 - std::abs(fid));
        const double prob_law = std::pow(omega_prime / (c.omega * c.omega), 2.0);
        const double prob_err = std::abs(circuit_out.success_prob - prob_law);
        worst_fid = std::max(worst_fid, fid_err);
        worst_prob = std::max(worst_prob, prob_err);
        if (fid_err > 1e-9) fail("fidelity deficit " + fmt(fid_err));
        if (prob_err > 1e-9) fail("success-probability law violated by " + fmt(prob_err));
    }
    return "300 cases, fidelity deficit <= " + fmt(worst_fid) + ", probability error <= " +
           fmt(worst_prob);
}

std::string check_block_encoding() {
    Rng rng(424242);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(3));
        const std::size_t len = std::size_t{1} << m;
        std::vector<cplx> w(len);
        for (cplx& v : w) v = cplx{rng.normal(), rng.normal()};

        const auto enc = clcu::block_encode_weights(w);

        double wn2 = 0.0;
        for (const cplx& v : w) wn2 += std::norm(v);
        const double wn = std::sqrt(wn2);

        cplx ov{0.0, 0.0};
        for (std::size_t j = 0; j < len; ++j) {
            ov += std::conj(enc.state.amps[j]) * (w[j] / wn);
        }
        const cplx u = ov / std::abs(ov);
        for (std::size_t j = 0; j < len; ++j) {
            worst = std::max(worst, std::abs(enc.state.amps[j] * u - w[j] / wn));
        }
        // success probability is the mean squared scaled magnitude
        double expect_prob = 0.0;
        for (const cplx& v : w) expect_prob += std::norm(v / enc.scale);
        expect_prob /= static_cast<double>(len);
        worst = std::max(worst, std::abs(enc.success_prob - expect_prob));
        if (worst > 1e-9) fail("round-trip error " + fmt(worst));
    }
    return "200 random weight vectors (m <= 3), max error " + fmt(worst);
}

std::string check_prep_unitarity() {
    Rng rng(99100);
    double worst = 0.0;
    for (int N = 2; N <= 8; ++N) {
        for (int rep = 0; rep < 4; ++rep) {
            const auto c = clcu::ClcuCoefficients::make(random_alphas(rng, N));
            const auto prep = clcu::build_prep(c);
            const auto prep_t = clcu::build_prep_transpose(c);
            const auto u = circuit_matrix(prep.circuit);
            const auto ut = circuit_matrix(prep_t.circuit);
            const std::size_t dim = u.size();
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    // unitarity: column inner products
                    cplx dot{0.0, 0.0};
                    for (std::size_t k = 0; k < dim; ++k) dot += std::conj(u[i][k]) * u[j][k];
                    const double want = i == j ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(dot - cplx{want, 0.0}));
                    // gate-level transpose == matrix transpose
                    worst = std::max(worst, std::abs(ut[j][i] - u[i][j]));
                }
            }
            if (worst > 1e-10) fail("prep deviation " + fmt(worst) + " at N=" + std::to_string(N));
        }
    }
    return "N = 2..8, max deviation " + fmt(worst);
}

std::string check_forward_circuit_consistency() {
    Rng rng(31337);
    struct Case {
        int n, rows, cols, heads, classes;
        model::AttentionMode mode = model::AttentionMode::Complex;
    };
    const Case cases[] = {
        {2, 1, 2, 1, 2, model::AttentionMode::Complex},
        {2, 2, 2, 1, 3, model::AttentionMode::Complex},
        {3, 2, 2, 1, 4, model::AttentionMode::Complex},
        {2, 1, 2, 2, 2, model::AttentionMode::Complex},
        {3, 1, 3, 2, 3, model::AttentionMode::Complex},
        {3, 2, 2, 2, 4, model::AttentionMode::Complex},
        {2, 2, 2, 1, 2, model::AttentionMode::RealOverlap},
        {3, 1, 3, 1, 3, model::AttentionMode::RealOverlap},
        {2, 1, 1, 2, 2, model::AttentionMode::Complex}, // single-patch heads
    };
    double worst = 0.0;
    for (const auto& cs : cases) {
        model::ModelSpec spec;
        for (int h = 0; h < cs.heads; ++h) {
            model::HeadSpec hs;
            hs.grid_rows = cs.rows;
            hs.grid_cols = cs.cols;
            hs.qfm = QfmSpec{cs.n, 1};
            spec.heads.push_back(hs);
        }
        spec.qffn = QffnSpec{cs.n, 1};
        spec.n_classes = cs.classes;
        spec.mode = cs.mode;
        for (int rep = 0; rep < 3; ++rep) {
            Rng prng = rng.fork(rep + 17 * cs.n + 131 * cs.heads);
            const model::ModelParams params = model::init_params(spec, prng);
            const model::Sample s = random_sample(prng, spec);
            const auto analytic = model::forward(s, spec, params);
            const auto circuit = model::forward_circuit(s, spec, params);
            for (std::size_t k = 0; k < analytic.probs.probs.size(); ++k) {
                worst = std::max(worst,
                                 std::abs(analytic.probs.probs[k] - circuit.probs.probs[k]));
            }
            if (worst > 1e-6) {
                fail("class distribution deviates by " + fmt(worst));
            }
        }
    }
    return "9 model shapes x 3 draws, max probability deviation " + fmt(worst);
}

std::string check_gradients() {
    Rng rng(5150);
    model::ModelSpec spec;
    model::HeadSpec hs;
    hs.grid_rows = 1;
    hs.grid_cols = 2;
    hs.qfm = QfmSpec{2, 1};
    spec.heads.push_back(hs);
    spec.qffn = QffnSpec{2, 1};
    spec.n_classes = 2;

    const model::ModelParams params = model::init_params(spec, rng);
    std::vector<model::Sample> batch;
    for (int i = 0; i < 4; ++i) batch.push_back(random_sample(rng, spec));

    const auto [loss, grad] = train::loss_and_grad(batch, spec, params, 1);
    (void)loss;
    const auto fd = train::finite_diff_grad(batch, spec, params, 1e-5);

    double worst_rel = 0.0, worst_abs = 0.0;
    for (std::size_t p = 0; p < grad.size(); ++p) {
        const double diff = std::abs(grad[p] - fd[p]);
        if (std::abs(grad[p]) > 1e-6) {
            const double rel = diff / std::max(std::abs(grad[p]), std::abs(fd[p]));
            worst_rel = std::max(worst_rel, rel);
            if (rel > 1e-4) {
                fail("coordinate " + std::to_string(p) + " relative error " + fmt(rel));
            }
        } else {
            worst_abs = std::max(worst_abs, diff);
            if (diff > 1e-7) {
                fail("coordinate " + std::to_string(p) + " absolute error " + fmt(diff));
            }
        }
    }
    return std::to_string(grad.size()) + " coordinates, max relative error " + fmt(worst_rel) +
           ", max absolute error (near-zero coords) " + fmt(worst_abs);
}

std::string check_readout() {
    // Fixed-point values of the readout families.
    const Statevector s00 = zero_state(2);
    const auto d3 = model::class_probs(s00, model::measurement_ops(3, 2));
    if (std::abs(d3.probs[0] - 0.25) > 1e-12 || std::abs(d3.probs[1] - 0.25) > 1e-12 ||
        std::abs(d3.probs[2] - 0.5) > 1e-12) {
        fail("three-class readout of |00> is off");
    }
    const auto d2 = model::class_probs(s00, model::measurement_ops(2, 2));
    if (std::abs(d2.probs[0] - 1.0) > 1e-12 || std::abs(d2.probs[1]) > 1e-12) {
        fail("two-class readout of |00> is off");
    }
    const Statevector plus0 = apply_gate(zero_state(2), GateOp::h(0));
    const auto ops4 = model::measurement_ops(4, 2);
    const auto d4 = model::class_probs(plus0, ops4);
    double denom = 0.0;
    std::vector<double> expect(4);
    for (int k = 0; k < 4; ++k) {
        expect[k] = dense_pauli_expectation(plus0, ops4[k]);
        denom += 1.0 + expect[k];
    }
    for (int k = 0; k < 4; ++k) {
        if (std::abs(d4.probs[k] - (1.0 + expect[k]) / denom) > 1e-12) {
            fail("four-class readout disagrees with the dense operator evaluation");
        }
    }

    // Distributions sum to 1 across random forwards.
    Rng rng(8086);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        model::ModelSpec spec;
        model::HeadSpec hs;
        hs.grid_rows = 1;
        hs.grid_cols = 1 + static_cast<int>(rng.below(3));
        hs.qfm = QfmSpec{2 + static_cast<int>(rng.below(2)), 1};
        spec.heads.push_back(hs);
        spec.qffn = QffnSpec{hs.qfm.n_qubits, 1};
        spec.n_classes = 2 + static_cast<int>(rng.below(3));
        Rng prng = rng.fork(trial);
        const auto params = model::init_params(spec, prng);
        const auto r = model::forward(random_sample(prng, spec), spec, params);
        double sum = 0.0;
        for (double p : r.probs.probs) sum += p;
        worst = std::max(worst, std::abs(sum - 1.0));
        if (worst > 1e-9) fail("distribution sum deviates by " + fmt(worst));
    }
    return "fixed-point values exact; 1000 random forwards, sum deviation <= " + fmt(worst);
}

// ---- criteria 8-12 ---------------------------------------------------------

bool dataset_available(const std::string& data_dir, const std::string& name, std::string* why) {
    const std::string base = data_dir + "/" + name + "/";
    for (const char* f : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                          "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"}) {
        if (!std::filesystem::exists(base + f)) {
            *why = "missing " + base + f;
            return false;
        }
    }
    return true;
}

struct DatasetCache {
    std::string data_dir;
    bool mnist_loaded = false, fashion_loaded = false;
    data::Dataset mnist, fashion;

    const data::Dataset& get(const std::string& name) {
        const std::string base = data_dir + "/" + name + "/";
        auto load = [&base] {
            data::Dataset d;
            d.train = data::load_idx(base + "train-images-idx3-ubyte",
                                     base + "train-labels-idx1-ubyte");
            d.test = data::load_idx(base + "t10k-images-idx3-ubyte",
                                    base + "t10k-labels-idx1-ubyte");
            return d;
        };
        if (name == "mnist") {
            if (!mnist_loaded) {
                mnist = load();
                mnist_loaded = true;
            }
            return mnist;
        }
        if (!fashion_loaded) {
            fashion = load();
            fashion_loaded = true;
        }
        return fashion;
    }
};

ExperimentConfig base_config(const std::string& dataset, std::vector<int> classes, int n_qubits,
                             int heads, int threads) {
    ExperimentConfig cfg;
    cfg.dataset = dataset;
    cfg.classes = std::move(classes);
    cfg.n_qubits = n_qubits;
    cfg.heads = heads;
    cfg.head_grids = heads == 1 ? std::vector<data::Grid>{{2, 2}}
                                : std::vector<data::Grid>{{2, 2}, {7, 7}};
    cfg.threads = threads;
    return cfg;
}

std::string acc_str(const train::RunResult& r) {
    std::string s = format_mean_std(100.0 * r.mean_test_acc, 100.0 * r.std_test_acc) + "% [";
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
        if (i) s += ' ';
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.4f", r.seeds[i].final_test_acc);
        s += buf;
    }
    return s + "]";
}

CheckResult skip(const std::string& name, const std::string& why) {
    return {name, Status::Skip, why, 0.0};
}

} // namespace

std::vector<CheckResult> property_checks() {
    std::vector<CheckResult> out;
    out.push_back(run_check("1. hadamard-test readout matches the direct inner product "
                            "(500 random circuit pairs, 1e-9)",
                            10.0, check_hadamard_oracle));
    out.push_back(run_check("2. CLCU circuit path matches the analytic combination and the "
                            "success-probability law (300 cases, 1e-9)",
                            30.0, check_clcu_equivalence));
    out.push_back(run_check("3. block-encoding round-trip recovers the weights up to scale "
                            "and phase (1e-9)",
                            10.0, check_block_encoding));
    out.push_back(run_check("4. preparation unitarity and gate-level transpose identity "
                            "(N <= 8, 1e-10)",
                            0.0, check_prep_unitarity));
    out.push_back(run_check("5. fully circuit-realized forward matches the analytic forward "
                            "(1e-6)",
                            60.0, check_forward_circuit_consistency));
    out.push_back(run_check("6. adjoint gradients match central finite differences "
                            "(relative 1e-4)",
                            60.0, check_gradients));
    out.push_back(run_check("7. readout distributions: fixed-point values and normalization",
                            0.0, check_readout));
    return out;
}

std::vector<CheckResult> quantitative_checks(const std::string& data_dir, int threads) {
    std::vector<CheckResult> out;
    DatasetCache cache;
    cache.data_dir = data_dir;

    const std::string n8 = "8. MNIST 2-class, 4 qubits, 1 head: mean test accuracy >= 98.5%";
    const std::string n9 = "9. MNIST 3-class, 3 qubits, 1 head: mean test accuracy >= 95.5%";
    const std::string n10 =
        "10. Fashion-MNIST 2-class, 4 qubits, 1 head: mean test accuracy >= 97.0%";
    const std::string n11 =
        "11. MNIST 3-class, 4 qubits: complex attention >= real-overlap attention - 0.2%";
    const std::string n12 = "12. MNIST 4-class, 4 qubits: 2-head beats 1-head by >= 1.0%";

    std::string why;
    const bool have_mnist = dataset_available(data_dir, "mnist", &why);
    std::string mnist_why = why;
    const bool have_fashion = dataset_available(data_dir, "fashion", &why);
    std::string fashion_why = why;

    if (!have_mnist) {
        out.push_back(skip(n8, mnist_why));
    } else {
        out.push_back(run_check(n8, 0.0, [&] {
            const auto cfg = base_config("mnist", {0, 1}, 4, 1, threads);
            const auto r = train::train_run(cfg, cache.get("mnist"));
            if (r.mean_test_acc < 0.985) fail("mean accuracy " + acc_str(r) + " below 98.5%");
            return "mean " + acc_str(r);
        }));
    }

    if (!have_mnist) {
        out.push_back(skip(n9, mnist_why));
    } else {
        out.push_back(run_check(n9, 0.0, [&] {
            const auto cfg = base_config("mnist", {0, 1, 2}, 3, 1, threads);
            const auto r = train::train_run(cfg, cache.get("mnist"));
            if (r.mean_test_acc < 0.955) fail("mean accuracy " + acc_str(r) + " below 95.5%");
            return "mean " + acc_str(r);
        }));
    }

    if (!have_fashion) {
        out.push_back(skip(n10, fashion_why));
    } else {
        out.push_back(run_check(n10, 0.0, [&] {
            const auto cfg = base_config("fashion", {0, 1}, 4, 1, threads);
            const auto r = train::train_run(cfg, cache.get("fashion"));
            if (r.mean_test_acc < 0.970) fail("mean accuracy " + acc_str(r) + " below 97.0%");
            return "mean " + acc_str(r);
        }));
    }

    if (!have_mnist) {
        out.push_back(skip(n11, mnist_why));
    } else {
        out.push_back(run_check(n11, 0.0, [&] {
            auto cfg = base_config("mnist", {0, 1, 2}, 4, 1, threads);
            const auto complex_run = train::train_run(cfg, cache.get("mnist"));
            cfg.attention_mode = model::AttentionMode::RealOverlap;
            const auto overlap_run = train::train_run(cfg, cache.get("mnist"));
            if (complex_run.mean_test_acc < overlap_run.mean_test_acc - 0.002) {
                fail("complex " + acc_str(complex_run) + " vs real-overlap " +
                     acc_str(overlap_run));
            }
            return "complex " + acc_str(complex_run) + " vs real-overlap " +
                   acc_str(overlap_run);
        }));
    }

    if (!have_mnist) {
        out.push_back(skip(n12, mnist_why));
    } else {
        out.push_back(run_check(n12, 0.0, [&] {
            const auto cfg1 = base_config("mnist", {0, 1, 2, 3}, 4, 1, threads);
            const auto one = train::train_run(cfg1, cache.get("mnist"));
            const auto cfg2 = base_config("mnist", {0, 1, 2, 3}, 4, 2, threads);
            const auto two = train::train_run(cfg2, cache.get("mnist"));
            if (two.mean_test_acc - one.mean_test_acc < 0.010) {
                fail("2-head " + acc_str(two) + " vs 1-head " + acc_str(one) +
                     ", gap below 1.0%");
            }
            return "2-head " + acc_str(two) + " vs 1-head " + acc_str(one);
        }));
    }

    return out;
}

bool all_ok(const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        if (r.status == Status::Fail) return false;
    }
    return true;
}

void print_results(const std::vector<CheckResult>& results, std::ostream& os) {
    for (const auto& r : results) {
        const char* tag = r.status == Status::Pass ? "PASS"
                          : r.status == Status::Fail ? "FAIL"
                                                     : "SKIP";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", r.seconds);
        os << "[" << tag << "] " << r.name;
        if (r.status != Status::Skip) os << " (" << buf << " s)";
        if (!r.detail.empty()) os << " -- " << r.detail;
        os << "\n";
    }
}

} // namespace qcsam::verify
