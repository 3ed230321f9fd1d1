#include "qcsam/train.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace qcsam::train {

AdamState AdamState::init(std::size_t n, AdamConfig cfg) {
    AdamState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.cfg = cfg;
    return s;
}

void adam_step(AdamState& state, std::vector<double>& params, std::span<const double> grad) {
    if (params.size() != state.m.size() || grad.size() != state.m.size()) {
        throw ShapeError("adam state/parameter/gradient lengths differ");
    }
    state.step += 1;
    const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= state.cfg.lr * mhat / (std::sqrt(vhat) + state.cfg.eps);
    }
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct EvalCounts {
    double loss = 0.0;
    long correct = 0;
};

EvalCounts evaluate(std::span<const model::Sample> samples, const model::ModelSpec& spec,
                    const model::ModelParams& params, int n_threads) {
    const std::size_t N = samples.size();
    std::vector<double> losses(N, 0.0);
    std::vector<char> hits(N, 0);
    const int T = std::max(1, std::min<int>(n_threads, static_cast<int>(N)));
    auto worker = [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto r = model::forward(samples[i], spec, params);
            losses[i] = model::cross_entropy(r.probs, samples[i].label);
            int arg = 0;
            for (std::size_t c = 1; c < r.probs.probs.size(); ++c) {
                if (r.probs.probs[c] > r.probs.probs[arg]) arg = static_cast<int>(c);
            }
            hits[i] = arg == samples[i].label ? 1 : 0;
        }
    };
    if (T == 1) {
        worker(0, N);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (N + T - 1) / T;
        for (int t = 0; t < T; ++t) {
            const std::size_t b = t * chunk, e = std::min(N, b + chunk);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }
    EvalCounts out;
    for (std::size_t i = 0; i < N; ++i) {
        out.loss += losses[i];
        out.correct += hits[i];
    }
    out.loss /= static_cast<double>(N);
    return out;
}

} // namespace

double evaluate_accuracy(std::span<const model::Sample> samples, const model::ModelSpec& spec,
                         const model::ModelParams& params, int n_threads) {
    if (samples.empty()) throw ShapeError("empty evaluation set");
    const EvalCounts c = evaluate(samples, spec, params, n_threads);
    return static_cast<double>(c.correct) / static_cast<double>(samples.size());
}

SeedResult train_seed(const ExperimentConfig& cfg, const data::Dataset& dataset,
                      std::uint64_t seed) {
    cfg.validate();
    const int n_threads = resolve_threads(cfg.threads);
    const model::ModelSpec spec = cfg.model_spec();

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const data::Subsample split =
        data::subsample(dataset, cfg.classes, cfg.per_class_train, cfg.per_class_test, seed);

    std::vector<data::PcaModel> pcas;
    for (const auto& g : cfg.head_grids) {
        pcas.push_back(data::fit_pca(split.train, g, cfg.n_qubits));
    }
    const std::vector<model::Sample> train_set = data::prepare_samples(split.train, pcas);
    const std::vector<model::Sample> test_set = data::prepare_samples(split.test, pcas);

    Rng root(seed);
    Rng init_rng = root.fork(0x696e6974);
    model::ModelParams params = model::init_params(spec, init_rng);

    if (cfg.verify_circuit_path) {
        // Cross-check the analytic pipeline against the fully circuit-realized
        // one on a couple of prepared samples before training.
        const std::size_t n_check = std::min<std::size_t>(2, train_set.size());
        for (std::size_t i = 0; i < n_check; ++i) {
            const auto a = model::forward(train_set[i], spec, params);
            const auto c = model::forward_circuit(train_set[i], spec, params);
            for (std::size_t k = 0; k < a.probs.probs.size(); ++k) {
                if (std::abs(a.probs.probs[k] - c.probs.probs[k]) > 1e-6) {
                    throw InconsistencyError("circuit-path forward disagrees with analytic "
                                             "forward beyond 1e-6");
                }
            }
        }
    }

    std::vector<double> flat = model::flatten(spec, params);
    AdamState adam = AdamState::init(flat.size(), AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8});

    SeedResult result;
    result.seed = seed;

    {
        const EvalCounts tr = evaluate(train_set, spec, params, n_threads);
        const double test_acc = evaluate_accuracy(test_set, spec, params, n_threads);
        result.epochs.push_back({seed, 0, tr.loss,
                                 static_cast<double>(tr.correct) / train_set.size(), test_acc,
                                 elapsed()});
    }

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng shuffle_rng = root.fork(0x65706f63 + static_cast<std::uint64_t>(epoch));
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        std::size_t n_batches = 0;
        std::vector<model::Sample> batch;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t e = std::min(order.size(), b + cfg.batch_size);
            batch.clear();
            for (std::size_t i = b; i < e; ++i) batch.push_back(train_set[order[i]]);
            const model::ModelParams p = model::unflatten(spec, flat);
            auto [loss, grad] = loss_and_grad(batch, spec, p, n_threads);
            adam_step(adam, flat, grad);
            loss_sum += loss;
            ++n_batches;
        }

        const model::ModelParams p = model::unflatten(spec, flat);
        const double train_acc = evaluate_accuracy(train_set, spec, p, n_threads);
        const double test_acc = evaluate_accuracy(test_set, spec, p, n_threads);
        result.epochs.push_back({seed, epoch, loss_sum / static_cast<double>(n_batches),
                                 train_acc, test_acc, elapsed()});
    }

    result.final_test_acc = result.epochs.back().test_acc;
    result.final_params = std::move(flat);
    return result;
}

RunResult train_run(const ExperimentConfig& cfg, const data::Dataset& dataset) {
    cfg.validate();
    RunResult run;
    std::vector<double> finals;
    for (std::uint64_t seed : cfg.seeds) {
        run.seeds.push_back(train_seed(cfg, dataset, seed));
        finals.push_back(run.seeds.back().final_test_acc);
    }
    double mean = 0.0;
    for (double a : finals) mean += a;
    mean /= static_cast<double>(finals.size());
    run.mean_test_acc = mean;
    run.std_test_acc = sample_stddev(finals, mean);
    return run;
}

} // namespace qcsam::train
