#pragma once

#include <span>
#include <vector>

#include "qcsam/config.hpp"
#include "qcsam/data.hpp"
#include "qcsam/grad.hpp"
#include "qcsam/metrics.hpp"

namespace qcsam::train {

struct AdamConfig {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;
    AdamConfig cfg;

    static AdamState init(std::size_t n, AdamConfig cfg = {});
};

// Standard bias-corrected Adam update, in place.
void adam_step(AdamState& state, std::vector<double>& params, std::span<const double> grad);

double evaluate_accuracy(std::span<const model::Sample> samples, const model::ModelSpec& spec,
                         const model::ModelParams& params, int n_threads);

struct SeedResult {
    std::uint64_t seed = 0;
    std::vector<MetricsRecord> epochs; // epoch 0 = initial evaluation
    double final_test_acc = 0.0;
    std::vector<double> final_params; // canonical flattening after the last epoch
};

struct RunResult {
    std::vector<SeedResult> seeds;
    double mean_test_acc = 0.0;
    double std_test_acc = 0.0;
};

// One seeded training run: subsample, per-head PCA fit on the training split,
// preparation, Adam epochs with seeded shuffles. Deterministic in
// (seed, config, data) except for the recorded wall times.
SeedResult train_seed(const ExperimentConfig& cfg, const data::Dataset& dataset,
                      std::uint64_t seed);

RunResult train_run(const ExperimentConfig& cfg, const data::Dataset& dataset);

} // namespace qcsam::train
