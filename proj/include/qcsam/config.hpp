#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcsam/data.hpp"
#include "qcsam/model.hpp"

namespace qcsam {

// Declarative description of one experiment run. Serialized as a single JSON
// document; CLI flags may override individual fields.
struct ExperimentConfig {
    std::string dataset = "mnist"; // "mnist" | "fashion"
    std::vector<int> classes = {0, 1};
    int n_qubits = 4;   // 3..8
    int heads = 1;      // 1 or 2
    std::vector<data::Grid> head_grids = {{2, 2}}; // each 2x2 or 7x7
    int qfm_layers = 2;
    int qffn_layers = 1;
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 0.01;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    int per_class_train = 512;
    int per_class_test = 128;
    model::AttentionMode attention_mode = model::AttentionMode::Complex;
    bool verify_circuit_path = false;
    std::string data_dir = "data";
    std::string out_dir = "results";
    int threads = 0; // 0 = hardware concurrency

    bool operator==(const ExperimentConfig&) const = default;

    // Throws ConfigError naming the offending field.
    void validate() const;

    model::ModelSpec model_spec() const;

    std::string images_train_path() const;
    std::string labels_train_path() const;
    std::string images_test_path() const;
    std::string labels_test_path() const;

    std::string to_json_string() const;
    static ExperimentConfig from_json_string(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    void save(const std::string& path) const;
};

} // namespace qcsam
