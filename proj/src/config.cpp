#include "qcsam/config.hpp"

#include <fstream>

#include <json.hpp>

namespace qcsam {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (dataset != "mnist" && dataset != "fashion") {
        throw ConfigError("dataset: must be 'mnist' or 'fashion'");
    }
    if (classes.size() < 2 || classes.size() > 4) {
        throw ConfigError("classes: need 2-4 class labels");
    }
    for (int c : classes) {
        if (c < 0 || c > 9) throw ConfigError("classes: labels must be 0-9");
    }
    if (n_qubits < 3 || n_qubits > 8) throw ConfigError("n_qubits: must be in 3..8");
    if (heads != 1 && heads != 2) throw ConfigError("heads: must be 1 or 2");
    if (static_cast<int>(head_grids.size()) != heads) {
        throw ConfigError("head_grids: need exactly one grid per head");
    }
    for (const auto& g : head_grids) {
        const bool ok = (g.rows == 2 && g.cols == 2) || (g.rows == 7 && g.cols == 7);
        if (!ok) throw ConfigError("head_grids: grids must be 2x2 or 7x7");
    }
    if (qfm_layers < 1) throw ConfigError("qfm_layers: must be >= 1");
    if (qffn_layers < 1) throw ConfigError("qffn_layers: must be >= 1");
    if (epochs < 0) throw ConfigError("epochs: must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size: must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate: must be > 0");
    if (seeds.empty()) throw ConfigError("seeds: need at least one seed");
    if (per_class_train < 1) throw ConfigError("per_class_train: must be >= 1");
    if (per_class_test < 1) throw ConfigError("per_class_test: must be >= 1");
    if (threads < 0) throw ConfigError("threads: must be >= 0");
}

model::ModelSpec ExperimentConfig::model_spec() const {
    model::ModelSpec spec;
    for (const auto& g : head_grids) {
        model::HeadSpec hs;
        hs.grid_rows = g.rows;
        hs.grid_cols = g.cols;
        hs.qfm = QfmSpec{n_qubits, qfm_layers};
        spec.heads.push_back(hs);
    }
    spec.qffn = QffnSpec{n_qubits, qffn_layers};
    spec.n_classes = static_cast<int>(classes.size());
    spec.mode = attention_mode;
    return spec;
}

std::string ExperimentConfig::images_train_path() const {
    return data_dir + "/" + dataset + "/train-images-idx3-ubyte";
}
std::string ExperimentConfig::labels_train_path() const {
    return data_dir + "/" + dataset + "/train-labels-idx1-ubyte";
}
std::string ExperimentConfig::images_test_path() const {
    return data_dir + "/" + dataset + "/t10k-images-idx3-ubyte";
}
std::string ExperimentConfig::labels_test_path() const {
    return data_dir + "/" + dataset + "/t10k-labels-idx1-ubyte";
}

std::string ExperimentConfig::to_json_string() const {
    json j;
    j["dataset"] = dataset;
    j["classes"] = classes;
    j["n_qubits"] = n_qubits;
    j["heads"] = heads;
    json grids = json::array();
    for (const auto& g : head_grids) grids.push_back({g.rows, g.cols});
    j["head_grids"] = grids;
    j["qfm_layers"] = qfm_layers;
    j["qffn_layers"] = qffn_layers;
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["learning_rate"] = learning_rate;
    j["seeds"] = seeds;
    j["per_class_train"] = per_class_train;
    j["per_class_test"] = per_class_test;
    j["attention_mode"] =
        attention_mode == model::AttentionMode::Complex ? "complex" : "real_overlap";
    j["verify_circuit_path"] = verify_circuit_path;
    j["data_dir"] = data_dir;
    j["out_dir"] = out_dir;
    j["threads"] = threads;
    return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (j.contains("dataset")) c.dataset = j["dataset"].get<std::string>();
        if (j.contains("classes")) c.classes = j["classes"].get<std::vector<int>>();
        if (j.contains("n_qubits")) c.n_qubits = j["n_qubits"].get<int>();
        if (j.contains("heads")) c.heads = j["heads"].get<int>();
        if (j.contains("head_grids")) {
            c.head_grids.clear();
            for (const auto& g : j["head_grids"]) {
                c.head_grids.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
            }
        }
        if (j.contains("qfm_layers")) c.qfm_layers = j["qfm_layers"].get<int>();
        if (j.contains("qffn_layers")) c.qffn_layers = j["qffn_layers"].get<int>();
        if (j.contains("epochs")) c.epochs = j["epochs"].get<int>();
        if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<int>();
        if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"].get<double>();
        if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("per_class_train")) c.per_class_train = j["per_class_train"].get<int>();
        if (j.contains("per_class_test")) c.per_class_test = j["per_class_test"].get<int>();
        if (j.contains("attention_mode")) {
            const std::string m = j["attention_mode"].get<std::string>();
            if (m == "complex") {
                c.attention_mode = model::AttentionMode::Complex;
            } else if (m == "real_overlap") {
                c.attention_mode = model::AttentionMode::RealOverlap;
            } else {
                throw ConfigError("attention_mode: must be 'complex' or 'real_overlap'");
            }
        }
        if (j.contains("verify_circuit_path")) {
            c.verify_circuit_path = j["verify_circuit_path"].get<bool>();
        }
        if (j.contains("data_dir")) c.data_dir = j["data_dir"].get<std::string>();
        if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
        if (j.contains("threads")) c.threads = j["threads"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write config file: " + path);
    f << to_json_string();
}

} // namespace qcsam
