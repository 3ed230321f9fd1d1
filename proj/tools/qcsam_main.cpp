#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcsam/config.hpp"
#include "qcsam/train.hpp"
#include "qcsam/verify.hpp"

namespace {

using qcsam::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

qcsam::data::Dataset load_dataset(const ExperimentConfig& cfg) {
    qcsam::data::Dataset d;
    d.train = qcsam::data::load_idx(cfg.images_train_path(), cfg.labels_train_path());
    d.test = qcsam::data::load_idx(cfg.images_test_path(), cfg.labels_test_path());
    return d;
}

nlohmann::json summary_json(const ExperimentConfig& cfg, const qcsam::train::RunResult& run) {
    nlohmann::json j;
    j["config"] = nlohmann::json::parse(cfg.to_json_string());
    nlohmann::json finals = nlohmann::json::array();
    for (const auto& s : run.seeds) {
        finals.push_back({{"seed", s.seed}, {"final_test_acc", s.final_test_acc}});
    }
    j["per_seed"] = finals;
    j["mean_test_acc"] = run.mean_test_acc;
    j["std_test_acc"] = run.std_test_acc;
    j["test_acc_pct"] =
        qcsam::format_mean_std(100.0 * run.mean_test_acc, 100.0 * run.std_test_acc);
    return j;
}

std::vector<qcsam::MetricsRecord> collect_records(const qcsam::train::RunResult& run) {
    std::vector<qcsam::MetricsRecord> records;
    for (const auto& s : run.seeds) {
        records.insert(records.end(), s.epochs.begin(), s.epochs.end());
    }
    return records;
}

int cmd_run(ExperimentConfig cfg) {
    cfg.validate();
    const auto dataset = load_dataset(cfg);
    const auto run = qcsam::train::train_run(cfg, dataset);

    std::filesystem::create_directories(cfg.out_dir);
    qcsam::write_metrics_csv(cfg.out_dir + "/metrics.csv", collect_records(run));
    std::ofstream sf(cfg.out_dir + "/summary.json");
    sf << summary_json(cfg, run).dump(2) << "\n";

    std::cout << "test accuracy: "
              << qcsam::format_mean_std(100.0 * run.mean_test_acc, 100.0 * run.std_test_acc)
              << "% over " << run.seeds.size() << " seeds\n"
              << "wrote " << cfg.out_dir << "/metrics.csv and " << cfg.out_dir
              << "/summary.json\n";
    return kExitOk;
}

int cmd_sweep(ExperimentConfig base) {
    base.validate();
    std::filesystem::create_directories(base.out_dir);

    nlohmann::json cells = nlohmann::json::array();
    // rows: qubits 3..8; columns: class count x heads
    std::string csv = "qubits";
    for (int c = 2; c <= 4; ++c) {
        for (int h = 1; h <= 2; ++h) {
            csv += "," + std::to_string(c) + "class_" + std::to_string(h) + "H";
        }
    }
    csv += "\n";

    for (int q = 3; q <= 8; ++q) {
        csv += std::to_string(q);
        for (int c = 2; c <= 4; ++c) {
            for (int h = 1; h <= 2; ++h) {
                ExperimentConfig cfg = base;
                cfg.n_qubits = q;
                cfg.classes.clear();
                for (int i = 0; i < c; ++i) cfg.classes.push_back(i);
                cfg.heads = h;
                cfg.head_grids = h == 1 ? std::vector<qcsam::data::Grid>{{2, 2}}
                                        : std::vector<qcsam::data::Grid>{{2, 2}, {7, 7}};
                nlohmann::json cell;
                cell["qubits"] = q;
                cell["classes"] = c;
                cell["heads"] = h;
                try {
                    cfg.validate();
                    const auto dataset = load_dataset(cfg);
                    const auto run = qcsam::train::train_run(cfg, dataset);
                    const std::string val = qcsam::format_mean_std(100.0 * run.mean_test_acc,
                                                                   100.0 * run.std_test_acc);
                    cell["test_acc_pct"] = val;
                    cell["mean_test_acc"] = run.mean_test_acc;
                    csv += "," + val;
                    std::cout << q << " qubits / " << c << "-class / " << h << "H: " << val
                              << "%\n";
                } catch (const std::exception& e) {
                    cell["error"] = e.what();
                    csv += ",failed";
                    std::cerr << q << " qubits / " << c << "-class / " << h
                              << "H failed: " << e.what() << "\n";
                }
                cells.push_back(cell);
            }
        }
        csv += "\n";
    }

    std::ofstream cf(base.out_dir + "/sweep.csv");
    cf << csv;
    std::ofstream jf(base.out_dir + "/sweep.json");
    jf << cells.dump(2) << "\n";
    std::cout << "wrote " << base.out_dir << "/sweep.csv\n";
    return kExitOk;
}

int cmd_verify(const std::string& data_dir, int threads, bool quantitative) {
    auto results = qcsam::verify::property_checks();
    if (quantitative) {
        auto more = qcsam::verify::quantitative_checks(data_dir, threads);
        results.insert(results.end(), more.begin(), more.end());
    }
    qcsam::verify::print_results(results, std::cout);
    return qcsam::verify::all_ok(results) ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QCSAM: complex-valued quantum self-attention classifier (exact simulation)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 0;

    auto* run_cmd = app.add_subcommand("run", "train and evaluate one configuration");
    run_cmd->add_option("--config", config_path, "JSON config path")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed_override, "replace the seed list");
    run_cmd->add_option("--out", out_override, "output directory override");
    run_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "scalability grid: qubits 3-8 x classes 2-4 x heads 1-2");
    sweep_cmd->add_option("--config", config_path, "JSON base config path")->required();
    sweep_cmd->add_option("--out", out_override, "output directory override");
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

    const char* env_data = std::getenv("QCSAM_DATA_DIR");
    std::string verify_data_dir = env_data ? env_data : "data";
    bool verify_full = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the property/oracle acceptance suite");
    verify_cmd->add_option("--data-dir", verify_data_dir,
                           "dataset root for the quantitative checks");
    verify_cmd->add_flag("--full", verify_full,
                         "also run the dataset-backed quantitative checks");
    verify_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand(verify_cmd)) {
            return cmd_verify(verify_data_dir, threads, verify_full);
        }
        ExperimentConfig cfg = ExperimentConfig::load(config_path);
        seed_given = seed_opt->count() > 0;
        if (seed_given) cfg.seeds = {seed_override};
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (threads > 0) cfg.threads = threads;
        if (app.got_subcommand(run_cmd)) return cmd_run(std::move(cfg));
        return cmd_sweep(std::move(cfg));
    } catch (const qcsam::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qcsam::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const qcsam::FormatError& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
