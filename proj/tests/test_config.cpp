#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcsam/config.hpp"
#include "qcsam/metrics.hpp"
#include "qcsam/verify.hpp"

using namespace qcsam;

TEST_CASE("config round-trips through json") {
    ExperimentConfig c;
    c.dataset = "fashion";
    c.classes = {0, 1, 2};
    c.n_qubits = 5;
    c.heads = 2;
    c.head_grids = {{2, 2}, {7, 7}};
    c.qfm_layers = 3;
    c.epochs = 7;
    c.batch_size = 16;
    c.learning_rate = 0.02;
    c.seeds = {10, 20};
    c.per_class_train = 64;
    c.per_class_test = 32;
    c.attention_mode = model::AttentionMode::RealOverlap;
    c.verify_circuit_path = true;
    c.data_dir = "/tmp/data";
    c.out_dir = "/tmp/out";
    c.threads = 3;

    const ExperimentConfig back = ExperimentConfig::from_json_string(c.to_json_string());
    CHECK(back == c);
}

TEST_CASE("config validation names the field") {
    ExperimentConfig c;
    c.n_qubits = 9;
    try {
        c.validate();
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("n_qubits") != std::string::npos);
    }

    c = {};
    c.classes = {0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.heads = 2; // grids not updated
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.head_grids = {{3, 3}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.learning_rate = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.seeds.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("bad json is a config error") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_string("{nope"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_string(R"({"attention_mode": "bogus"})"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("model_spec mirrors the config") {
    ExperimentConfig c;
    c.heads = 2;
    c.head_grids = {{2, 2}, {7, 7}};
    c.n_qubits = 4;
    c.classes = {0, 1, 2};
    const auto spec = c.model_spec();
    CHECK(spec.heads.size() == 2);
    CHECK(spec.heads[0].n_patches() == 4);
    CHECK(spec.heads[1].n_patches() == 49);
    CHECK(spec.qffn.n_qubits == 4);
    CHECK(spec.n_classes == 3);
}

TEST_CASE("metrics csv schema") {
    std::vector<MetricsRecord> recs = {
        {1, 0, 0.7, 0.5, 0.5, 0.1},
        {1, 1, 0.3, 0.9, 0.875, 1.5},
    };
    const std::string csv = metrics_to_csv(recs);
    CHECK(csv.rfind("seed,epoch,train_loss,train_acc,test_acc,wall_time_seconds\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 3); // header + one row per record
    CHECK(csv.find("1,1,0.3,0.9,0.875,") != std::string::npos);
}

TEST_CASE("skipped checks do not fail the suite, failed ones do") {
    using verify::CheckResult;
    using verify::Status;
    std::vector<CheckResult> rs = {
        {"a", Status::Pass, "", 0.1},
        {"b", Status::Skip, "missing data", 0.0},
    };
    CHECK(verify::all_ok(rs));
    rs.push_back({"c", Status::Fail, "boom", 0.2});
    CHECK_FALSE(verify::all_ok(rs));
}

TEST_CASE("mean/std formatting matches the reporting style") {
    CHECK(format_mean_std(99.84, 0.31) == "99.84±0.31");
    CHECK(format_mean_std(100.0, 0.0) == "100.00±0.00");
    CHECK(sample_stddev({1.0, 1.0, 1.0}, 1.0) == doctest::Approx(0.0));
    CHECK(sample_stddev({1.0, 3.0}, 2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(sample_stddev({5.0}, 5.0) == 0.0);
}
