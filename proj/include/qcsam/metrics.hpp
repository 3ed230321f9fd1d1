#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcsam {

struct MetricsRecord {
    std::uint64_t seed = 0;
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    double wall_time_seconds = 0.0;
};

// Fixed header, one row per (seed, epoch). All columns except
// wall_time_seconds are deterministic for a given config and seed set.
extern const char* kMetricsCsvHeader;
std::string metrics_to_csv(const std::vector<MetricsRecord>& records);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records);

// "99.84±0.31" style, percentages with two decimals.
std::string format_mean_std(double mean, double stddev);

// Sample standard deviation (n-1 denominator; 0 for n < 2).
double sample_stddev(const std::vector<double>& xs, double mean);

} // namespace qcsam
