#include "qcsam/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qcsam {

const char* kMetricsCsvHeader = "seed,epoch,train_loss,train_acc,test_acc,wall_time_seconds";

std::string metrics_to_csv(const std::vector<MetricsRecord>& records) {
    std::string out = kMetricsCsvHeader;
    out.push_back('\n');
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%llu,%d,%.12g,%.12g,%.12g,%.3f\n",
                      static_cast<unsigned long long>(r.seed), r.epoch, r.train_loss,
                      r.train_acc, r.test_acc, r.wall_time_seconds);
        out += buf;
    }
    return out;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write metrics file: " + path);
    f << metrics_to_csv(records);
}

std::string format_mean_std(double mean, double stddev) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f±%.2f", mean, stddev);
    return buf;
}

double sample_stddev(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

} // namespace qcsam
