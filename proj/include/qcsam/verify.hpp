#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcsam::verify {

enum class Status { Pass, Fail, Skip };

struct CheckResult {
    std::string name;
    Status status = Status::Fail;
    std::string detail;
    double seconds = 0.0;
};

// Criteria 1-7: the property/oracle suite. Self-contained and fast.
std::vector<CheckResult> property_checks();

// Criteria 8-12: quantitative dataset reproductions. Each check trains the
// model on MNIST / Fashion-MNIST IDX files under `data_dir` and is skipped
// with an explanation when the files are not present.
std::vector<CheckResult> quantitative_checks(const std::string& data_dir, int threads);

bool all_ok(const std::vector<CheckResult>& results); // no Fail (Skip allowed)
void print_results(const std::vector<CheckResult>& results, std::ostream& os);

} // namespace qcsam::verify
