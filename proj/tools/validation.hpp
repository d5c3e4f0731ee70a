#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mmmeta::tools {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    /// Measured numbers, and every failed sub-check.
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    std::size_t n_realizations = 100000;
    std::uint64_t seed = 20240601;
    unsigned threads = 0;
};

std::vector<int> all_criteria();
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opt = {});

/// Two-sided sign-test p-value for k positive signs out of n.
double sign_test_p(int k, int n);

}  // namespace mmmeta::tools
