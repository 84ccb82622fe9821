#pragma once

#include <string>
#include <vector>

#include "eqlayer/report.hpp"

namespace eqlayer {

struct VerifyOptions {
    int grid = 64;            ///< base level G; refinement studies use G, 2G, 4G
    unsigned seed = 20240611;
    std::string output_dir;   ///< artifacts are written here when non-empty
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;  ///< one line of the key numbers
    DiagnosticsReport report;
    double seconds = 0.0;
    std::vector<std::string> artifacts;
};

constexpr int kCriterionCount = 11;

/// Runs one acceptance criterion (1 .. kCriterionCount). Exceptions from the
/// solver are caught and reported as failures.
CriterionResult run_criterion(int id, const VerifyOptions& options);

/// Runs the listed criteria (all when empty) in order.
std::vector<CriterionResult> run_verification(const VerifyOptions& options, const std::vector<int>& ids = {});

}  // namespace eqlayer
