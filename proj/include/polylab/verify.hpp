#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace polylab {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    uint64_t seed = 42;
    bool quick = false;  // reduced replication smoke variant (documented wider tolerances)
    int workers = 0;
};

// Runs the acceptance suite, printing one pass/fail line per criterion to
// `log` as it completes. Returns all results.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace polylab
