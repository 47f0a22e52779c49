#pragma once

#include <string>
#include <vector>

namespace hamcap {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

struct AcceptanceOptions {
    int threads = 0;  // 0: library default
};

// Runs the eight verification criteria; each entry carries a one-line
// detail string with the measured numbers.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

bool all_passed(const std::vector<CriterionResult>& results);

// one line per criterion: "PASS  3  no-orbit certificates  (12.3 s)  ..."
std::string format_result_line(const CriterionResult& r);

}  // namespace hamcap
